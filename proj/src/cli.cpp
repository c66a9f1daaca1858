// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#include "hybp/cli.hpp"

#include "hybp/container.hpp"
#include "hybp/errors.hpp"
#include "hybp/eval.hpp"
#include "hybp/frame_io.hpp"
#include "hybp/synth.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hybp {

namespace {

uint64_t default_seed() {
    if (const char* env = std::getenv("HYBP_SEED")) return std::strtoull(env, nullptr, 10);
    return 42;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed on " + path);
}

void write_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed on " + path);
}

std::vector<uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string s = ss.str();
    return {s.begin(), s.end()};
}

SequenceFormat format_for(const std::string& path, const std::string& explicit_format) {
    if (!explicit_format.empty()) return sequence_format_from_string(explicit_format);
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".y4m") == 0)
        return SequenceFormat::Y4mLuma;
    return SequenceFormat::Rawv;
}

std::string alloc_csv(const std::vector<AllocationResult>& per_gop) {
    std::ostringstream os;
    os << "gop,qp,latent_bytes,legacy_bytes,total_bytes,within_budget\n";
    for (size_t g = 0; g < per_gop.size(); ++g) {
        const auto& a = per_gop[g];
        os << g << ',' << a.qp << ',' << a.latent_bytes << ',' << a.legacy_bytes << ','
           << a.total_bytes << ',' << (a.within_budget ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string timing_csv(const DecodeTiming& timing) {
    std::ostringstream os;
    os << "gop,generate_ms,stitch_ms,legacy_ms\n";
    for (size_t g = 0; g < timing.per_gop.size(); ++g) {
        const auto& t = timing.per_gop[g];
        os << g << ',' << t.generate_s * 1e3 << ',' << t.stitch_s * 1e3 << ','
           << t.legacy_s * 1e3 << '\n';
    }
    os << "wall,,," << timing.wall_s * 1e3 << '\n';
    return os.str();
}

struct CommonFlags {
    uint64_t seed = default_seed();
    int gop_length = 8;
    int latent_dim = 1024;
    int hidden = 256;
    int invert_iters = 800;
    int refine_iters = 400;
    double invert_step = 1e-2;
    double refine_step = 5e-3;
    int jobs = 1;
    bool no_b_frames = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "generator seed (HYBP_SEED overrides the default)");
        cmd->add_option("--gop", gop_length, "GOP length in frames")->check(CLI::PositiveNumber);
        cmd->add_option("--latent-dim", latent_dim, "latent dimension")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--hidden", hidden, "generator hidden width")->check(CLI::PositiveNumber);
        cmd->add_option("--invert-iters", invert_iters, "Step I iterations");
        cmd->add_option("--refine-iters", refine_iters, "Step III iterations");
        cmd->add_option("--invert-step", invert_step, "Step I learning rate");
        cmd->add_option("--refine-step", refine_step, "Step III learning rate");
        cmd->add_option("--jobs", jobs, "GOP-parallel workers")->check(CLI::PositiveNumber);
        cmd->add_flag("--no-b-frames", no_b_frames, "disable bi-predicted frames");
    }

    EvalSettings settings() const {
        EvalSettings s;
        s.codec.gop_length = gop_length;
        s.codec.b_frames_enabled = !no_b_frames;
        s.generator_seed = seed;
        s.latent_dim = latent_dim;
        s.hidden = hidden;
        s.inversion.iters = invert_iters;
        s.inversion.step = invert_step;
        s.refine.iters = refine_iters;
        s.refine.step = refine_step;
        s.jobs = jobs;
        return s;
    }
};

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const ChecksumError*>(&e)) return kExitChecksum;
    if (dynamic_cast<const FormatError*>(&e)) return kExitFormat;
    if (dynamic_cast<const OptimizationError*>(&e)) return kExitDivergence;
    return 1;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"hybrid generative/block video codec"};
    app.require_subcommand(1);

    // --- synth ---------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic test sequence");
    std::string synth_kind = "translate", synth_out;
    int synth_w = 64, synth_h = 64, synth_frames = 64;
    uint32_t synth_fps = 30;
    uint64_t synth_seed = default_seed();
    synth->add_option("--kind", synth_kind, "translate|rotate-gradient|noise|checker-pan");
    synth->add_option("--width", synth_w)->check(CLI::PositiveNumber);
    synth->add_option("--height", synth_h)->check(CLI::PositiveNumber);
    synth->add_option("--frames", synth_frames)->check(CLI::PositiveNumber);
    synth->add_option("--fps", synth_fps)->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed);
    synth->add_option("-o,--output", synth_out, "output .rawv path")->required();

    // --- encode --------------------------------------------------------------
    auto* encode = app.add_subcommand("encode", "transcode raw video into a hybrid stream");
    std::string enc_in, enc_out, enc_format, enc_csv;
    double enc_bitrate_kbps = 114.0;
    size_t enc_gop_bytes = 0;
    bool no_refine = false, no_two_stage = false, traditional_only = false, prompt_only = false;
    CommonFlags enc_flags;
    encode->add_option("-i,--input", enc_in, "input video (rawv or y4m)")->required();
    encode->add_option("-o,--output", enc_out, "output .hybp stream")->required();
    encode->add_option("--format", enc_format, "force input format: rawv|y4m-luma");
    encode->add_option("--bitrate", enc_bitrate_kbps, "target bitrate in kbps");
    encode->add_option("--gop-bytes", enc_gop_bytes, "per-GOP byte budget (overrides --bitrate)");
    encode->add_option("--alloc-csv", enc_csv, "write per-GOP allocation CSV here");
    enc_flags.add_to(encode);
    auto* f_noref = encode->add_flag("--no-refine", no_refine, "skip Step III refinement");
    auto* f_nots = encode->add_flag("--no-two-stage", no_two_stage,
                                    "generate at full resolution (no upsampler)");
    auto* f_trad = encode->add_flag("--traditional-only", traditional_only,
                                    "pure block codec with a lossless keyframe");
    auto* f_prompt = encode->add_flag("--prompt-only", prompt_only,
                                      "per-frame latents, no legacy track");
    f_trad->excludes(f_prompt)->excludes(f_noref)->excludes(f_nots);
    f_prompt->excludes(f_noref)->excludes(f_nots);

    // --- decode --------------------------------------------------------------
    auto* decode = app.add_subcommand("decode", "decode a hybrid stream to raw video");
    std::string dec_in, dec_out, dec_timing_csv;
    bool stitched = false, sequential = false;
    decode->add_option("-i,--input", dec_in, "input .hybp stream")->required();
    decode->add_option("-o,--output", dec_out, "output .rawv path")->required();
    decode->add_flag("--stitched", stitched,
                     "re-encode keyframes losslessly and feed the plain decoder");
    decode->add_flag("--sequential", sequential, "disable the two-stage decode pipeline");
    decode->add_option("--timing-csv", dec_timing_csv, "write per-stage timing CSV here");

    // --- eval ----------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "compare hybrid, no-refine, traditional, prompt-only");
    std::string eval_in, eval_format, eval_csv_path;
    std::vector<size_t> eval_budgets = {3200, 3800, 4300};
    CommonFlags eval_flags;
    eval->add_option("-i,--input", eval_in, "input video (rawv or y4m)")->required();
    eval->add_option("--format", eval_format, "force input format: rawv|y4m-luma");
    eval->add_option("--budgets", eval_budgets, "per-GOP byte budgets to sweep");
    eval->add_option("--csv", eval_csv_path, "write the comparison CSV here")->required();
    eval_flags.add_to(eval);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*synth) {
            const VideoSequence seq = synth_sequence(synth_kind_from_string(synth_kind), synth_w,
                                                     synth_h, synth_frames, synth_seed);
            VideoSequence out = seq;
            out.fps = synth_fps;
            write_sequence(out, synth_out, SequenceFormat::Rawv);
            return kExitOk;
        }

        if (*encode) {
            const VideoSequence seq = read_sequence(enc_in, format_for(enc_in, enc_format));
            EvalSettings s = enc_flags.settings();
            s.two_stage = !no_two_stage;
            const size_t budget =
                enc_gop_bytes > 0
                    ? enc_gop_bytes
                    : RateBudget{enc_bitrate_kbps * 1000.0, static_cast<double>(seq.fps),
                                 s.codec.gop_length}
                          .gop_budget_bytes();
            if (budget == 0) throw UsageError("encode: budget is zero");

            EvalMethod method = EvalMethod::Hybrid;
            if (no_refine) method = EvalMethod::NoRefine;
            if (traditional_only) method = EvalMethod::Traditional;
            if (prompt_only) method = EvalMethod::PromptOnly;

            const StreamBuild build = build_stream(seq, method, budget, s);
            write_bytes(enc_out, build.stream);
            if (!enc_csv.empty()) write_text(enc_csv, alloc_csv(build.per_gop));
            return build.all_within_budget ? kExitOk : kExitBudget;
        }

        if (*decode) {
            const auto bytes = read_bytes(dec_in);
            PipelineConfig pipeline;
            pipeline.pipelined = !sequential;
            const DecodeStreamResult result = decode_stream(
                bytes, stitched ? DecodeMode::Stitched : DecodeMode::Direct, pipeline);
            write_sequence(result.video, dec_out, SequenceFormat::Rawv);
            if (!dec_timing_csv.empty()) write_text(dec_timing_csv, timing_csv(result.timing));
            return kExitOk;
        }

        if (*eval) {
            const VideoSequence seq = read_sequence(eval_in, format_for(eval_in, eval_format));
            EvalSettings s = eval_flags.settings();
            s.budgets = eval_budgets;
            const auto points = run_eval(seq, s);
            write_text(eval_csv_path, eval_csv(points, seq.fps, s.codec.gop_length));
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "hybp: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kExitUsage;
}

} // namespace hybp
