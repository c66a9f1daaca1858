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

#include "hybp/eval.hpp"

#include "hybp/errors.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace hybp {

namespace {

std::vector<std::vector<Frame>> slice_gops(const VideoSequence& seq, int gop_length) {
    std::vector<std::vector<Frame>> gops;
    for (size_t start = 0; start < seq.frame_count(); start += gop_length) {
        const size_t end = std::min(seq.frame_count(), start + gop_length);
        gops.emplace_back(seq.frames.begin() + static_cast<long>(start),
                          seq.frames.begin() + static_cast<long>(end));
    }
    return gops;
}

template <typename Fn>
void for_each_gop(int n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(jobs, n);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

StreamHeader make_header(const VideoSequence& seq, const EvalSettings& s) {
    StreamHeader header;
    header.width = static_cast<uint16_t>(seq.frames[0].width);
    header.height = static_cast<uint16_t>(seq.frames[0].height);
    header.fps = seq.fps;
    header.codec = s.codec;
    header.two_stage = s.two_stage;
    return header;
}

// Spread one GOP's unit sizes onto presentation-order frames.
void attribute_bytes(const CodedGop& coded, size_t i_frame_bytes, std::vector<size_t>& bytes,
                     std::vector<FrameType>& types) {
    bytes.push_back(i_frame_bytes);
    types.push_back(FrameType::I);
    const auto schedule = gop_schedule(coded.frame_count, coded.b_frames);
    std::vector<size_t> by_pres(coded.frame_count, 0);
    std::vector<FrameType> type_by_pres(coded.frame_count, FrameType::P);
    for (size_t u = 0; u < schedule.size(); ++u) {
        by_pres[schedule[u].pres] = coded.sizes[u];
        type_by_pres[schedule[u].pres] = schedule[u].type;
    }
    for (int t = 1; t < coded.frame_count; ++t) {
        bytes.push_back(by_pres[t]);
        types.push_back(type_by_pres[t]);
    }
}

struct GopOutput {
    GopRecord record;
    AllocationResult alloc;
    std::vector<size_t> bytes;
    std::vector<FrameType> types;
};

StreamBuild assemble(std::vector<GopOutput> outputs, const VideoSequence& seq,
                     const EvalSettings& s) {
    StreamBuild build;
    std::vector<GopRecord> records;
    for (auto& out : outputs) {
        records.push_back(std::move(out.record));
        build.per_gop.push_back(out.alloc);
        build.all_within_budget = build.all_within_budget && out.alloc.within_budget;
        build.bytes_per_frame.insert(build.bytes_per_frame.end(), out.bytes.begin(),
                                     out.bytes.end());
        build.frame_types.insert(build.frame_types.end(), out.types.begin(), out.types.end());
    }
    build.stream = mux(records, make_header(seq, s));
    return build;
}

GopOutput traditional_gop(const std::vector<Frame>& gop, size_t budget, const EvalSettings& s) {
    GopOutput out;
    const size_t i_unit_bytes =
        8 + static_cast<size_t>(gop[0].width) * static_cast<size_t>(gop[0].height);
    auto [coded, alloc] = allocate(gop, gop[0], i_unit_bytes,
                                   RateBudget::from_gop_bytes(budget, 30.0,
                                                              static_cast<int>(gop.size())),
                                   s.codec);
    // re-encode once with the lossless I unit retained for the stream
    const CodedGop with_unit = encode_gop(gop, gop[0], alloc.qp, s.codec, true);
    out.record = {std::vector<uint8_t>{}, concat_units(with_unit, true)};
    out.alloc = alloc;
    attribute_bytes(with_unit, with_unit.i_unit_bytes(), out.bytes, out.types);
    return out;
}

} // namespace

std::string eval_method_name(EvalMethod method) {
    switch (method) {
    case EvalMethod::Hybrid: return "hybrid";
    case EvalMethod::NoRefine: return "no-refine";
    case EvalMethod::Traditional: return "traditional";
    case EvalMethod::PromptOnly: return "prompt-only";
    }
    return "?";
}

StreamBuild build_stream(const VideoSequence& seq, EvalMethod method, size_t budget,
                         const EvalSettings& s) {
    if (seq.empty()) throw UsageError("build_stream: empty sequence");
    const auto gops = slice_gops(seq, s.codec.gop_length);
    const int n = static_cast<int>(gops.size());
    std::vector<GopOutput> outputs(n);

    const GeneratorSpec spec = s.generator_spec(seq.frames[0].width, seq.frames[0].height);
    const GeneratorWeights gw =
        method == EvalMethod::Traditional ? GeneratorWeights{} : GeneratorWeights::build(spec);

    for_each_gop(n, s.jobs, [&](int g) {
        const auto& gop = gops[g];
        switch (method) {
        case EvalMethod::Hybrid:
        case EvalMethod::NoRefine: {
            TranscodeConfig cfg;
            cfg.codec = s.codec;
            cfg.inversion = s.inversion;
            cfg.refine = s.refine;
            cfg.budget_bytes = budget;
            cfg.refine_enabled = method == EvalMethod::Hybrid;
            const TranscodeResult t = transcode_gop(gop, gw, cfg);
            GopOutput out;
            out.record = {serialize_latent(t.latent), concat_units(t.coded, false)};
            out.alloc = t.alloc;
            attribute_bytes(t.coded, out.record.neural.size(), out.bytes, out.types);
            outputs[g] = std::move(out);
            break;
        }
        case EvalMethod::Traditional: outputs[g] = traditional_gop(gop, budget, s); break;
        case EvalMethod::PromptOnly: {
            GopOutput out;
            size_t total = 0;
            for (const auto& frame : gop) {
                const InvertResult inv = invert(frame, gw, s.inversion);
                const auto bytes = serialize_latent(inv.latent);
                total += bytes.size();
                out.record.neural.insert(out.record.neural.end(), bytes.begin(), bytes.end());
                out.bytes.push_back(bytes.size());
                out.types.push_back(FrameType::I);
            }
            out.alloc.qp = 0;
            out.alloc.latent_bytes = total;
            out.alloc.legacy_bytes = 0;
            out.alloc.total_bytes = total;
            out.alloc.within_budget = total <= budget;
            outputs[g] = std::move(out);
            break;
        }
        }
    });
    return assemble(std::move(outputs), seq, s);
}

MethodResult score_stream(const VideoSequence& source, const StreamBuild& build,
                          EvalMethod method, size_t budget) {
    MethodResult result;
    result.method = method;
    result.budget = budget;

    PipelineConfig pipeline;
    pipeline.pipelined = false;
    const DecodeStreamResult decoded = decode_stream(build.stream, DecodeMode::Direct, pipeline);
    result.quality = compare_sequences(decoded.video, source);
    result.quality.bytes_per_frame = build.bytes_per_frame;
    result.mean_psnr = result.quality.mean_psnr;

    double sums[3] = {0.0, 0.0, 0.0};
    size_t counts[3] = {0, 0, 0};
    for (size_t i = 0; i < build.bytes_per_frame.size(); ++i) {
        const int k = static_cast<int>(build.frame_types[i]);
        sums[k] += static_cast<double>(build.bytes_per_frame[i]);
        ++counts[k];
    }
    result.i_bytes_avg = counts[0] ? sums[0] / counts[0] : 0.0;
    result.p_bytes_avg = counts[1] ? sums[1] / counts[1] : 0.0;
    result.b_bytes_avg = counts[2] ? sums[2] / counts[2] : 0.0;
    for (const auto& a : build.per_gop) result.total_payload_bytes += a.total_bytes;
    result.within_budget = build.all_within_budget;
    return result;
}

HybridPair run_hybrid_pair(const VideoSequence& seq, size_t budget, const EvalSettings& s) {
    if (seq.empty()) throw UsageError("run_hybrid_pair: empty sequence");
    const auto gops = slice_gops(seq, s.codec.gop_length);
    const int n = static_cast<int>(gops.size());
    const GeneratorSpec spec = s.generator_spec(seq.frames[0].width, seq.frames[0].height);
    const GeneratorWeights gw = GeneratorWeights::build(spec);

    std::vector<GopOutput> hybrid_out(n), noref_out(n);
    for_each_gop(n, s.jobs, [&](int g) {
        TranscodeConfig cfg;
        cfg.codec = s.codec;
        cfg.inversion = s.inversion;
        cfg.refine = s.refine;
        cfg.budget_bytes = budget;
        const TranscodeResult t = transcode_gop(gops[g], gw, cfg);

        GopOutput h;
        h.record = {serialize_latent(t.latent), concat_units(t.coded, false)};
        h.alloc = t.alloc;
        attribute_bytes(t.coded, h.record.neural.size(), h.bytes, h.types);

        GopOutput nr;
        nr.record = {serialize_latent(t.latent_prerefine), concat_units(t.coded, false)};
        nr.alloc = t.alloc;
        attribute_bytes(t.coded, nr.record.neural.size(), nr.bytes, nr.types);

        hybrid_out[g] = std::move(h);
        noref_out[g] = std::move(nr);
    });
    HybridPair pair;
    pair.hybrid_build = assemble(std::move(hybrid_out), seq, s);
    pair.no_refine_build = assemble(std::move(noref_out), seq, s);
    pair.hybrid = score_stream(seq, pair.hybrid_build, EvalMethod::Hybrid, budget);
    pair.no_refine = score_stream(seq, pair.no_refine_build, EvalMethod::NoRefine, budget);
    return pair;
}

std::vector<MethodResult> run_eval(const VideoSequence& seq, const EvalSettings& s) {
    if (seq.empty()) throw UsageError("run_eval: empty sequence");
    std::vector<MethodResult> points;

    const auto gops = slice_gops(seq, s.codec.gop_length);
    const int n = static_cast<int>(gops.size());

    // prompt-only is budget independent; build it once
    const StreamBuild prompt_build = build_stream(seq, EvalMethod::PromptOnly, 0, s);

    for (size_t budget : s.budgets) {
        HybridPair pair = run_hybrid_pair(seq, budget, s);
        points.push_back(std::move(pair.hybrid));
        points.push_back(std::move(pair.no_refine));

        StreamBuild trad;
        {
            std::vector<GopOutput> outputs(n);
            for_each_gop(n, s.jobs, [&](int g) { outputs[g] = traditional_gop(gops[g], budget, s); });
            trad = assemble(std::move(outputs), seq, s);
        }
        points.push_back(score_stream(seq, trad, EvalMethod::Traditional, budget));

        MethodResult prompt = score_stream(seq, prompt_build, EvalMethod::PromptOnly, budget);
        prompt.within_budget = true;
        for (const auto& a : prompt_build.per_gop)
            prompt.within_budget = prompt.within_budget && a.total_bytes <= budget;
        points.push_back(prompt);
    }
    return points;
}

ParityResult traditional_at_bytes(const VideoSequence& seq, size_t target_bytes,
                                  const EvalSettings& s) {
    const auto gops = slice_gops(seq, s.codec.gop_length);
    const int n = static_cast<int>(gops.size());
    const size_t i_unit_bytes = 8 + static_cast<size_t>(seq.frames[0].width) * seq.frames[0].height;

    // full sweep of per-GOP legacy sizes
    std::vector<std::vector<size_t>> legacy(n, std::vector<size_t>(s.codec.qp_max + 1, 0));
    for_each_gop(n, s.jobs, [&](int g) {
        for (int qp = 0; qp <= s.codec.qp_max; ++qp)
            legacy[g][qp] = size_probe(gops[g], gops[g][0], qp, s.codec);
    });

    int best_over = -1, best_under = -1;
    size_t total_over = SIZE_MAX, total_under = 0;
    for (int qp = 0; qp <= s.codec.qp_max; ++qp) {
        size_t total = n * i_unit_bytes;
        for (int g = 0; g < n; ++g) total += legacy[g][qp];
        if (total >= target_bytes && total < total_over) {
            total_over = total;
            best_over = qp;
        }
        if (total < target_bytes && total > total_under) {
            total_under = total;
            best_under = qp;
        }
    }

    int chosen;
    bool parity;
    const double target = static_cast<double>(target_bytes);
    if (best_over >= 0 && static_cast<double>(total_over) <= 1.01 * target) {
        chosen = best_over;
        parity = true;
    } else if (best_under >= 0 && static_cast<double>(total_under) >= 0.99 * target) {
        chosen = best_under;
        parity = true;
    } else if (best_over >= 0) {
        chosen = best_over; // baseline gets more bytes than the hybrid spent
        parity = false;
    } else {
        chosen = best_under; // even qp 0 cannot fill the target
        parity = false;
    }

    std::vector<GopOutput> outputs(n);
    for_each_gop(n, s.jobs, [&](int g) {
        const CodedGop coded = encode_gop(gops[g], gops[g][0], chosen, s.codec, true);
        GopOutput out;
        out.record = {std::vector<uint8_t>{}, concat_units(coded, true)};
        out.alloc.qp = chosen;
        out.alloc.latent_bytes = coded.i_unit_bytes();
        out.alloc.legacy_bytes = coded.pb_bytes();
        out.alloc.total_bytes = out.alloc.latent_bytes + out.alloc.legacy_bytes;
        out.alloc.within_budget = true;
        attribute_bytes(coded, coded.i_unit_bytes(), out.bytes, out.types);
        outputs[g] = std::move(out);
    });
    ParityResult result;
    result.point = score_stream(seq, assemble(std::move(outputs), seq, s),
                                EvalMethod::Traditional, target_bytes);
    result.parity_within_1pct = parity;
    return result;
}

std::string eval_csv(const std::vector<MethodResult>& points, double fps, int gop_length) {
    std::ostringstream os;
    os << "method,budget_bytes,kbps,mean_psnr,i_bytes_avg,p_bytes_avg,b_bytes_avg,total_bytes,"
          "within_budget\n";
    for (const auto& p : points) {
        const double kbps = static_cast<double>(p.budget) * 8.0 * fps / (gop_length * 1000.0);
        os << eval_method_name(p.method) << ',' << p.budget << ',' << kbps << ',';
        if (std::isinf(p.mean_psnr))
            os << "inf";
        else
            os << p.mean_psnr;
        os << ',' << p.i_bytes_avg << ',' << p.p_bytes_avg << ',' << p.b_bytes_avg << ','
           << p.total_payload_bytes << ',' << (p.within_budget ? 1 : 0) << '\n';
    }
    return os.str();
}

} // namespace hybp
