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
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits with the number of failed criteria.

#include "hybp/codec.hpp"
#include "hybp/container.hpp"
#include "hybp/diff_decode.hpp"
#include "hybp/errors.hpp"
#include "hybp/eval.hpp"
#include "hybp/pipeline.hpp"
#include "hybp/prng.hpp"
#include "hybp/refine.hpp"
#include "hybp/synth.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>

using namespace hybp;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double central_diff(const std::function<double(const std::vector<double>&)>& f,
                    std::vector<double> x, size_t i, double step) {
    const double keep = x[i];
    x[i] = keep + step;
    const double up = f(x);
    x[i] = keep - step;
    const double down = f(x);
    return (up - down) / (2.0 * step);
}

double rel_err(double a, double b) {
    const double denom = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::abs(a - b) / denom;
}

// ---- shared suite runs for criteria 4, 5, 7 -----------------------------------

constexpr size_t kBudgets[3] = {3200, 3800, 4300};

EvalSettings suite_settings() {
    EvalSettings s;
    s.codec.gop_length = 8;
    s.inversion.iters = 800; // spec defaults
    s.inversion.step = 1e-2;
    s.refine.iters = 400;
    s.refine.step = 5e-3;
    s.jobs = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
    return s;
}

struct SuiteRun {
    VideoSequence seq;
    std::vector<HybridPair> pairs;          // per budget
    std::vector<MethodResult> traditional;  // same budgets
    std::vector<StreamBuild> trad_builds;
};

SuiteRun run_suite(SynthKind kind) {
    SuiteRun run;
    run.seq = synth_sequence(kind, 64, 64, 16, 42);
    const EvalSettings s = suite_settings();
    for (size_t budget : kBudgets) {
        run.pairs.push_back(run_hybrid_pair(run.seq, budget, s));
        StreamBuild build = build_stream(run.seq, EvalMethod::Traditional, budget, s);
        run.traditional.push_back(score_stream(run.seq, build, EvalMethod::Traditional, budget));
        run.trad_builds.push_back(std::move(build));
    }
    return run;
}

struct Shared {
    SuiteRun translate;
    SuiteRun checker;
    double prep_seconds = 0.0;
};

Shared run_shared() {
    Shared shared;
    const auto t0 = Clock::now();
    shared.translate = run_suite(SynthKind::Translate);
    shared.checker = run_suite(SynthKind::CheckerPan);
    shared.prep_seconds = seconds_since(t0);
    return shared;
}

// ---- criteria ------------------------------------------------------------------

bool criterion_lossless(std::string& detail) {
    const auto t0 = Clock::now();
    bool ok = true;
    for (bool b_frames : {false, true}) {
        VideoSequence seq = synth_sequence(SynthKind::Noise, 64, 64, 10, 7);
        CodecConfig cfg;
        cfg.gop_length = 10;
        cfg.b_frames_enabled = b_frames;
        const CodedGop coded = encode_gop(seq.frames, seq.frames[0], 0, cfg);
        const auto decoded = decode_gop(coded, seq.frames[0], cfg);
        for (size_t t = 0; t < decoded.size(); ++t)
            ok = ok && decoded[t].to_u8() == seq.frames[t].to_u8();
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream os;
    os << "10 random 64x64 frames, qp=0, both GOP shapes, " << elapsed << "s";
    detail = os.str();
    return ok && elapsed < 5.0;
}

bool criterion_gradients(std::string& detail) {
    const auto t0 = Clock::now();
    bool ok = true;
    SplitMix64 rng(9001);

    // warp primitive at 1e-6
    {
        std::vector<double> x0(256), target(256);
        for (auto& v : x0) v = rng.next_double();
        for (auto& v : target) v = rng.next_double();
        MotionField field(1, 1, 16);
        field.at(0, 0) = {static_cast<int>(rng.next_below(33)) - 16,
                          static_cast<int>(rng.next_below(33)) - 16};
        auto f = [&](const std::vector<double>& x) {
            Tape t;
            return t.mse_against(t.warp(t.leaf(16, 16, x), field), target).value()[0];
        };
        Tape tape;
        auto leaf = tape.leaf(16, 16, x0);
        auto loss = tape.mse_against(tape.warp(leaf, field), target);
        tape.backward(loss);
        for (int k = 0; k < 64; ++k) {
            const size_t i = rng.next_below(256);
            ok = ok && rel_err(leaf.grad()[i], central_diff(f, x0, i, 1e-4)) < 1e-6;
        }
    }

    // deblock primitive at 1e-6
    {
        std::vector<double> x0(1024), target(1024);
        for (auto& v : x0) v = rng.next_double(0.25, 0.75);
        for (auto& v : target) v = rng.next_double();
        Frame fx(32, 32);
        fx.data = x0;
        const BoundaryMask mask = compute_boundary_mask(fx, 0.3);
        auto f = [&](const std::vector<double>& x) {
            Tape t;
            return t.mse_against(t.deblock(t.leaf(32, 32, x), mask), target).value()[0];
        };
        Tape tape;
        auto leaf = tape.leaf(32, 32, x0);
        auto loss = tape.mse_against(tape.deblock(leaf, mask), target);
        tape.backward(loss);
        for (int k = 0; k < 64; ++k) {
            const size_t i = rng.next_below(1024);
            ok = ok && rel_err(leaf.grad()[i], central_diff(f, x0, i, 1e-4)) < 1e-6;
        }
    }

    // composed GOP chain at 1e-2 on >= 95% of 64 sampled coordinates
    int passed = 0, tested = 0;
    {
        VideoSequence seq = synth_sequence(SynthKind::Translate, 48, 48, 5, 3);
        CodecConfig cfg;
        cfg.gop_length = 5;
        const CodedGop coded = encode_gop(seq.frames, seq.frames[0], 20, cfg);
        const GopSideInfo side = extract_side_info(coded, seq.frames[0], cfg);
        const std::vector<double> i0 = seq.frames[0].quantized().data;
        const std::vector<double> weights(5, 1.0);
        auto f = [&](const std::vector<double>& x) {
            Tape t;
            auto recons = reconstruct_gop_diff(t, t.leaf(48, 48, x), side);
            return gop_loss(t, recons, seq.frames, weights).value()[0];
        };
        Tape tape;
        auto leaf = tape.leaf(48, 48, i0);
        auto recons = reconstruct_gop_diff(tape, leaf, side);
        auto loss = gop_loss(tape, recons, seq.frames, weights);
        tape.backward(loss);
        for (int k = 0; k < 64; ++k) {
            const size_t i = rng.next_below(i0.size());
            const double fd = central_diff(f, i0, i, 1e-4);
            const double an = leaf.grad()[i];
            ++tested;
            if ((std::abs(fd) < 1e-12 && std::abs(an) < 1e-12) || rel_err(an, fd) < 1e-2) ++passed;
        }
        ok = ok && passed * 100 >= tested * 95;
    }

    const double elapsed = seconds_since(t0);
    std::ostringstream os;
    os << "warp/deblock at 1e-6, composed chain " << passed << "/" << tested << " within 1e-2, "
       << elapsed << "s";
    detail = os.str();
    return ok && elapsed < 30.0;
}

bool criterion_forward_fidelity(std::string& detail) {
    double worst = 0.0;
    bool ok = true;
    const double bound = 0.5 / 255.0 + 1e-12;
    for (SynthKind kind : {SynthKind::Translate, SynthKind::CheckerPan, SynthKind::RotateGradient,
                           SynthKind::Noise}) {
        for (int qp : {8, 20, 35}) {
            VideoSequence seq = synth_sequence(kind, 64, 64, 8, 11);
            CodecConfig cfg;
            cfg.gop_length = 8;
            const CodedGop coded = encode_gop(seq.frames, seq.frames[0], qp, cfg);
            const auto decoded = decode_gop(coded, seq.frames[0], cfg);
            const GopSideInfo side = extract_side_info(coded, seq.frames[0], cfg);
            Tape tape;
            const auto recons =
                reconstruct_gop_diff(tape, tape.leaf(64, 64, seq.frames[0].quantized().data), side);
            for (size_t t = 0; t < recons.size(); ++t)
                for (size_t i = 0; i < recons[t].value().size(); ++i) {
                    const double d = std::abs(recons[t].value()[i] - decoded[t].data[i]);
                    worst = std::max(worst, d);
                    ok = ok && d <= bound;
                }
        }
    }
    // qp=0 with full-pel motion: the bypass is exact
    {
        VideoSequence seq = synth_sequence(SynthKind::Translate, 64, 64, 8, 11);
        CodecConfig cfg;
        cfg.gop_length = 8;
        const CodedGop coded = encode_gop(seq.frames, seq.frames[0], 0, cfg);
        const auto decoded = decode_gop(coded, seq.frames[0], cfg);
        const GopSideInfo side = extract_side_info(coded, seq.frames[0], cfg);
        Tape tape;
        const auto recons =
            reconstruct_gop_diff(tape, tape.leaf(64, 64, seq.frames[0].quantized().data), side);
        for (size_t t = 0; t < recons.size(); ++t)
            for (size_t i = 0; i < recons[t].value().size(); ++i)
                ok = ok && std::abs(recons[t].value()[i] - decoded[t].data[i]) <= bound;
    }
    std::ostringstream os;
    os << "max |diff - integer| = " << worst << " <= " << bound;
    detail = os.str();
    return ok;
}

bool criterion_refinement(const Shared& shared, std::string& detail) {
    bool ok = true;
    double translate_gain = 1e9;
    for (const SuiteRun* run : {&shared.translate, &shared.checker}) {
        for (size_t b = 0; b < run->pairs.size(); ++b) {
            const auto& pair = run->pairs[b];
            ok = ok && pair.hybrid.mean_psnr >= pair.no_refine.mean_psnr;
            if (run == &shared.translate)
                translate_gain =
                    std::min(translate_gain, pair.hybrid.mean_psnr - pair.no_refine.mean_psnr);
        }
    }
    ok = ok && translate_gain >= 0.2;
    std::ostringstream os;
    os << "refined >= unrefined at all 6 points; translate gain >= " << translate_gain << " dB";
    detail = os.str();
    return ok;
}

bool criterion_arbitrage(const Shared& shared, std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    const EvalSettings s = suite_settings();

    // P-byte dominance whenever the latent undercuts the lossless I unit, on
    // both suites at the same budget
    int guarded_points = 0;
    for (const SuiteRun* run : {&shared.translate, &shared.checker}) {
        for (size_t b = 0; b < run->pairs.size(); ++b) {
            const auto& hybrid = run->pairs[b].hybrid;
            const auto& trad = run->traditional[b];
            if (hybrid.i_bytes_avg < trad.i_bytes_avg) {
                ok = ok && hybrid.p_bytes_avg > trad.p_bytes_avg;
                ++guarded_points;
            }
        }
    }
    ok = ok && guarded_points == 6; // the latent undercuts the I unit everywhere

    // equal-total-bytes quality comparison on the suite the prior can
    // represent; the baseline is given at least the hybrid's spend
    double worst_margin = 1e9;
    for (size_t b = 0; b < shared.translate.pairs.size(); ++b) {
        const auto& hybrid = shared.translate.pairs[b].hybrid;
        const ParityResult parity =
            traditional_at_bytes(shared.translate.seq, hybrid.total_payload_bytes, s);
        ok = ok && hybrid.mean_psnr >= parity.point.mean_psnr;
        worst_margin = std::min(worst_margin, hybrid.mean_psnr - parity.point.mean_psnr);
    }
    os << "P-byte dominance at all points; translate PSNR margin >= " << worst_margin
       << " dB at byte parity";
    detail = os.str();
    return ok;
}

bool criterion_ratectl(std::string& detail) {
    bool ok = true;
    int monotone_fixtures = 0;
    CodecConfig cfg;
    cfg.gop_length = 8;
    const int bound = static_cast<int>(std::ceil(std::log2(cfg.qp_max + 1))) + 1;

    for (SynthKind kind : {SynthKind::Noise, SynthKind::Translate, SynthKind::CheckerPan,
                           SynthKind::RotateGradient}) {
        VideoSequence seq = synth_sequence(kind, 64, 64, 8, 5);
        std::vector<size_t> sizes(cfg.qp_max + 1);
        for (int qp = 0; qp <= cfg.qp_max; ++qp)
            sizes[qp] = size_probe(seq.frames, seq.frames[0], qp, cfg);
        bool monotone = true;
        for (int qp = 1; qp <= cfg.qp_max; ++qp) monotone = monotone && sizes[qp] <= sizes[qp - 1];
        auto probe = [&](int qp) { return sizes[qp]; };

        const size_t latent = serialized_latent_size(1024);
        for (size_t budget : {3000ULL, 4200ULL, 9000ULL, 60000ULL}) {
            const AllocationResult r = allocate_with_probe(probe, latent, budget, cfg.qp_max);
            int oracle = -1;
            for (int qp = 0; qp <= cfg.qp_max; ++qp)
                if (latent + sizes[qp] <= budget) {
                    oracle = qp;
                    break;
                }
            if (monotone) {
                ok = ok && r.probes <= bound;
                if (oracle < 0)
                    ok = ok && !r.within_budget && r.qp == cfg.qp_max;
                else
                    ok = ok && r.qp == oracle && r.within_budget;
            } else if (oracle >= 0) {
                ok = ok && r.within_budget; // a feasible qp is still returned
            }
        }
        if (monotone) ++monotone_fixtures;
    }
    ok = ok && monotone_fixtures >= 1;

    // infeasible budget: flag set, qp_max returned
    {
        VideoSequence seq = synth_sequence(SynthKind::Noise, 64, 64, 8, 5);
        const auto [coded, r] = allocate(seq.frames, seq.frames[0], serialized_latent_size(1024),
                                         RateBudget::from_gop_bytes(500), cfg);
        ok = ok && !r.within_budget && r.qp == cfg.qp_max && coded.qp == cfg.qp_max;
    }
    std::ostringstream os;
    os << monotone_fixtures << " monotone fixture(s) matched the sweep oracle within " << bound
       << " probes";
    detail = os.str();
    return ok;
}

bool criterion_stitching(const Shared& shared, std::string& detail) {
    bool ok = true;
    // full fixture matrix: every stream built for criteria 4/5, both modes
    int streams = 0;
    auto check_stream = [&](const std::vector<uint8_t>& stream) {
        const auto direct = decode_stream(stream, DecodeMode::Direct, {false, 1});
        const auto stitched = decode_stream(stream, DecodeMode::Stitched, {false, 1});
        ok = ok && direct.video.frame_count() == stitched.video.frame_count();
        for (size_t t = 0; t < direct.video.frame_count(); ++t)
            ok = ok && direct.video.frames[t].data == stitched.video.frames[t].data;
        ++streams;
    };
    for (const SuiteRun* run : {&shared.translate, &shared.checker}) {
        for (size_t b = 0; b < run->pairs.size(); ++b) {
            check_stream(run->pairs[b].hybrid_build.stream);
            check_stream(run->pairs[b].no_refine_build.stream);
            check_stream(run->trad_builds[b].stream);
        }
    }

    // 64x64, 64-frame benchmark: stitch re-encode under 10% of decode time
    EvalSettings s = suite_settings();
    s.inversion.iters = 150;
    s.refine.iters = 75;
    VideoSequence bench = synth_sequence(SynthKind::Translate, 64, 64, 64, 21);
    const HybridPair pair = run_hybrid_pair(bench, 3800, s);
    const auto timed = decode_stream(pair.hybrid_build.stream, DecodeMode::Stitched, {false, 1});
    const double stitch_s = timed.timing.total_stitch();
    const double ratio = stitch_s / timed.timing.wall_s;
    ok = ok && ratio < 0.10;

    std::ostringstream os;
    os << streams << " streams bit-identical across modes; stitch/decode = " << ratio * 100
       << "% on the 64-frame benchmark";
    detail = os.str();
    return ok;
}

bool criterion_pipeline_speedup(std::string& detail) {
    using namespace std::chrono;
    const int n = 8;
    const auto stage_delay = milliseconds(50);

    const auto t_pipe = Clock::now();
    two_stage_pipeline<int>(
        n,
        [&](int i) {
            std::this_thread::sleep_for(stage_delay);
            return i;
        },
        [&](int, int) { std::this_thread::sleep_for(stage_delay); });
    const double pipelined = seconds_since(t_pipe);

    const auto t_seq = Clock::now();
    for (int i = 0; i < n; ++i) {
        std::this_thread::sleep_for(stage_delay);
        std::this_thread::sleep_for(stage_delay);
    }
    const double sequential = seconds_since(t_seq);

    std::ostringstream os;
    os << "pipelined " << pipelined << "s vs sequential " << sequential << "s (ratio "
       << pipelined / sequential << ")";
    detail = os.str();
    return pipelined <= 0.65 * sequential;
}

bool criterion_container(std::string& detail) {
    bool ok = true;
    SplitMix64 rng(31337);

    // 1,000 mux/demux fuzz roundtrips
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        std::vector<GopRecord> records(rng.next_below(4));
        for (auto& r : records) {
            r.neural.resize(rng.next_below(200));
            for (auto& b : r.neural) b = static_cast<uint8_t>(rng.next_below(256));
            r.legacy.resize(rng.next_below(400));
            for (auto& b : r.legacy) b = static_cast<uint8_t>(rng.next_below(256));
        }
        StreamHeader header;
        header.width = 32;
        header.height = 32;
        const auto bytes = mux(records, header);
        const DemuxResult back = demux(bytes);
        ok = ok && back.gops.size() == records.size();
        for (size_t g = 0; g < records.size() && ok; ++g)
            ok = back.gops[g].neural == records[g].neural &&
                 back.gops[g].legacy == records[g].legacy;
    }

    // every single-byte payload corruption must be detected
    std::vector<GopRecord> records(2);
    for (auto& r : records) {
        r.neural.resize(120);
        for (auto& b : r.neural) b = static_cast<uint8_t>(rng.next_below(256));
        r.legacy.resize(240);
        for (auto& b : r.legacy) b = static_cast<uint8_t>(rng.next_below(256));
    }
    StreamHeader header;
    header.width = 32;
    header.height = 32;
    const auto stream = mux(records, header);

    size_t tested = 0, caught = 0;
    size_t off = 30; // past the stream header
    for (const auto& r : records) {
        const size_t neural_at = off + 4;
        const size_t legacy_at = neural_at + r.neural.size() + 4;
        for (size_t i = 0; i < r.neural.size() + r.legacy.size(); ++i) {
            const size_t pos = i < r.neural.size() ? neural_at + i
                                                   : legacy_at + (i - r.neural.size());
            auto corrupted = stream;
            corrupted[pos] ^= 0x01;
            ++tested;
            try {
                demux(corrupted);
            } catch (const ChecksumError&) {
                ++caught;
            }
        }
        off = legacy_at + r.legacy.size() + 4;
    }
    ok = ok && tested == caught;
    std::ostringstream os;
    os << "1000 fuzz roundtrips; " << caught << "/" << tested << " corruptions detected";
    detail = os.str();
    return ok;
}

bool criterion_two_stage_cost(std::string& detail) {
    GeneratorSpec two;
    two.width = 64;
    two.height = 64;
    two.two_stage = true;
    GeneratorSpec full = two;
    full.two_stage = false;
    const GeneratorWeights gw_two = GeneratorWeights::build(two);
    const GeneratorWeights gw_full = GeneratorWeights::build(full);
    SplitMix64 rng(5);
    std::vector<double> z(two.latent_dim);
    for (auto& v : z) v = rng.next_double(-1.0, 1.0);

    // warm up, then time 100 forwards of each path; best of three rounds
    // filters scheduler noise out of the ratio
    (void)generate_iframe(gw_two, z);
    (void)generate_iframe(gw_full, z);
    double t_two = 1e18, t_full = 1e18;
    for (int round = 0; round < 3; ++round) {
        const auto t0 = Clock::now();
        for (int i = 0; i < 100; ++i) (void)generate_iframe(gw_two, z);
        t_two = std::min(t_two, seconds_since(t0));
        const auto t1 = Clock::now();
        for (int i = 0; i < 100; ++i) (void)generate_iframe(gw_full, z);
        t_full = std::min(t_full, seconds_since(t1));
    }

    std::ostringstream os;
    os << "half-res + upsample " << t_two * 10 << "ms/run vs full-res " << t_full * 10
       << "ms/run (ratio " << t_two / t_full << ")";
    detail = os.str();
    return t_two < 0.5 * t_full;
}

bool criterion_self_inversion(std::string& detail) {
    GeneratorSpec spec;
    spec.width = 64;
    spec.height = 64;
    const GeneratorWeights gw = GeneratorWeights::build(spec);
    OptimizerConfig opt;
    opt.iters = 500;
    bool ok = true;
    double worst = 0.0;
    for (uint64_t seed = 1000; seed < 1005; ++seed) {
        SplitMix64 rng(seed);
        std::vector<double> z_star(spec.latent_dim);
        for (auto& v : z_star) v = rng.next_double(-1.0, 1.0);
        const Frame target = generate_iframe(gw, z_star).quantized();
        const InvertResult r = invert(target, gw, opt);
        worst = std::max(worst, r.report.best_loss);
        ok = ok && r.report.best_loss <= 1e-4;
    }
    std::ostringstream os;
    os << "worst final MSE over 5 seeds = " << worst;
    detail = os.str();
    return ok;
}

} // namespace

int main() {
    std::printf("hybp acceptance suite\n");
    int failures = 0;
    double budget_4 = 0.0, budget_5 = 0.0;

    auto report = [&](int id, const char* name, bool pass, const std::string& detail,
                      double elapsed) {
        std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, name,
                    detail.c_str(), elapsed);
        if (!pass) ++failures;
    };

    auto run_simple = [&](int id, const char* name,
                          const std::function<bool(std::string&)>& fn) {
        std::string detail;
        const auto t0 = Clock::now();
        bool pass = false;
        try {
            pass = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        report(id, name, pass, detail, seconds_since(t0));
    };

    run_simple(1, "lossless qp=0 path", criterion_lossless);
    run_simple(2, "gradient correctness", criterion_gradients);
    run_simple(3, "forward fidelity", criterion_forward_fidelity);

    // criteria 4/5/7 share the suite measurements; their cost is charged to 4
    const auto t_shared = Clock::now();
    Shared shared = run_shared();
    {
        std::string detail;
        const auto t0 = Clock::now();
        bool pass = false;
        try {
            pass = criterion_refinement(shared, detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        budget_4 = shared.prep_seconds + seconds_since(t0);
        pass = pass && budget_4 < 300.0;
        report(4, "refinement efficacy", pass, detail, budget_4);
    }
    {
        std::string detail;
        const auto t0 = Clock::now();
        bool pass = false;
        try {
            pass = criterion_arbitrage(shared, detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        budget_5 = seconds_since(t0);
        pass = pass && budget_5 < 300.0;
        report(5, "bitrate arbitrage", pass, detail, budget_5);
    }

    run_simple(6, "rate control optimality", criterion_ratectl);
    run_simple(7, "stitching equivalence", [&](std::string& d) { return criterion_stitching(shared, d); });
    run_simple(8, "pipeline speedup", criterion_pipeline_speedup);
    run_simple(9, "container robustness", criterion_container);
    run_simple(10, "two-stage generation cost", criterion_two_stage_cost);
    run_simple(11, "self-inversion", criterion_self_inversion);

    (void)t_shared;
    std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
