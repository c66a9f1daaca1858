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

#include "hybp/refine.hpp"

#include "hybp/errors.hpp"

#include <chrono>
#include <limits>

namespace hybp {

namespace {

std::vector<double> frame_weights(const RefineConfig& cfg, size_t n) {
    std::vector<double> w(n, cfg.pb_weight);
    if (!w.empty()) w[0] = cfg.i_frame_weight;
    return w;
}

// Per-frame PSNR of the integer decode against the sources.
std::pair<std::vector<double>, double> integer_psnr(const CodedGop& coded, const Frame& i_frame,
                                                    const std::vector<Frame>& gop,
                                                    const CodecConfig& codec_cfg) {
    const auto decoded = decode_gop(coded, i_frame, codec_cfg);
    std::vector<double> per_frame;
    double acc = 0.0;
    for (size_t t = 0; t < decoded.size(); ++t) {
        const double m = mse(decoded[t], gop[t]);
        per_frame.push_back(psnr_from_mse(m));
        acc += m;
    }
    return {per_frame, psnr_from_mse(acc / static_cast<double>(decoded.size()))};
}

} // namespace

RefineResult refine_latent(const LatentCode& z0, const std::vector<Frame>& gop,
                           const CodedGop& coded, const GeneratorWeights& gw,
                           const RefineConfig& cfg, const CodecConfig& codec_cfg) {
    if (static_cast<int>(gop.size()) != coded.frame_count)
        throw FormatError("refine_latent: GOP / coded structure mismatch");
    if (static_cast<int>(z0.z.size()) != gw.spec.latent_dim)
        throw FormatError("refine_latent: latent dimension mismatch");
    const auto t_start = std::chrono::steady_clock::now();

    RefineResult result;
    result.latent = z0;

    const Frame i_before = generate_iframe(gw, z0.z);
    const GopSideInfo side = extract_side_info(coded, i_before, codec_cfg);
    const std::vector<double> weights = frame_weights(cfg, gop.size());

    std::tie(result.report.psnr_before, result.report.mean_psnr_before) =
        integer_psnr(coded, i_before, gop, codec_cfg);

    const int d = gw.spec.latent_dim;
    std::vector<double> best_z = z0.z;
    double best_loss = std::numeric_limits<double>::infinity();
    double step = cfg.step;
    bool completed = cfg.iters == 0;

    for (int attempt = 0; attempt < 2 && !completed; ++attempt) {
        std::vector<double> z = z0.z;
        OptimizerConfig opt;
        opt.step = step;
        AdamState adam(d, opt);
        double initial_loss = -1.0;
        bool diverged = false;

        for (int it = 0; it < cfg.iters; ++it) {
            Tape tape;
            const TensorRef zt = tape.leaf(1, d, z);
            const TensorRef iframe = build_iframe_graph(tape, zt, gw);
            const auto recons = reconstruct_gop_diff(tape, iframe, side);
            const TensorRef loss_node = gop_loss(tape, recons, gop, weights);
            const double loss = loss_node.value()[0];
            result.report.loss_trace.push_back(loss);
            if (it == 0 && attempt == 0) result.report.initial_loss = loss;
            if (it == 0) initial_loss = loss;
            if (loss < best_loss) {
                best_loss = loss;
                best_z = z;
            }
            if (it > 0 && loss > 10.0 * initial_loss) {
                diverged = true;
                break;
            }
            tape.backward(loss_node);
            adam.apply(z, zt.grad());
        }
        if (!diverged) {
            completed = true;
        } else {
            ++result.report.restarts;
            step *= 0.5;
            if (attempt == 1) throw OptimizationError("refine_latent: diverged twice, aborting");
        }
    }

    if (cfg.iters == 0) {
        best_z = z0.z;
        Tape tape;
        const TensorRef zt = tape.leaf(1, d, best_z);
        const auto recons = reconstruct_gop_diff(tape, build_iframe_graph(tape, zt, gw), side);
        best_loss = gop_loss(tape, recons, gop, weights).value()[0];
        result.report.initial_loss = best_loss;
    }

    result.latent.z = best_z;
    result.report.best_loss = best_loss;

    const Frame i_after = generate_iframe(gw, result.latent.z);
    std::tie(result.report.psnr_after, result.report.mean_psnr_after) =
        integer_psnr(coded, i_after, gop, codec_cfg);

    result.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

TranscodeResult transcode_gop(const std::vector<Frame>& gop, const GeneratorWeights& gw,
                              const TranscodeConfig& cfg) {
    if (gop.empty()) throw UsageError("transcode_gop: empty GOP");
    TranscodeResult result;

    // Step I: generative inversion of the keyframe
    const InvertResult inv = invert(gop[0], gw, cfg.inversion);
    result.latent_prerefine = inv.latent;
    result.latent = inv.latent;
    const size_t latent_bytes = serialize_latent(inv.latent).size();
    const RateBudget budget =
        RateBudget::from_gop_bytes(cfg.budget_bytes, 30.0, static_cast<int>(gop.size()));

    // Step II: reference injection at QP=0 plus binary-search allocation
    Frame reference = generate_iframe(gw, result.latent.z);
    std::tie(result.coded, result.alloc) =
        allocate(gop, reference, latent_bytes, budget, cfg.codec);

    if (!cfg.refine_enabled || gop.size() == 1) return result;

    // Step III: end-to-end joint refinement through the frozen chain
    const int passes = std::max(1, cfg.refine.outer_passes);
    for (int pass = 0; pass < passes; ++pass) {
        if (pass > 0) {
            reference = generate_iframe(gw, result.latent.z);
            std::tie(result.coded, result.alloc) =
                allocate(gop, reference, latent_bytes, budget, cfg.codec);
        }
        RefineResult refined =
            refine_latent(result.latent, gop, result.coded, gw, cfg.refine, cfg.codec);
        result.latent = refined.latent;
        result.refine_report = std::move(refined.report);
    }
    return result;
}

} // namespace hybp
