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

#pragma once

#include "hybp/diff_decode.hpp"
#include "hybp/invert.hpp"
#include "hybp/ratectl.hpp"

namespace hybp {

struct RefineConfig {
    int iters = 400;
    double step = 5e-3;
    double i_frame_weight = 1.0; // w_0
    double pb_weight = 1.0;      // w_t for t >= 1
    int outer_passes = 1;
};

struct RefineReport {
    std::vector<double> loss_trace;
    double initial_loss = 0.0;
    double best_loss = 0.0;
    std::vector<double> psnr_before; // integer pipeline, per frame
    std::vector<double> psnr_after;
    double mean_psnr_before = 0.0; // PSNR of the mean MSE
    double mean_psnr_after = 0.0;
    double wall_seconds = 0.0;
    int restarts = 0;
};

struct RefineResult {
    LatentCode latent;
    RefineReport report;
};

// Step III: optimize z against the all-GOP loss through the frozen decode
// chain. coded must have been produced against generate_iframe(gw, z0).
// Returns the best-seen z; the coded units are never touched.
RefineResult refine_latent(const LatentCode& z0, const std::vector<Frame>& gop,
                           const CodedGop& coded, const GeneratorWeights& gw,
                           const RefineConfig& cfg, const CodecConfig& codec_cfg);

// The full three-step transcode for one GOP: inversion, budgeted encoding
// with reference injection, joint refinement. outer_passes > 1 re-runs
// Step II against the refined keyframe and refines again.
struct TranscodeConfig {
    CodecConfig codec;
    OptimizerConfig inversion;
    RefineConfig refine;
    size_t budget_bytes = 6000; // per GOP
    bool refine_enabled = true;
};

struct TranscodeResult {
    LatentCode latent;            // what gets emitted
    LatentCode latent_prerefine;  // Step I output (ablation baseline)
    CodedGop coded;
    AllocationResult alloc;
    RefineReport refine_report;   // default-initialized when refinement is off
};

TranscodeResult transcode_gop(const std::vector<Frame>& gop, const GeneratorWeights& gw,
                              const TranscodeConfig& cfg);

} // namespace hybp
