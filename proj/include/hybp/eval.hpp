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

#include "hybp/container.hpp"
#include "hybp/refine.hpp"

#include <string>

namespace hybp {

enum class EvalMethod { Hybrid, NoRefine, Traditional, PromptOnly };
std::string eval_method_name(EvalMethod method);

struct EvalSettings {
    std::vector<size_t> budgets; // per-GOP byte budgets
    CodecConfig codec;
    uint64_t generator_seed = 42;
    int latent_dim = 1024;
    int hidden = 256;
    bool two_stage = true;
    OptimizerConfig inversion;
    RefineConfig refine;
    int jobs = 1;

    GeneratorSpec generator_spec(int width, int height) const {
        GeneratorSpec spec;
        spec.seed = generator_seed;
        spec.latent_dim = latent_dim;
        spec.hidden = hidden;
        spec.width = width;
        spec.height = height;
        spec.two_stage = two_stage;
        return spec;
    }
};

// A complete encoded stream for one (method, budget) cell plus the byte
// attribution needed for the per-frame-type accounting.
struct StreamBuild {
    std::vector<uint8_t> stream;
    std::vector<AllocationResult> per_gop;
    std::vector<size_t> bytes_per_frame; // I frames carry latent or I-unit bytes
    std::vector<FrameType> frame_types;  // I for keyframes (incl. prompt-only frames)
    bool all_within_budget = true;
};

StreamBuild build_stream(const VideoSequence& seq, EvalMethod method, size_t budget,
                         const EvalSettings& settings);

struct MethodResult {
    EvalMethod method = EvalMethod::Hybrid;
    size_t budget = 0;
    double mean_psnr = 0.0; // PSNR of the mean MSE over all frames
    QualityReport quality;
    double i_bytes_avg = 0.0;
    double p_bytes_avg = 0.0;
    double b_bytes_avg = 0.0;
    size_t total_payload_bytes = 0; // latent + legacy payloads over all GOPs
    bool within_budget = true;
};

// Scores a built stream against the source sequence through the real
// container decode path.
MethodResult score_stream(const VideoSequence& source, const StreamBuild& build,
                          EvalMethod method, size_t budget);

// Hybrid and no-refine scored from one transcoding pass (same coded track,
// pre/post-refinement latents), so their byte columns match exactly.
struct HybridPair {
    MethodResult hybrid;
    MethodResult no_refine;
    StreamBuild hybrid_build;
    StreamBuild no_refine_build;
};
HybridPair run_hybrid_pair(const VideoSequence& seq, size_t budget, const EvalSettings& settings);

// The four-method comparison over the budget sweep.
std::vector<MethodResult> run_eval(const VideoSequence& seq, const EvalSettings& settings);

// Traditional run whose total payload lands as close to target_bytes as the
// integer qp grid allows, never more than 1% above and preferring the
// smallest total at or above the target (the comparison then favors the
// baseline). parity is set when the total is within 1% of the target.
struct ParityResult {
    MethodResult point;
    bool parity_within_1pct = false;
};
ParityResult traditional_at_bytes(const VideoSequence& seq, size_t target_bytes,
                                  const EvalSettings& settings);

// Columns: method,budget_bytes,kbps,mean_psnr,i_bytes_avg,p_bytes_avg,
// b_bytes_avg,total_bytes,within_budget
std::string eval_csv(const std::vector<MethodResult>& points, double fps, int gop_length);

} // namespace hybp
