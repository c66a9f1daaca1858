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

#include "hybp/codec.hpp"

#include <functional>

namespace hybp {

struct RateBudget {
    double target_bps = 0.0; // bits per second
    double fps = 30.0;
    int gop_length = 8;

    size_t gop_budget_bytes() const {
        return static_cast<size_t>(target_bps * gop_length / (8.0 * fps));
    }
    static RateBudget from_gop_bytes(size_t bytes, double fps_ = 30.0, int gop_length_ = 8) {
        RateBudget b;
        b.fps = fps_;
        b.gop_length = gop_length_;
        b.target_bps = static_cast<double>(bytes) * 8.0 * fps_ / gop_length_;
        return b;
    }
};

struct AllocationResult {
    int qp = 0;
    size_t latent_bytes = 0;
    size_t legacy_bytes = 0;
    size_t total_bytes = 0; // latent + legacy
    bool within_budget = false;
    int probes = 0;
    bool used_fallback = false; // linear sweep after a monotonicity violation
};

// Byte size of the P/B stream at a given qp. Deterministic.
size_t size_probe(const std::vector<Frame>& gop, const Frame& reference, int qp,
                  const CodecConfig& cfg);

// Binary search for the smallest qp with latent_bytes + legacy(qp) <= budget.
// Probes are memoized; at most ceil(log2(qp_max+1)) + 1 when sizes are
// monotone. An observed monotonicity violation falls back to an outward
// linear sweep from the search result, which still returns a feasible qp
// when one exists. An infeasible budget returns qp_max with the flag clear.
AllocationResult allocate_with_probe(const std::function<size_t(int)>& probe, size_t latent_bytes,
                                     size_t budget_bytes, int qp_max);

// Full allocation against the real encoder; returns the CodedGop at the
// chosen qp alongside the decision record.
std::pair<CodedGop, AllocationResult> allocate(const std::vector<Frame>& gop,
                                               const Frame& reference, size_t latent_bytes,
                                               const RateBudget& budget, const CodecConfig& cfg);

} // namespace hybp
