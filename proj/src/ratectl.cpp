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

#include "hybp/ratectl.hpp"

#include "hybp/errors.hpp"

#include <map>

namespace hybp {

size_t size_probe(const std::vector<Frame>& gop, const Frame& reference, int qp,
                  const CodecConfig& cfg) {
    return encode_gop(gop, reference, qp, cfg, false).pb_bytes();
}

AllocationResult allocate_with_probe(const std::function<size_t(int)>& probe, size_t latent_bytes,
                                     size_t budget_bytes, int qp_max) {
    AllocationResult result;
    result.latent_bytes = latent_bytes;

    std::map<int, size_t> seen;
    auto sized = [&](int qp) {
        auto it = seen.find(qp);
        if (it != seen.end()) return it->second;
        const size_t s = probe(qp);
        seen.emplace(qp, s);
        ++result.probes;
        return s;
    };
    auto feasible = [&](int qp) { return latent_bytes + sized(qp) <= budget_bytes; };

    int lo = 0, hi = qp_max;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (feasible(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    bool found = feasible(lo);
    int chosen = lo;

    // monotone sizes mean q1 < q2 implies size(q1) >= size(q2)
    bool violated = false;
    size_t prev = SIZE_MAX;
    for (const auto& [qp, s] : seen) {
        if (s > prev) violated = true;
        prev = s;
    }
    if (violated) {
        result.used_fallback = true;
        found = false;
        for (int d = 0; d <= qp_max && !found; ++d) {
            for (int qp : {chosen - d, chosen + d}) {
                if (qp < 0 || qp > qp_max) continue;
                if (feasible(qp)) {
                    chosen = qp;
                    found = true;
                    break;
                }
            }
        }
    }

    if (!found) chosen = qp_max;
    result.qp = chosen;
    result.legacy_bytes = sized(chosen);
    result.total_bytes = latent_bytes + result.legacy_bytes;
    result.within_budget = result.total_bytes <= budget_bytes;
    return result;
}

std::pair<CodedGop, AllocationResult> allocate(const std::vector<Frame>& gop,
                                               const Frame& reference, size_t latent_bytes,
                                               const RateBudget& budget, const CodecConfig& cfg) {
    if (budget.gop_budget_bytes() == 0) throw UsageError("allocate: budget must be positive");
    std::map<int, CodedGop> cache;
    auto probe = [&](int qp) {
        auto [it, fresh] = cache.try_emplace(qp);
        if (fresh) it->second = encode_gop(gop, reference, qp, cfg, false);
        return it->second.pb_bytes();
    };
    AllocationResult result =
        allocate_with_probe(probe, latent_bytes, budget.gop_budget_bytes(), cfg.qp_max);
    return {std::move(cache.at(result.qp)), result};
}

} // namespace hybp
