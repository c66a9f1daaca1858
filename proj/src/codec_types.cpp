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

#include "hybp/codec_types.hpp"

#include <cmath>

namespace hybp {

bool BoundaryMask::all_clear() const {
    for (uint8_t v : vertical)
        if (v) return false;
    for (uint8_t v : horizontal)
        if (v) return false;
    return true;
}

std::vector<ScheduleEntry> gop_schedule(int n_frames, bool b_frames_enabled) {
    std::vector<ScheduleEntry> order;
    if (n_frames <= 1) return order;
    if (!b_frames_enabled || n_frames == 2) {
        for (int t = 1; t < n_frames; ++t) order.push_back({t, FrameType::P, t - 1, -1});
        return order;
    }
    for (int anchor = 2; anchor < n_frames; anchor += 2) {
        order.push_back({anchor, FrameType::P, anchor - 2, -1});
        order.push_back({anchor - 1, FrameType::B, anchor - 2, anchor});
    }
    if ((n_frames - 1) % 2 == 1) // trailing odd frame has no future anchor
        order.push_back({n_frames - 1, FrameType::P, n_frames - 2, -1});
    return order;
}

double quant_step(int qp) { return std::exp2((qp - 4) / 6.0); }

} // namespace hybp
