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
#include "hybp/tape.hpp"

namespace hybp {

// Replays the decode chain (warp -> add residual -> clip -> deblock) on the
// tape against frozen side information, chaining P frames through prior
// reconstructions and averaging the two references for B frames. Forward
// values match the integer decoder's real-arithmetic path; rounding to the
// 8-bit grid is skipped (straight-through). Returns one tensor per GOP frame
// in presentation order, cropped to the original dimensions; index 0 is the
// I-frame itself.
std::vector<TensorRef> reconstruct_gop_diff(Tape& tape, TensorRef i_frame,
                                            const GopSideInfo& side);

// Convenience: decode the side info out of a CodedGop once, for repeated
// diff reconstructions against the same frozen data.
GopSideInfo extract_side_info(const CodedGop& coded, const Frame& reference,
                              const CodecConfig& cfg);

// Sum of w_t * MSE(recon_t, target_t).
TensorRef gop_loss(Tape& tape, const std::vector<TensorRef>& recons,
                   const std::vector<Frame>& targets, const std::vector<double>& weights);

} // namespace hybp
