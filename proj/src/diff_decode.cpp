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

#include "hybp/diff_decode.hpp"

#include "hybp/errors.hpp"

namespace hybp {

std::vector<TensorRef> reconstruct_gop_diff(Tape& tape, TensorRef i_frame,
                                            const GopSideInfo& side) {
    if (i_frame.w != side.width || i_frame.h != side.height)
        throw FormatError("reconstruct_gop_diff: I-frame shape does not match side info");

    std::vector<TensorRef> chain(side.frame_count);
    chain[0] = tape.pad_replicate(i_frame, side.padded_h, side.padded_w);

    for (const auto& e : side.schedule) {
        const auto& motion = side.motion[e.pres];
        if (motion.empty()) throw FormatError("reconstruct_gop_diff: missing motion field");
        TensorRef pred = tape.warp(chain[e.ref0], motion[0]);
        if (e.type == FrameType::B) {
            if (motion.size() != 2 || e.ref1 < 0)
                throw FormatError("reconstruct_gop_diff: B frame needs two references");
            pred = tape.average(pred, tape.warp(chain[e.ref1], motion[1]));
        }
        TensorRef x = tape.add_constant(pred, side.residual[e.pres]);
        x = tape.clip(x, 0.0, 1.0);
        if (!side.masks[e.pres].all_clear()) x = tape.deblock(x, side.masks[e.pres]);
        chain[e.pres] = x;
    }

    std::vector<TensorRef> out(side.frame_count);
    for (int t = 0; t < side.frame_count; ++t)
        out[t] = tape.crop(chain[t], side.height, side.width);
    return out;
}

GopSideInfo extract_side_info(const CodedGop& coded, const Frame& reference,
                              const CodecConfig& cfg) {
    return decode_gop_with_side_info(coded, reference, cfg).side;
}

TensorRef gop_loss(Tape& tape, const std::vector<TensorRef>& recons,
                   const std::vector<Frame>& targets, const std::vector<double>& weights) {
    if (recons.size() != targets.size() || recons.size() != weights.size())
        throw FormatError("gop_loss: arity mismatch");
    std::vector<TensorRef> terms;
    terms.reserve(recons.size());
    for (size_t t = 0; t < recons.size(); ++t)
        terms.push_back(tape.mse_against(recons[t], targets[t].data));
    return tape.weighted_sum(terms, weights);
}

} // namespace hybp
