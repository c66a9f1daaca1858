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

#include "hybp/codec_types.hpp"
#include "hybp/frame.hpp"

#include <optional>

namespace hybp {

// --- sampling / filtering primitives -------------------------------------

// Bilinear sample with edge clamp; the single sampling policy shared by
// motion search, warp and the differentiable replica.
double bilinear_sample(const Frame& f, double sx, double sy);

// Full-search SAD at integer pel over +-search_range, then best of the 8
// half-pel neighbors. Ties break on smallest |dx|+|dy|, then dy, then dx.
MotionField motion_estimate(const Frame& target, const Frame& reference, const CodecConfig& cfg);

// Per-block motion-compensated prediction at half-pel positions. Real-valued
// output, no rounding.
Frame warp(const Frame& reference, const MotionField& mvs);

// Flag set iff the absolute cross-boundary difference < threshold.
BoundaryMask compute_boundary_mask(const Frame& frame, double threshold);

// [1,2,1]/4 tap across each flagged boundary pair; vertical boundaries first,
// then horizontal, each pass reading its own input.
Frame deblock(const Frame& frame, const BoundaryMask& mask);

// --- transform path --------------------------------------------------------

// Orthonormal 2D DCT-II on an 8x8 block and its exact inverse.
void dct_forward8(const double* block, double* coeffs);
void dct_inverse8(const double* coeffs, double* block);

// qp > 0: orthonormal 2D DCT-II then round(coef / quant_step(qp)).
// qp == 0: bypass; block values must sit on the 1/255 grid and pass through
// as spatial integers. Throws FormatError on 16-bit coefficient overflow.
std::vector<int16_t> transform_quant(const std::vector<double>& block8x8, int qp);
std::vector<double> dequant_itransform(const std::vector<int16_t>& coeffs, int qp);

// Zigzag order of an 8x8 block.
const std::vector<int>& zigzag_order8();

// --- unit serialization -----------------------------------------------------

// Unit layout: u8 frame_type, u8 qp, u16 reserved, u32 payload length (all
// little-endian), payload. P/B payload is entropy-coded MVs then run-level
// coefficients, byte aligned. I payload is the raw u8 raster.
std::vector<uint8_t> serialize_pb_unit(const ResidualUnit& unit);
ResidualUnit parse_pb_unit(const std::vector<uint8_t>& bytes, int blocks_x, int blocks_y,
                           int n_transform_blocks);

std::vector<uint8_t> serialize_i_unit(const Frame& frame);
Frame parse_i_unit(const std::vector<uint8_t>& bytes, int width, int height);

// --- GOP encode / decode ----------------------------------------------------

// Frozen side information captured during decode, consumed by the
// differentiable replica. Rasters use padded dimensions.
struct GopSideInfo {
    int padded_w = 0;
    int padded_h = 0;
    int width = 0;
    int height = 0;
    int frame_count = 0;
    std::vector<ScheduleEntry> schedule;             // decode order
    std::vector<std::vector<MotionField>> motion;    // by pres index
    std::vector<std::vector<double>> residual;       // by pres index, padded raster
    std::vector<BoundaryMask> masks;                 // by pres index; empty flags when unused
    std::vector<int> unit_qp;                        // by pres index
    std::vector<double> i_frame_chain;               // padded real I reference
};

// I-frame is the injected reference coded losslessly (unit retained when
// retain_i_unit). P frames reference the previous non-B reconstruction in a
// closed loop; B frames average the warps of their two neighbors.
CodedGop encode_gop(const std::vector<Frame>& frames, const Frame& injected_reference, int qp,
                    const CodecConfig& cfg, bool retain_i_unit = false);

// Same encode, also returning the encoder's local reconstructions (rounded,
// presentation order). decode_gop must reproduce them bit-exactly.
struct EncodedGop {
    CodedGop coded;
    std::vector<Frame> reconstructions;
};
EncodedGop encode_gop_with_recon(const std::vector<Frame>& frames, const Frame& injected_reference,
                                 int qp, const CodecConfig& cfg, bool retain_i_unit = false);

// Exactly one of coded.i_frame_unit / injected_reference must supply the
// I-frame. Output frames are rounded to the 8-bit grid, presentation order.
std::vector<Frame> decode_gop(const CodedGop& coded, const std::optional<Frame>& injected_reference,
                              const CodecConfig& cfg);

struct GopDecode {
    std::vector<Frame> frames;
    GopSideInfo side;
};
GopDecode decode_gop_with_side_info(const CodedGop& coded,
                                    const std::optional<Frame>& injected_reference,
                                    const CodecConfig& cfg);

// --- helpers ----------------------------------------------------------------

Frame pad_frame(const Frame& f, int padded_w, int padded_h); // edge replication
Frame crop_frame(const Frame& f, int w, int h);

// Concatenated legacy track (pb units only) and the reverse split.
std::vector<uint8_t> concat_units(const CodedGop& coded, bool include_i_unit);
std::vector<std::vector<uint8_t>> split_units(const std::vector<uint8_t>& track);

} // namespace hybp
