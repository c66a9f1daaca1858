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

#include <cstdint>
#include <optional>
#include <vector>

namespace hybp {

struct CodecConfig {
    int motion_block = 16;     // motion estimation block size
    int transform_block = 8;   // DCT block size
    int search_range = 8;      // full-pel search radius
    int qp_max = 51;
    int gop_length = 8;
    bool b_frames_enabled = true;
    double deblock_threshold = 0.08; // boundary gating; disabled entirely at qp == 0

    // Frames are padded by edge replication to a multiple of the motion block
    // (which the transform block also divides) and cropped back on output.
    int padded_dim(int dim) const {
        const int m = motion_block;
        return (dim + m - 1) / m * m;
    }
};

enum class FrameType : uint8_t { I = 0, P = 1, B = 2 };

// Half-pel displacement of one motion block.
struct MotionVector {
    int dx = 0;
    int dy = 0;
    bool operator==(const MotionVector&) const = default;
};

struct MotionField {
    int blocks_x = 0;
    int blocks_y = 0;
    int block_size = 16;
    std::vector<MotionVector> mvs;

    MotionField() = default;
    MotionField(int bx, int by, int bs)
        : blocks_x(bx), blocks_y(by), block_size(bs), mvs(static_cast<size_t>(bx) * by) {}

    MotionVector& at(int bx, int by) { return mvs[static_cast<size_t>(by) * blocks_x + bx]; }
    const MotionVector& at(int bx, int by) const {
        return mvs[static_cast<size_t>(by) * blocks_x + bx];
    }
    bool operator==(const MotionField&) const = default;
};

// Per-sample gating flags on the 8x8 boundary grid. vertical[b][y] gates the
// pair (x-1, x) at x = (b+1)*block in row y; horizontal[b][x] gates the pair
// (y-1, y) at y = (b+1)*block in column x.
struct BoundaryMask {
    int width = 0;
    int height = 0;
    int block = 8;
    std::vector<uint8_t> vertical;   // size v_boundaries() * height
    std::vector<uint8_t> horizontal; // size h_boundaries() * width

    BoundaryMask() = default;
    BoundaryMask(int w, int h, int b)
        : width(w), height(h), block(b),
          vertical(static_cast<size_t>(v_boundaries()) * h, 0),
          horizontal(static_cast<size_t>(h_boundaries()) * w, 0) {}

    int v_boundaries() const { return width / block - 1; }
    int h_boundaries() const { return height / block - 1; }

    uint8_t& v_at(int b, int y) { return vertical[static_cast<size_t>(b) * height + y]; }
    uint8_t v_at(int b, int y) const { return vertical[static_cast<size_t>(b) * height + y]; }
    uint8_t& h_at(int b, int x) { return horizontal[static_cast<size_t>(b) * width + x]; }
    uint8_t h_at(int b, int x) const { return horizontal[static_cast<size_t>(b) * width + x]; }

    bool all_clear() const;
};

// Parsed P/B unit. Coefficient blocks hold quantized DCT levels when qp > 0
// and raw spatial integer residuals when qp == 0, both in block raster order.
struct ResidualUnit {
    FrameType frame_type = FrameType::P;
    int qp = 0;
    std::vector<MotionField> motion;           // one field for P, two for B
    std::vector<std::vector<int16_t>> blocks;  // 64 entries per transform block
    std::vector<int> ref_indices;              // presentation indices
};

// One GOP's coded form. pb_units are serialized in decode order; sizes are
// the per-unit byte counts including the 8-byte unit header.
struct CodedGop {
    int width = 0;
    int height = 0;
    int qp = 0;
    bool b_frames = false;
    int frame_count = 0;
    std::optional<std::vector<uint8_t>> i_frame_unit;
    std::vector<std::vector<uint8_t>> pb_units;
    std::vector<size_t> sizes;

    size_t pb_bytes() const {
        size_t total = 0;
        for (size_t s : sizes) total += s;
        return total;
    }
    size_t i_unit_bytes() const { return i_frame_unit ? i_frame_unit->size() : 0; }
};

// Decode-order schedule for the dependent frames of a GOP. With B-frames
// enabled, odd presentation indices are bi-predicted from their two even
// neighbors and never referenced; a trailing odd frame has no future anchor
// and is coded as P.
struct ScheduleEntry {
    int pres = 0;
    FrameType type = FrameType::P;
    int ref0 = -1;
    int ref1 = -1;
};

std::vector<ScheduleEntry> gop_schedule(int n_frames, bool b_frames_enabled);

// Quantizer step, doubling every 6 qp; qp == 0 bypasses the transform.
double quant_step(int qp);

} // namespace hybp
