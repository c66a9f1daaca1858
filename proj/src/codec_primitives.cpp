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

#include "hybp/codec.hpp"

#include "hybp/errors.hpp"

#include <cmath>

namespace hybp {

double bilinear_sample(const Frame& f, double sx, double sy) {
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const double fx = sx - x0;
    const double fy = sy - y0;
    const double v00 = f.at_clamped(x0, y0);
    const double v10 = f.at_clamped(x0 + 1, y0);
    const double v01 = f.at_clamped(x0, y0 + 1);
    const double v11 = f.at_clamped(x0 + 1, y0 + 1);
    return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
}

namespace {

double block_sad_fullpel(const Frame& target, const Frame& ref, int x0, int y0, int bs, int dx,
                         int dy) {
    double sad = 0.0;
    for (int y = 0; y < bs; ++y)
        for (int x = 0; x < bs; ++x)
            sad += std::abs(target.at(x0 + x, y0 + y) - ref.at_clamped(x0 + x + dx, y0 + y + dy));
    return sad;
}

double block_sad_halfpel(const Frame& target, const Frame& ref, int x0, int y0, int bs,
                         const MotionVector& mv) {
    const double ox = mv.dx * 0.5;
    const double oy = mv.dy * 0.5;
    double sad = 0.0;
    for (int y = 0; y < bs; ++y)
        for (int x = 0; x < bs; ++x)
            sad += std::abs(target.at(x0 + x, y0 + y) -
                            bilinear_sample(ref, x0 + x + ox, y0 + y + oy));
    return sad;
}

// Lexicographic (sad, |dx|+|dy|, dy, dx) minimization.
struct Candidate {
    double sad = 0.0;
    int dx = 0;
    int dy = 0;

    bool better_than(const Candidate& o) const {
        if (sad != o.sad) return sad < o.sad;
        const int m = std::abs(dx) + std::abs(dy);
        const int om = std::abs(o.dx) + std::abs(o.dy);
        if (m != om) return m < om;
        if (dy != o.dy) return dy < o.dy;
        return dx < o.dx;
    }
};

} // namespace

MotionField motion_estimate(const Frame& target, const Frame& reference, const CodecConfig& cfg) {
    if (!target.same_dims(reference))
        throw FormatError("motion_estimate: dimension mismatch");
    const int bs = cfg.motion_block;
    if (target.width % bs != 0 || target.height % bs != 0)
        throw FormatError("motion_estimate: frame not padded to the motion block size");

    MotionField field(target.width / bs, target.height / bs, bs);
    for (int by = 0; by < field.blocks_y; ++by) {
        for (int bx = 0; bx < field.blocks_x; ++bx) {
            const int x0 = bx * bs, y0 = by * bs;

            Candidate best{block_sad_fullpel(target, reference, x0, y0, bs, 0, 0), 0, 0};
            for (int dy = -cfg.search_range; dy <= cfg.search_range; ++dy) {
                for (int dx = -cfg.search_range; dx <= cfg.search_range; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    Candidate c{block_sad_fullpel(target, reference, x0, y0, bs, dx, dy), dx, dy};
                    if (c.better_than(best)) best = c;
                }
            }

            // refine around the integer winner, half-pel units from here on;
            // candidates outside +-2*search_range are not representable
            const int bound = 2 * cfg.search_range;
            Candidate half{block_sad_halfpel(target, reference, x0, y0, bs,
                                             {2 * best.dx, 2 * best.dy}),
                           2 * best.dx, 2 * best.dy};
            for (int ny = -1; ny <= 1; ++ny) {
                for (int nx = -1; nx <= 1; ++nx) {
                    if (nx == 0 && ny == 0) continue;
                    const MotionVector mv{2 * best.dx + nx, 2 * best.dy + ny};
                    if (std::abs(mv.dx) > bound || std::abs(mv.dy) > bound) continue;
                    Candidate c{block_sad_halfpel(target, reference, x0, y0, bs, mv), mv.dx, mv.dy};
                    if (c.better_than(half)) half = c;
                }
            }
            field.at(bx, by) = {half.dx, half.dy};
        }
    }
    return field;
}

Frame warp(const Frame& reference, const MotionField& mvs) {
    const int bs = mvs.block_size;
    if (mvs.blocks_x * bs != reference.width || mvs.blocks_y * bs != reference.height)
        throw FormatError("warp: motion field grid does not cover the frame");
    Frame out(reference.width, reference.height);
    for (int by = 0; by < mvs.blocks_y; ++by) {
        for (int bx = 0; bx < mvs.blocks_x; ++bx) {
            const MotionVector& mv = mvs.at(bx, by);
            const double ox = mv.dx * 0.5;
            const double oy = mv.dy * 0.5;
            for (int y = by * bs; y < (by + 1) * bs; ++y)
                for (int x = bx * bs; x < (bx + 1) * bs; ++x)
                    out.at(x, y) = bilinear_sample(reference, x + ox, y + oy);
        }
    }
    return out;
}

BoundaryMask compute_boundary_mask(const Frame& frame, double threshold) {
    const int block = 8;
    if (frame.width % block != 0 || frame.height % block != 0)
        throw FormatError("compute_boundary_mask: frame not padded to the transform block size");
    BoundaryMask mask(frame.width, frame.height, block);
    for (int b = 0; b < mask.v_boundaries(); ++b) {
        const int x = (b + 1) * block;
        for (int y = 0; y < frame.height; ++y)
            mask.v_at(b, y) = std::abs(frame.at(x - 1, y) - frame.at(x, y)) < threshold ? 1 : 0;
    }
    for (int b = 0; b < mask.h_boundaries(); ++b) {
        const int y = (b + 1) * block;
        for (int x = 0; x < frame.width; ++x)
            mask.h_at(b, x) = std::abs(frame.at(x, y - 1) - frame.at(x, y)) < threshold ? 1 : 0;
    }
    return mask;
}

Frame deblock(const Frame& frame, const BoundaryMask& mask) {
    if (mask.width != frame.width || mask.height != frame.height)
        throw FormatError("deblock: mask dimensions mismatch");
    const int block = mask.block;

    Frame pass1 = frame;
    for (int b = 0; b < mask.v_boundaries(); ++b) {
        const int x = (b + 1) * block;
        for (int y = 0; y < frame.height; ++y) {
            if (!mask.v_at(b, y)) continue;
            const double pl = frame.at_clamped(x - 2, y);
            const double p = frame.at(x - 1, y);
            const double q = frame.at(x, y);
            const double qr = frame.at_clamped(x + 1, y);
            pass1.at(x - 1, y) = (pl + 2.0 * p + q) / 4.0;
            pass1.at(x, y) = (p + 2.0 * q + qr) / 4.0;
        }
    }

    Frame out = pass1;
    for (int b = 0; b < mask.h_boundaries(); ++b) {
        const int y = (b + 1) * block;
        for (int x = 0; x < frame.width; ++x) {
            if (!mask.h_at(b, x)) continue;
            const double pu = pass1.at_clamped(x, y - 2);
            const double p = pass1.at(x, y - 1);
            const double q = pass1.at(x, y);
            const double qd = pass1.at_clamped(x, y + 1);
            out.at(x, y - 1) = (pu + 2.0 * p + q) / 4.0;
            out.at(x, y) = (p + 2.0 * q + qd) / 4.0;
        }
    }
    return out;
}

Frame pad_frame(const Frame& f, int padded_w, int padded_h) {
    if (padded_w == f.width && padded_h == f.height) return f;
    Frame out(padded_w, padded_h);
    for (int y = 0; y < padded_h; ++y)
        for (int x = 0; x < padded_w; ++x)
            out.at(x, y) = f.at(std::min(x, f.width - 1), std::min(y, f.height - 1));
    return out;
}

Frame crop_frame(const Frame& f, int w, int h) {
    if (w == f.width && h == f.height) return f;
    Frame out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(x, y) = f.at(x, y);
    return out;
}

} // namespace hybp
