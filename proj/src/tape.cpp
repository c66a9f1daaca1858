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

#include "hybp/tape.hpp"

#include "hybp/errors.hpp"

#include <cmath>

namespace hybp {

const std::vector<double>& TensorRef::value() const { return tape->node(node).value; }
const std::vector<double>& TensorRef::grad() const { return tape->node(node).adjoint; }

std::vector<double>& Tape::adjoint_of(int id) {
    TapeNode& n = *nodes_[id];
    if (n.adjoint.empty()) n.adjoint.assign(n.value.size(), 0.0);
    return n.adjoint;
}

namespace {

int clamp_idx(int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); }

// The four taps of one bilinear sample; shared by the forward gather and the
// adjoint scatter so the backward is the exact transpose.
struct Taps {
    int idx[4];
    double wgt[4];
};

Taps bilinear_taps(double sx, double sy, int w, int h) {
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const double fx = sx - x0;
    const double fy = sy - y0;
    Taps t;
    const int xa = clamp_idx(x0, w), xb = clamp_idx(x0 + 1, w);
    const int ya = clamp_idx(y0, h), yb = clamp_idx(y0 + 1, h);
    t.idx[0] = ya * w + xa;
    t.idx[1] = ya * w + xb;
    t.idx[2] = yb * w + xa;
    t.idx[3] = yb * w + xb;
    t.wgt[0] = (1.0 - fy) * (1.0 - fx);
    t.wgt[1] = (1.0 - fy) * fx;
    t.wgt[2] = fy * (1.0 - fx);
    t.wgt[3] = fy * fx;
    return t;
}

struct LeafNode final : TapeNode {
    LeafNode(int hh, int ww, std::vector<double> v) {
        h = hh;
        w = ww;
        value = std::move(v);
    }
    void backward(Tape&) override {}
};

struct WarpNode final : TapeNode {
    MotionField mvs;

    WarpNode(Tape& tape, TensorRef x, MotionField field) : mvs(std::move(field)) {
        h = x.h;
        w = x.w;
        inputs = {x.node};
        const auto& in = tape.node(x.node).value;
        value.resize(in.size());
        for_each_tap([&](int out_idx, const Taps& t) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += t.wgt[k] * in[t.idx[k]];
            value[out_idx] = acc;
        });
    }

    template <typename Fn>
    void for_each_tap(Fn&& fn) const {
        const int bs = mvs.block_size;
        for (int by = 0; by < mvs.blocks_y; ++by)
            for (int bx = 0; bx < mvs.blocks_x; ++bx) {
                const MotionVector& mv = mvs.at(bx, by);
                const double ox = mv.dx * 0.5, oy = mv.dy * 0.5;
                for (int y = by * bs; y < (by + 1) * bs; ++y)
                    for (int x = bx * bs; x < (bx + 1) * bs; ++x)
                        fn(y * w + x, bilinear_taps(x + ox, y + oy, w, h));
            }
    }

    void backward(Tape& tape) override {
        auto& gin = tape.adjoint_of(inputs[0]);
        for_each_tap([&](int out_idx, const Taps& t) {
            const double g = adjoint[out_idx];
            if (g == 0.0) return;
            for (int k = 0; k < 4; ++k) gin[t.idx[k]] += t.wgt[k] * g;
        });
    }
};

struct AddConstNode final : TapeNode {
    AddConstNode(Tape& tape, TensorRef x, std::vector<double> c) {
        h = x.h;
        w = x.w;
        inputs = {x.node};
        const auto& in = tape.node(x.node).value;
        value.resize(in.size());
        for (size_t i = 0; i < in.size(); ++i) value[i] = in[i] + c[i];
    }
    void backward(Tape& tape) override {
        auto& gin = tape.adjoint_of(inputs[0]);
        for (size_t i = 0; i < adjoint.size(); ++i) gin[i] += adjoint[i];
    }
};

struct AverageNode final : TapeNode {
    AverageNode(Tape& tape, TensorRef a, TensorRef b) {
        h = a.h;
        w = a.w;
        inputs = {a.node, b.node};
        const auto& va = tape.node(a.node).value;
        const auto& vb = tape.node(b.node).value;
        value.resize(va.size());
        for (size_t i = 0; i < va.size(); ++i) value[i] = 0.5 * (va[i] + vb[i]);
    }
    void backward(Tape& tape) override {
        auto& ga = tape.adjoint_of(inputs[0]);
        auto& gb = tape.adjoint_of(inputs[1]);
        for (size_t i = 0; i < adjoint.size(); ++i) {
            ga[i] += 0.5 * adjoint[i];
            gb[i] += 0.5 * adjoint[i];
        }
    }
};

struct ClipNode final : TapeNode {
    double lo, hi;
    ClipNode(Tape& tape, TensorRef x, double lo_, double hi_) : lo(lo_), hi(hi_) {
        h = x.h;
        w = x.w;
        inputs = {x.node};
        const auto& in = tape.node(x.node).value;
        value.resize(in.size());
        for (size_t i = 0; i < in.size(); ++i)
            value[i] = in[i] < lo ? lo : (in[i] > hi ? hi : in[i]);
    }
    void backward(Tape& tape) override {
        const auto& in = tape.node(inputs[0]).value;
        auto& gin = tape.adjoint_of(inputs[0]);
        // exact subgradient: zero where the clamp is active
        for (size_t i = 0; i < adjoint.size(); ++i)
            if (in[i] > lo && in[i] < hi) gin[i] += adjoint[i];
    }
};

struct DeblockNode final : TapeNode {
    BoundaryMask mask;

    DeblockNode(Tape& tape, TensorRef x, BoundaryMask m) : mask(std::move(m)) {
        h = x.h;
        w = x.w;
        inputs = {x.node};
        const auto& in = tape.node(x.node).value;
        std::vector<double> pass1 = in;
        apply_vertical(in, pass1);
        value = pass1;
        apply_horizontal(pass1, value);
    }

    void apply_vertical(const std::vector<double>& in, std::vector<double>& out) const {
        for (int b = 0; b < mask.v_boundaries(); ++b) {
            const int x = (b + 1) * mask.block;
            for (int y = 0; y < h; ++y) {
                if (!mask.v_at(b, y)) continue;
                const double pl = in[y * w + clamp_idx(x - 2, w)];
                const double p = in[y * w + x - 1];
                const double q = in[y * w + x];
                const double qr = in[y * w + clamp_idx(x + 1, w)];
                out[y * w + x - 1] = (pl + 2.0 * p + q) / 4.0;
                out[y * w + x] = (p + 2.0 * q + qr) / 4.0;
            }
        }
    }

    void apply_horizontal(const std::vector<double>& in, std::vector<double>& out) const {
        for (int b = 0; b < mask.h_boundaries(); ++b) {
            const int y = (b + 1) * mask.block;
            for (int x = 0; x < w; ++x) {
                if (!mask.h_at(b, x)) continue;
                const double pu = in[clamp_idx(y - 2, h) * w + x];
                const double p = in[(y - 1) * w + x];
                const double q = in[y * w + x];
                const double qd = in[clamp_idx(y + 1, h) * w + x];
                out[(y - 1) * w + x] = (pu + 2.0 * p + q) / 4.0;
                out[y * w + x] = (p + 2.0 * q + qd) / 4.0;
            }
        }
    }

    void transpose_vertical(const std::vector<double>& g, std::vector<double>& gin) const {
        gin = g;
        for (int b = 0; b < mask.v_boundaries(); ++b) {
            const int x = (b + 1) * mask.block;
            for (int y = 0; y < h; ++y) {
                if (!mask.v_at(b, y)) continue;
                const double gp = g[y * w + x - 1];
                const double gq = g[y * w + x];
                gin[y * w + x - 1] -= gp; // remove pass-through of overwritten samples
                gin[y * w + x] -= gq;
                gin[y * w + clamp_idx(x - 2, w)] += gp / 4.0;
                gin[y * w + x - 1] += 2.0 * gp / 4.0;
                gin[y * w + x] += gp / 4.0;
                gin[y * w + x - 1] += gq / 4.0;
                gin[y * w + x] += 2.0 * gq / 4.0;
                gin[y * w + clamp_idx(x + 1, w)] += gq / 4.0;
            }
        }
    }

    void transpose_horizontal(const std::vector<double>& g, std::vector<double>& gin) const {
        gin = g;
        for (int b = 0; b < mask.h_boundaries(); ++b) {
            const int y = (b + 1) * mask.block;
            for (int x = 0; x < w; ++x) {
                if (!mask.h_at(b, x)) continue;
                const double gp = g[(y - 1) * w + x];
                const double gq = g[y * w + x];
                gin[(y - 1) * w + x] -= gp;
                gin[y * w + x] -= gq;
                gin[clamp_idx(y - 2, h) * w + x] += gp / 4.0;
                gin[(y - 1) * w + x] += 2.0 * gp / 4.0;
                gin[y * w + x] += gp / 4.0;
                gin[(y - 1) * w + x] += gq / 4.0;
                gin[y * w + x] += 2.0 * gq / 4.0;
                gin[clamp_idx(y + 1, h) * w + x] += gq / 4.0;
            }
        }
    }

    void backward(Tape& tape) override {
        std::vector<double> g_pass1;
        transpose_horizontal(adjoint, g_pass1);
        std::vector<double> g_in;
        transpose_vertical(g_pass1, g_in);
        auto& gin = tape.adjoint_of(inputs[0]);
        for (size_t i = 0; i < gin.size(); ++i) gin[i] += g_in[i];
    }
};

struct ResampleNode final : TapeNode {
    int in_h, in_w;

    ResampleNode(Tape& tape, TensorRef x, int out_h, int out_w) : in_h(x.h), in_w(x.w) {
        h = out_h;
        w = out_w;
        inputs = {x.node};
        const auto& in = tape.node(x.node).value;
        value.resize(static_cast<size_t>(out_h) * out_w);
        for_each_tap([&](int out_idx, const Taps& t) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += t.wgt[k] * in[t.idx[k]];
            value[out_idx] = acc;
        });
    }

    template <typename Fn>
    void for_each_tap(Fn&& fn) const {
        // align-corners sample positions
        const double sx = w > 1 ? static_cast<double>(in_w - 1) / (w - 1) : 0.0;
        const double sy = h > 1 ? static_cast<double>(in_h - 1) / (h - 1) : 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                fn(y * w + x, bilinear_taps(x * sx, y * sy, in_w, in_h));
    }

    void backward(Tape& tape) override {
        auto& gin = tape.adjoint_of(inputs[0]);
        for_each_tap([&](int out_idx, const Taps& t) {
            const double g = adjoint[out_idx];
            if (g == 0.0) return;
            for (int k = 0; k < 4; ++k) gin[t.idx[k]] += t.wgt[k] * g;
        });
    }
};

struct PadNode final : TapeNode {
    int in_h, in_w;
    PadNode(Tape& tape, TensorRef x, int out_h, int out_w) : in_h(x.h), in_w(x.w) {
        h = out_h;
        w = out_w;
        inputs = {x.node};
        const auto& in = tape.node(x.node).value;
        value.resize(static_cast<size_t>(out_h) * out_w);
        for (int y = 0; y < out_h; ++y)
            for (int x = 0; x < out_w; ++x)
                value[y * w + x] = in[std::min(y, in_h - 1) * in_w + std::min(x, in_w - 1)];
    }
    void backward(Tape& tape) override {
        auto& gin = tape.adjoint_of(inputs[0]);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                gin[std::min(y, in_h - 1) * in_w + std::min(x, in_w - 1)] += adjoint[y * w + x];
    }
};

struct CropNode final : TapeNode {
    int in_h, in_w;
    CropNode(Tape& tape, TensorRef x, int out_h, int out_w) : in_h(x.h), in_w(x.w) {
        h = out_h;
        w = out_w;
        inputs = {x.node};
        const auto& in = tape.node(x.node).value;
        value.resize(static_cast<size_t>(out_h) * out_w);
        for (int y = 0; y < out_h; ++y)
            for (int x = 0; x < out_w; ++x) value[y * w + x] = in[y * in_w + x];
    }
    void backward(Tape& tape) override {
        auto& gin = tape.adjoint_of(inputs[0]);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) gin[y * in_w + x] += adjoint[y * w + x];
    }
};

struct MseNode final : TapeNode {
    std::vector<double> target;
    MseNode(Tape& tape, TensorRef x, std::vector<double> t) : target(std::move(t)) {
        h = 1;
        w = 1;
        inputs = {x.node};
        const auto& in = tape.node(x.node).value;
        double acc = 0.0;
        for (size_t i = 0; i < in.size(); ++i) {
            const double d = in[i] - target[i];
            acc += d * d;
        }
        value = {acc / static_cast<double>(in.size())};
    }
    void backward(Tape& tape) override {
        const auto& in = tape.node(inputs[0]).value;
        auto& gin = tape.adjoint_of(inputs[0]);
        const double scale = adjoint[0] * 2.0 / static_cast<double>(in.size());
        for (size_t i = 0; i < in.size(); ++i) gin[i] += scale * (in[i] - target[i]);
    }
};

struct WeightedSumNode final : TapeNode {
    std::vector<double> weights;
    WeightedSumNode(Tape& tape, const std::vector<TensorRef>& xs, std::vector<double> ws)
        : weights(std::move(ws)) {
        h = 1;
        w = 1;
        double acc = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            inputs.push_back(xs[i].node);
            acc += weights[i] * tape.node(xs[i].node).value[0];
        }
        value = {acc};
    }
    void backward(Tape& tape) override {
        for (size_t i = 0; i < inputs.size(); ++i) tape.adjoint_of(inputs[i])[0] += weights[i] * adjoint[0];
    }
};

void check_same_shape(const TensorRef& a, const TensorRef& b) {
    if (a.h != b.h || a.w != b.w) throw FormatError("tape: shape mismatch");
}

} // namespace

TensorRef Tape::leaf(int h, int w, std::vector<double> values) {
    if (values.size() != static_cast<size_t>(h) * w) throw FormatError("tape: leaf size mismatch");
    return emplace<LeafNode>(h, w, std::move(values));
}

TensorRef Tape::warp(TensorRef x, const MotionField& mvs) {
    if (mvs.blocks_x * mvs.block_size != x.w || mvs.blocks_y * mvs.block_size != x.h)
        throw FormatError("tape: motion field grid does not cover the tensor");
    return emplace<WarpNode>(*this, x, mvs);
}

TensorRef Tape::add_constant(TensorRef x, std::vector<double> constant) {
    if (constant.size() != x.value().size()) throw FormatError("tape: constant size mismatch");
    return emplace<AddConstNode>(*this, x, std::move(constant));
}

TensorRef Tape::average(TensorRef a, TensorRef b) {
    check_same_shape(a, b);
    return emplace<AverageNode>(*this, a, b);
}

TensorRef Tape::clip(TensorRef x, double lo, double hi) {
    return emplace<ClipNode>(*this, x, lo, hi);
}

TensorRef Tape::deblock(TensorRef x, const BoundaryMask& mask) {
    if (mask.width != x.w || mask.height != x.h) throw FormatError("tape: mask shape mismatch");
    return emplace<DeblockNode>(*this, x, mask);
}

TensorRef Tape::upsample_bilinear(TensorRef x, int out_h, int out_w) {
    return emplace<ResampleNode>(*this, x, out_h, out_w);
}

TensorRef Tape::pad_replicate(TensorRef x, int out_h, int out_w) {
    if (out_h < x.h || out_w < x.w) throw FormatError("tape: pad must not shrink");
    return emplace<PadNode>(*this, x, out_h, out_w);
}

TensorRef Tape::crop(TensorRef x, int out_h, int out_w) {
    if (out_h > x.h || out_w > x.w) throw FormatError("tape: crop must not grow");
    return emplace<CropNode>(*this, x, out_h, out_w);
}

TensorRef Tape::mse_against(TensorRef x, std::vector<double> target) {
    if (target.size() != x.value().size()) throw FormatError("tape: target size mismatch");
    return emplace<MseNode>(*this, x, std::move(target));
}

TensorRef Tape::weighted_sum(const std::vector<TensorRef>& xs, const std::vector<double>& weights) {
    if (xs.empty() || xs.size() != weights.size())
        throw FormatError("tape: weighted_sum arity mismatch");
    for (const auto& x : xs)
        if (x.value().size() != 1) throw FormatError("tape: weighted_sum expects scalars");
    return emplace<WeightedSumNode>(*this, xs, weights);
}

void Tape::backward(TensorRef root) {
    if (root.tape != this) throw FormatError("tape: foreign tensor");
    if (node(root.node).value.size() != 1) throw FormatError("tape: backward needs a scalar root");
    for (auto& n : nodes_) n->adjoint.clear();
    adjoint_of(root.node)[0] = 1.0;
    for (int id = root.node; id >= 0; --id) {
        TapeNode& n = *nodes_[id];
        if (n.adjoint.empty()) continue; // unreachable from the root
        n.backward(*this);
    }
    // leaves that never received gradient still expose a zero adjoint
    for (auto& n : nodes_)
        if (n->adjoint.empty()) n->adjoint.assign(n->value.size(), 0.0);
}

} // namespace hybp
