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

#include "hybp/generator.hpp"

#include "hybp/errors.hpp"
#include "hybp/prng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace hybp {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct MlpActivations {
    std::vector<double> hidden; // tanh(W1 z + b1)
    std::vector<double> out;    // sigmoid(W2 h + b2)
};

MlpActivations mlp_forward(const GeneratorWeights& gw, const std::vector<double>& z) {
    const int d = gw.spec.latent_dim;
    const int hid = gw.spec.hidden;
    const int n_pix = gw.spec.lowres_w() * gw.spec.lowres_h();
    if (static_cast<int>(z.size()) != d)
        throw FormatError("generator: latent dimension mismatch");

    MlpActivations act;
    act.hidden.resize(hid);
    for (int j = 0; j < hid; ++j) {
        double acc = gw.b1[j];
        const double* row = gw.w1.data() + static_cast<size_t>(j) * d;
        for (int i = 0; i < d; ++i) acc += row[i] * z[i];
        act.hidden[j] = std::tanh(acc);
    }
    act.out.resize(n_pix);
    for (int p = 0; p < n_pix; ++p) {
        double acc = gw.b2[p];
        const double* row = gw.w2.data() + static_cast<size_t>(p) * hid;
        for (int j = 0; j < hid; ++j) acc += row[j] * act.hidden[j];
        act.out[p] = sigmoid(acc);
    }
    return act;
}

// dL/dz given dL/dout; needs the stashed activations.
std::vector<double> mlp_backward(const GeneratorWeights& gw, const MlpActivations& act,
                                 const std::vector<double>& g_out) {
    const int d = gw.spec.latent_dim;
    const int hid = gw.spec.hidden;
    const int n_pix = static_cast<int>(act.out.size());

    std::vector<double> g_hidden(hid, 0.0);
    for (int p = 0; p < n_pix; ++p) {
        const double g_pre = g_out[p] * act.out[p] * (1.0 - act.out[p]);
        if (g_pre == 0.0) continue;
        const double* row = gw.w2.data() + static_cast<size_t>(p) * hid;
        for (int j = 0; j < hid; ++j) g_hidden[j] += row[j] * g_pre;
    }
    std::vector<double> g_z(d, 0.0);
    for (int j = 0; j < hid; ++j) {
        const double g_pre = g_hidden[j] * (1.0 - act.hidden[j] * act.hidden[j]);
        if (g_pre == 0.0) continue;
        const double* row = gw.w1.data() + static_cast<size_t>(j) * d;
        for (int i = 0; i < d; ++i) g_z[i] += row[i] * g_pre;
    }
    return g_z;
}

struct GeneratorTapeNode final : TapeNode {
    const GeneratorWeights* gw;
    MlpActivations act;

    GeneratorTapeNode(Tape& tape, TensorRef z, const GeneratorWeights& weights) : gw(&weights) {
        h = weights.spec.lowres_h();
        w = weights.spec.lowres_w();
        inputs = {z.node};
        act = mlp_forward(weights, tape.node(z.node).value);
        value = act.out;
    }

    void backward(Tape& tape) override {
        const auto g_z = mlp_backward(*gw, act, adjoint);
        auto& gin = tape.adjoint_of(inputs[0]);
        for (size_t i = 0; i < gin.size(); ++i) gin[i] += g_z[i];
    }
};

} // namespace

GeneratorWeights GeneratorWeights::build(const GeneratorSpec& spec) {
    if (spec.latent_dim <= 0 || spec.hidden <= 0 || spec.width <= 0 || spec.height <= 0)
        throw UsageError("generator: invalid spec");
    GeneratorWeights gw;
    gw.spec = spec;
    SplitMix64 rng(spec.seed);

    const int d = spec.latent_dim;
    const int hid = spec.hidden;
    const int wl = spec.lowres_w();
    const int hl = spec.lowres_h();
    const int n_pix = wl * hl;

    const double a1 = std::sqrt(3.0 / d);
    gw.w1.resize(static_cast<size_t>(hid) * d);
    for (auto& v : gw.w1) v = rng.next_double(-a1, a1);
    gw.b1.resize(hid);
    for (auto& v : gw.b1) v = rng.next_double(-0.5, 0.5);

    // Cosine atom per hidden unit: amplitude, low spatial frequency, phase.
    gw.w2.assign(static_cast<size_t>(n_pix) * hid, 0.0);
    constexpr double kTau = 2.0 * std::numbers::pi;
    for (int j = 0; j < hid; ++j) {
        const double fx = rng.next_double(-4.5, 4.5);
        const double fy = rng.next_double(-4.5, 4.5);
        const double phase = rng.next_double(0.0, kTau);
        const double amp = rng.next_double(0.06, 0.22);
        for (int y = 0; y < hl; ++y)
            for (int x = 0; x < wl; ++x)
                gw.w2[static_cast<size_t>(y * wl + x) * hid + j] =
                    amp * std::cos(kTau * (fx * x / wl + fy * y / hl) + phase);
    }
    gw.b2.resize(n_pix);
    for (auto& v : gw.b2) v = rng.next_double(-0.2, 0.2);
    return gw;
}

std::vector<double> generate_lowres(const GeneratorWeights& gw, const std::vector<double>& z) {
    return mlp_forward(gw, z).out;
}

TensorRef generator_node(Tape& tape, TensorRef z, const GeneratorWeights& gw) {
    if (z.h * z.w != gw.spec.latent_dim)
        throw FormatError("generator: latent tensor dimension mismatch");
    return tape.emplace<GeneratorTapeNode>(tape, z, gw);
}

TensorRef build_iframe_graph(Tape& tape, TensorRef z, const GeneratorWeights& gw) {
    TensorRef x = generator_node(tape, z, gw);
    if (gw.spec.two_stage) x = tape.upsample_bilinear(x, gw.spec.height, gw.spec.width);
    return tape.clip(x, 0.0, 1.0);
}

Frame generate_iframe(const GeneratorWeights& gw, const std::vector<double>& z) {
    Tape tape;
    const TensorRef zt = tape.leaf(1, gw.spec.latent_dim, z);
    const TensorRef out = build_iframe_graph(tape, zt, gw);
    Frame f(gw.spec.width, gw.spec.height);
    f.data = out.value();
    return f;
}

// --- latent serialization -----------------------------------------------------

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xFF));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    put_u16(out, static_cast<uint16_t>(v & 0xFFFF));
    put_u16(out, static_cast<uint16_t>(v >> 16));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    put_u32(out, static_cast<uint32_t>(v & 0xFFFFFFFFULL));
    put_u32(out, static_cast<uint32_t>(v >> 32));
}

uint16_t get_u16(const std::vector<uint8_t>& b, size_t off) {
    return static_cast<uint16_t>(b[off] | (b[off + 1] << 8));
}

uint32_t get_u32(const std::vector<uint8_t>& b, size_t off) {
    return static_cast<uint32_t>(get_u16(b, off)) | (static_cast<uint32_t>(get_u16(b, off + 2)) << 16);
}

uint64_t get_u64(const std::vector<uint8_t>& b, size_t off) {
    return static_cast<uint64_t>(get_u32(b, off)) | (static_cast<uint64_t>(get_u32(b, off + 4)) << 32);
}

} // namespace

std::vector<uint8_t> serialize_latent(const LatentCode& code) {
    double scale = 0.0;
    for (double v : code.z) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;

    std::vector<uint8_t> out;
    out.reserve(serialized_latent_size(static_cast<int>(code.z.size())));
    put_u32(out, static_cast<uint32_t>(code.z.size()));
    put_u64(out, code.generator_seed);
    put_u16(out, code.width);
    put_u16(out, code.height);
    put_u32(out, std::bit_cast<uint32_t>(static_cast<float>(scale)));
    const float fscale = static_cast<float>(scale);
    for (double v : code.z) {
        long q = std::lround(v / fscale * 32767.0);
        if (q > 32767) q = 32767;
        if (q < -32767) q = -32767;
        put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
    }
    return out;
}

LatentCode deserialize_latent(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < latent_header_bytes())
        throw TruncationError("latent: header truncated", bytes.size());
    LatentCode code;
    const uint32_t d = get_u32(bytes, 0);
    code.generator_seed = get_u64(bytes, 4);
    code.width = get_u16(bytes, 12);
    code.height = get_u16(bytes, 14);
    const float scale = std::bit_cast<float>(get_u32(bytes, 16));
    if (bytes.size() != serialized_latent_size(static_cast<int>(d)))
        throw TruncationError("latent: payload truncated", bytes.size());
    if (!(scale > 0.0f) || !std::isfinite(scale)) throw FormatError("latent: bad scale");
    code.z.resize(d);
    for (uint32_t i = 0; i < d; ++i) {
        const int16_t q = static_cast<int16_t>(get_u16(bytes, latent_header_bytes() + 2 * i));
        code.z[i] = static_cast<double>(q) / 32767.0 * scale;
    }
    return code;
}

} // namespace hybp
