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

#include "hybp/frame.hpp"
#include "hybp/tape.hpp"

#include <cstdint>
#include <vector>

namespace hybp {

// Deterministic two-layer decoder G(z) = sigmoid(W2 tanh(W1 z + b1) + b2).
// Weights are drawn once from the seeded generator and never trained; the
// output layer is a seeded low-frequency cosine dictionary, which keeps the
// image smooth in space and G everywhere differentiable in z.
struct GeneratorSpec {
    uint64_t seed = 42;
    int latent_dim = 1024;
    int hidden = 256;
    int width = 64;  // full-resolution output
    int height = 64;
    bool two_stage = true; // synthesize at half resolution, then upsample 2x

    int lowres_w() const { return two_stage ? (width + 1) / 2 : width; }
    int lowres_h() const { return two_stage ? (height + 1) / 2 : height; }
    bool operator==(const GeneratorSpec&) const = default;
};

struct GeneratorWeights {
    GeneratorSpec spec;
    std::vector<double> w1; // hidden x latent_dim
    std::vector<double> b1; // hidden
    std::vector<double> w2; // n_pixels x hidden
    std::vector<double> b2; // n_pixels

    static GeneratorWeights build(const GeneratorSpec& spec);
};

// Plain forwards (no tape).
std::vector<double> generate_lowres(const GeneratorWeights& gw, const std::vector<double>& z);
Frame generate_iframe(const GeneratorWeights& gw, const std::vector<double>& z);

// Tape-recorded versions. z is a 1 x latent_dim tensor.
TensorRef generator_node(Tape& tape, TensorRef z, const GeneratorWeights& gw);
TensorRef build_iframe_graph(Tape& tape, TensorRef z, const GeneratorWeights& gw);

// --- latent serialization -----------------------------------------------------

struct LatentCode {
    std::vector<double> z;
    uint64_t generator_seed = 42;
    uint16_t width = 0;
    uint16_t height = 0;

    GeneratorSpec spec(int hidden = 256, bool two_stage = true) const {
        GeneratorSpec s;
        s.seed = generator_seed;
        s.latent_dim = static_cast<int>(z.size());
        s.hidden = hidden;
        s.width = width;
        s.height = height;
        s.two_stage = two_stage;
        return s;
    }
};

// Layout: u32 d, u64 seed, u16 w, u16 h, f32 scale, then d i16 values
// quantized as round(z / scale * 32767), all little-endian.
std::vector<uint8_t> serialize_latent(const LatentCode& code);
LatentCode deserialize_latent(const std::vector<uint8_t>& bytes);
constexpr size_t latent_header_bytes() { return 4 + 8 + 2 + 2 + 4; }
constexpr size_t serialized_latent_size(int d) { return latent_header_bytes() + 2 * static_cast<size_t>(d); }

} // namespace hybp
