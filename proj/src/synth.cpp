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

#include "hybp/synth.hpp"

#include "hybp/errors.hpp"
#include "hybp/prng.hpp"

#include <cmath>
#include <numbers>

namespace hybp {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

// Sum of a few seeded low-frequency cosines, horizontally periodic so the
// panning wrap does not introduce a seam into the texture itself.
Frame smooth_texture(int w, int h, uint64_t seed) {
    SplitMix64 rng(seed);
    constexpr int kWaves = 6;
    struct Wave {
        double fx, fy, phase, amp;
    };
    Wave waves[kWaves];
    for (auto& wv : waves) {
        wv.fx = static_cast<double>(static_cast<int>(rng.next_below(7)) - 3);
        wv.fy = static_cast<double>(static_cast<int>(rng.next_below(7)) - 3);
        if (wv.fx == 0.0 && wv.fy == 0.0) wv.fx = 1.0;
        wv.phase = rng.next_double(0.0, kTau);
        wv.amp = rng.next_double(0.05, 0.16);
    }
    Frame f(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = 0.5;
            for (const auto& wv : waves)
                v += wv.amp * std::cos(kTau * (wv.fx * x / w + wv.fy * y / h) + wv.phase);
            f.at(x, y) = std::min(1.0, std::max(0.0, v));
        }
    }
    return f.quantized();
}

VideoSequence make_translate(int w, int h, int n, uint64_t seed) {
    const Frame base = smooth_texture(w, h, seed);
    VideoSequence seq;
    seq.name = "translate";
    for (int t = 0; t < n; ++t) {
        Frame f(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) f.at(x, y) = base.at((x + t) % w, y);
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

VideoSequence make_rotate_gradient(int w, int h, int n, uint64_t seed) {
    SplitMix64 rng(seed);
    const double theta0 = rng.next_double(0.0, kTau);
    const double step = kTau / 32.0;
    VideoSequence seq;
    seq.name = "rotate-gradient";
    for (int t = 0; t < n; ++t) {
        const double theta = theta0 + t * step;
        const double cx = std::cos(theta), sy = std::sin(theta);
        Frame f(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double u = 2.0 * x / (w - 1) - 1.0;
                const double v = 2.0 * y / (h - 1) - 1.0;
                f.at(x, y) = 0.5 + 0.3 * (cx * u + sy * v);
            }
        }
        seq.frames.push_back(f.quantized());
    }
    return seq;
}

VideoSequence make_noise(int w, int h, int n, uint64_t seed) {
    SplitMix64 rng(seed);
    VideoSequence seq;
    seq.name = "noise";
    for (int t = 0; t < n; ++t) {
        Frame f(w, h);
        for (auto& v : f.data) v = rng.next_double();
        seq.frames.push_back(f.quantized());
    }
    return seq;
}

VideoSequence make_checker_pan(int w, int h, int n, uint64_t seed) {
    SplitMix64 rng(seed);
    const int cell = 8;
    const int x0 = static_cast<int>(rng.next_below(2 * cell));
    const int y0 = static_cast<int>(rng.next_below(2 * cell));
    VideoSequence seq;
    seq.name = "checker-pan";
    for (int t = 0; t < n; ++t) {
        Frame f(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const int cxi = ((x - t + x0) % (2 * cell) + 2 * cell) % (2 * cell) / cell;
                const int cyi = ((y - t + y0) % (2 * cell) + 2 * cell) % (2 * cell) / cell;
                f.at(x, y) = ((cxi + cyi) % 2 == 0) ? 0.1 : 0.9;
            }
        }
        seq.frames.push_back(f.quantized());
    }
    return seq;
}

} // namespace

SynthKind synth_kind_from_string(const std::string& s) {
    if (s == "translate") return SynthKind::Translate;
    if (s == "rotate-gradient") return SynthKind::RotateGradient;
    if (s == "noise") return SynthKind::Noise;
    if (s == "checker-pan") return SynthKind::CheckerPan;
    throw UsageError("unknown synth kind: " + s);
}

VideoSequence synth_sequence(SynthKind kind, int w, int h, int n_frames, uint64_t seed) {
    if (w < 16 || h < 16) throw UsageError("synth_sequence: dimensions must be >= 16");
    if (n_frames < 1) throw UsageError("synth_sequence: n_frames must be >= 1");
    VideoSequence seq;
    switch (kind) {
    case SynthKind::Translate: seq = make_translate(w, h, n_frames, seed); break;
    case SynthKind::RotateGradient: seq = make_rotate_gradient(w, h, n_frames, seed); break;
    case SynthKind::Noise: seq = make_noise(w, h, n_frames, seed); break;
    case SynthKind::CheckerPan: seq = make_checker_pan(w, h, n_frames, seed); break;
    }
    seq.fps = 30;
    return seq;
}

} // namespace hybp
