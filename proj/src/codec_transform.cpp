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

#include <array>
#include <cmath>
#include <numbers>

namespace hybp {

namespace {

constexpr int N = 8;

// Orthonormal DCT-II basis: row 0 is 1/sqrt(8), rows i>0 are
// 0.5*cos((2j+1) i pi / 16).
const std::array<double, N * N>& dct_basis() {
    static const std::array<double, N * N> basis = [] {
        std::array<double, N * N> t{};
        for (int j = 0; j < N; ++j) t[j] = 1.0 / std::sqrt(8.0);
        for (int i = 1; i < N; ++i)
            for (int j = 0; j < N; ++j)
                t[i * N + j] = 0.5 * std::cos((2 * j + 1) * i * std::numbers::pi / 16.0);
        return t;
    }();
    return basis;
}

// C = T X T^t
void dct2d_impl(const double* x, double* c) {
    const auto& t = dct_basis();
    double tmp[N * N];
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int k = 0; k < N; ++k) acc += t[i * N + k] * x[k * N + j];
            tmp[i * N + j] = acc;
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int k = 0; k < N; ++k) acc += tmp[i * N + k] * t[j * N + k];
            c[i * N + j] = acc;
        }
}

// X = T^t C T
void idct2d_impl(const double* c, double* x) {
    const auto& t = dct_basis();
    double tmp[N * N];
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int k = 0; k < N; ++k) acc += t[k * N + i] * c[k * N + j];
            tmp[i * N + j] = acc;
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int k = 0; k < N; ++k) acc += tmp[i * N + k] * t[k * N + j];
            x[i * N + j] = acc;
        }
}

int16_t checked_narrow(long v) {
    if (v < -32768 || v > 32767) throw FormatError("transform_quant: coefficient overflow");
    return static_cast<int16_t>(v);
}

} // namespace

void dct_forward8(const double* block, double* coeffs) { dct2d_impl(block, coeffs); }
void dct_inverse8(const double* coeffs, double* block) { idct2d_impl(coeffs, block); }

std::vector<int16_t> transform_quant(const std::vector<double>& block8x8, int qp) {
    if (block8x8.size() != N * N) throw FormatError("transform_quant: block must be 8x8");
    std::vector<int16_t> out(N * N);
    if (qp == 0) {
        for (int i = 0; i < N * N; ++i) out[i] = checked_narrow(std::lround(block8x8[i] * 255.0));
        return out;
    }
    double coeffs[N * N];
    dct2d_impl(block8x8.data(), coeffs);
    const double step = quant_step(qp);
    for (int i = 0; i < N * N; ++i) out[i] = checked_narrow(std::lround(coeffs[i] / step));
    return out;
}

std::vector<double> dequant_itransform(const std::vector<int16_t>& coeffs, int qp) {
    if (coeffs.size() != N * N) throw FormatError("dequant_itransform: block must be 8x8");
    std::vector<double> out(N * N);
    if (qp == 0) {
        for (int i = 0; i < N * N; ++i) out[i] = coeffs[i] / 255.0;
        return out;
    }
    const double step = quant_step(qp);
    double c[N * N];
    for (int i = 0; i < N * N; ++i) c[i] = coeffs[i] * step;
    idct2d_impl(c, out.data());
    return out;
}

const std::vector<int>& zigzag_order8() {
    static const std::vector<int> order = [] {
        std::vector<int> o;
        o.reserve(N * N);
        for (int s = 0; s < 2 * N - 1; ++s) {
            if (s % 2 == 0) { // up-right diagonals
                for (int y = std::min(s, N - 1); y >= std::max(0, s - N + 1); --y)
                    o.push_back(y * N + (s - y));
            } else {
                for (int x = std::min(s, N - 1); x >= std::max(0, s - N + 1); --x)
                    o.push_back((s - x) * N + x);
            }
        }
        return o;
    }();
    return order;
}

} // namespace hybp
