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

#include "hybp/generator.hpp"

#include <cmath>

namespace hybp {

struct OptimizerConfig {
    int iters = 800;
    double step = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adaptive-moment update over a flat parameter vector.
class AdamState {
public:
    AdamState(size_t dim, const OptimizerConfig& cfg)
        : cfg_(cfg), m_(dim, 0.0), v_(dim, 0.0) {}

    void apply(std::vector<double>& params, const std::vector<double>& grad) {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
        const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
        for (size_t i = 0; i < params.size(); ++i) {
            m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
            v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
            params[i] -= cfg_.step * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + cfg_.eps);
        }
    }

    void set_step(double step) { cfg_.step = step; }

private:
    OptimizerConfig cfg_;
    int t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

struct InvertReport {
    std::vector<double> loss_trace; // loss before each update
    double best_loss = 0.0;
    int restarts = 0;
};

struct InvertResult {
    LatentCode latent;
    InvertReport report;
};

// Gradient-descent inversion from z = 0; returns the best z seen. Diverging
// runs (loss above 10x the initial) restart once at half step size; a second
// divergence raises OptimizationError.
InvertResult invert(const Frame& target, const GeneratorWeights& gw, const OptimizerConfig& opt);

} // namespace hybp
