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

#include "hybp/invert.hpp"

#include "hybp/errors.hpp"

#include <limits>

namespace hybp {

InvertResult invert(const Frame& target, const GeneratorWeights& gw, const OptimizerConfig& opt) {
    const GeneratorSpec& spec = gw.spec;
    if (target.width != spec.width || target.height != spec.height)
        throw FormatError("invert: target dimensions do not match the generator spec");

    InvertResult result;
    result.latent.generator_seed = spec.seed;
    result.latent.width = static_cast<uint16_t>(spec.width);
    result.latent.height = static_cast<uint16_t>(spec.height);

    const int d = spec.latent_dim;
    std::vector<double> z(d, 0.0);
    if (opt.iters == 0) {
        result.latent.z = z;
        result.report.best_loss = mse(generate_iframe(gw, z), target);
        return result;
    }
    std::vector<double> best_z = z;
    double best_loss = std::numeric_limits<double>::infinity();
    double step = opt.step;

    for (int attempt = 0; attempt < 2; ++attempt) {
        z.assign(d, 0.0);
        OptimizerConfig cfg = opt;
        cfg.step = step;
        AdamState adam(d, cfg);
        double initial_loss = -1.0;
        bool diverged = false;

        for (int it = 0; it < opt.iters; ++it) {
            Tape tape;
            const TensorRef zt = tape.leaf(1, d, z);
            const TensorRef frame = build_iframe_graph(tape, zt, gw);
            const TensorRef loss_node = tape.mse_against(frame, target.data);
            const double loss = loss_node.value()[0];
            result.report.loss_trace.push_back(loss);
            if (loss < best_loss) {
                best_loss = loss;
                best_z = z;
            }
            if (it == 0) initial_loss = loss;
            if (it > 0 && loss > 10.0 * initial_loss) {
                diverged = true;
                break;
            }
            tape.backward(loss_node);
            adam.apply(z, zt.grad());
        }
        if (!diverged) {
            result.latent.z = std::move(best_z);
            result.report.best_loss = best_loss;
            return result;
        }
        ++result.report.restarts;
        step *= 0.5;
    }
    throw OptimizationError("invert: diverged twice, aborting");
}

} // namespace hybp
