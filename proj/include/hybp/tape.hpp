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

#include <memory>
#include <vector>

namespace hybp {

class Tape;

// Handle to one recorded tensor. Values live on the tape; gradients are
// valid after Tape::backward.
struct TensorRef {
    Tape* tape = nullptr;
    int node = -1;
    int h = 0;
    int w = 0;

    const std::vector<double>& value() const;
    const std::vector<double>& grad() const;
};

class TapeNode {
public:
    virtual ~TapeNode() = default;

    std::vector<int> inputs;
    std::vector<double> value;
    std::vector<double> adjoint; // sized lazily during backward
    int h = 0;
    int w = 0;

    // Scatter this node's adjoint into its inputs' adjoints.
    virtual void backward(Tape& tape) = 0;
};

// Reverse-mode tape over image-level operations. Single-threaded by design;
// run one tape per GOP for parallelism. Side information (motion, masks,
// residuals) enters as frozen constants, never as differentiable inputs.
class Tape {
public:
    TensorRef leaf(int h, int w, std::vector<double> values);

    // Forward semantics identical to the integer decode chain primitives.
    TensorRef warp(TensorRef x, const MotionField& mvs);
    TensorRef add_constant(TensorRef x, std::vector<double> constant);
    TensorRef average(TensorRef a, TensorRef b);
    TensorRef clip(TensorRef x, double lo, double hi);
    TensorRef deblock(TensorRef x, const BoundaryMask& mask);

    // Align-corners bilinear resize (used as the 2x upsampler).
    TensorRef upsample_bilinear(TensorRef x, int out_h, int out_w);
    TensorRef pad_replicate(TensorRef x, int out_h, int out_w);
    TensorRef crop(TensorRef x, int out_h, int out_w);

    // Scalar-producing nodes.
    TensorRef mse_against(TensorRef x, std::vector<double> target);
    TensorRef weighted_sum(const std::vector<TensorRef>& xs, const std::vector<double>& weights);

    // Seeds root with 1 and sweeps the tape once in reverse creation order.
    void backward(TensorRef root);

    template <typename NodeT, typename... Args>
    TensorRef emplace(Args&&... args) {
        nodes_.push_back(std::make_unique<NodeT>(std::forward<Args>(args)...));
        TapeNode& n = *nodes_.back();
        return TensorRef{this, static_cast<int>(nodes_.size()) - 1, n.h, n.w};
    }

    TapeNode& node(int id) { return *nodes_[id]; }
    const TapeNode& node(int id) const { return *nodes_[id]; }
    std::vector<double>& adjoint_of(int id);
    size_t size() const { return nodes_.size(); }

private:
    std::vector<std::unique_ptr<TapeNode>> nodes_;
};

} // namespace hybp
