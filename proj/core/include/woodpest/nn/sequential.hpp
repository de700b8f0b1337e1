// Copyright 2026 The Woodpest Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "woodpest/nn/layers.hpp"

namespace woodpest::nn {

/// Activations recorded by a training forward pass.
struct Tape {
  std::vector<std::unique_ptr<LayerCache>> caches;
};

/// A fixed chain of layers (the model graph) together with its parameters.
/// The per-sample input shape fixes parameter shapes; for sequence inputs
/// the time extent may differ at run time.
class Sequential {
 public:
  Sequential(Shape input_shape, std::vector<LayerSpec> specs);
  Sequential(const Sequential& other);
  Sequential& operator=(const Sequential& other);
  Sequential(Sequential&&) noexcept = default;
  Sequential& operator=(Sequential&&) noexcept = default;
  ~Sequential() = default;

  const Shape& input_shape() const { return input_shape_; }
  const std::vector<LayerSpec>& specs() const { return specs_; }
  std::size_t layer_count() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }
  /// Per-sample output shape.
  Shape output_shape() const;

  /// Draws weights from one generator in layer order; biases start at zero
  /// (LSTM forget-gate bias 1).
  void initialize(std::uint64_t seed);

  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;
  std::size_t parameter_count() const;
  std::vector<double> flat_parameters() const;
  /// Throws ShapeError when the count differs from parameter_count().
  void set_flat_parameters(std::span<const double> values);

  /// Pre-softmax scores [B, classes]. Records activations into `tape` when
  /// non-null. A trailing Softmax layer is skipped.
  Tensor logits(const Tensor& x, ForwardContext& ctx, Tape* tape = nullptr) const;
  /// Full forward pass including the trailing Softmax (if any).
  Tensor forward(const Tensor& x, Mode mode = Mode::Infer, Rng* rng = nullptr) const;

  /// Backward from dL/dlogits through the taped layers. Returns gradients
  /// aligned with parameters().
  std::vector<Tensor> backward(const Tape& tape, const Tensor& dlogits) const;

 private:
  void check_input(const Tensor& x) const;
  std::size_t logit_layer_count() const;

  Shape input_shape_;
  std::vector<LayerSpec> specs_;
  std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace woodpest::nn
