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

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "woodpest/nn/ops.hpp"
#include "woodpest/nn/tensor.hpp"
#include "woodpest/random.hpp"

namespace woodpest::nn {

enum class LayerKind { Dense, Conv1D, MaxPool1D, ReLU, Dropout, LSTM, GlobalAvgPool1D, Softmax };

std::string_view to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view name);

/// Architecture-level description of one layer. Only the fields relevant to
/// `kind` are meaningful; the rest stay zero.
struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;
  std::size_t units = 0;    // Dense
  std::size_t filters = 0;  // Conv1D
  std::size_t kernel = 0;   // Conv1D, odd
  std::size_t pool = 0;     // MaxPool1D
  std::size_t hidden = 0;   // LSTM
  double rate = 0.0;        // Dropout, [0, 1)

  static LayerSpec dense(std::size_t units) { return {LayerKind::Dense, units}; }
  static LayerSpec conv1d(std::size_t filters, std::size_t kernel) {
    return {LayerKind::Conv1D, 0, filters, kernel};
  }
  static LayerSpec maxpool1d(std::size_t width) { return {LayerKind::MaxPool1D, 0, 0, 0, width}; }
  static LayerSpec relu() { return {LayerKind::ReLU}; }
  static LayerSpec dropout(double rate) { return {LayerKind::Dropout, 0, 0, 0, 0, 0, rate}; }
  static LayerSpec lstm(std::size_t hidden) { return {LayerKind::LSTM, 0, 0, 0, 0, hidden}; }
  static LayerSpec global_avg_pool() { return {LayerKind::GlobalAvgPool1D}; }
  static LayerSpec softmax() { return {LayerKind::Softmax}; }

  /// Throws InvalidArgument when a size is zero or the rate is out of range.
  void validate() const;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct ForwardContext {
  Mode mode = Mode::Infer;
  Rng* rng = nullptr;  // required for Dropout in Train mode
};

/// Saved activations needed by a layer's backward pass.
struct LayerCache {
  virtual ~LayerCache() = default;
};

/// A layer owns its parameters. forward() is const: in Infer mode with no
/// cache requested it touches no shared state, so one layer may serve many
/// threads.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual LayerSpec spec() const = 0;
  /// Per-sample output shape (no batch axis) for a per-sample input shape.
  virtual Shape output_shape(const Shape& input) const = 0;

  virtual std::vector<Tensor*> parameters() { return {}; }
  virtual std::vector<const Tensor*> parameters() const { return {}; }
  virtual void initialize(Rng& /*rng*/) {}

  virtual Tensor forward(const Tensor& x, ForwardContext& ctx,
                         std::unique_ptr<LayerCache>* cache) const = 0;
  /// Writes parameter gradients into `grads` (aligned with parameters())
  /// and returns the gradient w.r.t. the layer input.
  virtual Tensor backward(const Tensor& dy, const LayerCache& cache,
                          std::span<Tensor> grads) const = 0;

  virtual std::unique_ptr<Layer> clone() const = 0;
};

/// Builds a layer for per-sample input shape `input` (e.g. {40} or {T, 40}).
/// Parameters are zero until initialize() is called.
std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const Shape& input);

/// Trainable parameter count implied by a spec at a given input shape.
std::size_t layer_parameter_count(const LayerSpec& spec, const Shape& input);

}  // namespace woodpest::nn
