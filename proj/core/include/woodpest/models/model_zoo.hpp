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

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "woodpest/nn/sequential.hpp"

namespace woodpest::models {

enum class ModelKind { DnnMean, CnnOnly, LstmOnly, CnnLstm };

inline constexpr std::array<ModelKind, 4> kAllModelKinds = {
    ModelKind::DnnMean, ModelKind::CnnOnly, ModelKind::LstmOnly, ModelKind::CnnLstm};

/// Stable identifier used on the command line and in checkpoints
/// ("dnn_mean", "cnn", "lstm", "cnn_lstm").
std::string_view to_string(ModelKind kind);
/// Human-readable row label for reports ("CNN only", ...).
std::string_view display_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

/// True for the kinds that consume T x 40 frame matrices rather than the
/// time-averaged vector.
bool uses_sequence(ModelKind kind);

/// Layer widths. The defaults are the full-size architectures; toy() shrinks
/// every width for gradient checking.
struct ModelDims {
  std::size_t n_features = 40;
  std::size_t frames = 157;
  std::size_t n_classes = 2;
  std::vector<std::size_t> dense_units = {256, 128, 64};
  std::size_t conv1_filters = 32;
  std::size_t conv1_kernel = 5;
  std::size_t conv2_filters = 64;
  std::size_t conv2_kernel = 3;
  std::size_t pool = 2;
  std::size_t lstm_hidden = 64;
  std::size_t head_units = 64;
  double dropout = 0.3;

  static ModelDims toy(std::size_t frames = 8);
};

std::vector<nn::LayerSpec> layer_specs(ModelKind kind, const ModelDims& dims = {});
nn::Shape input_shape(ModelKind kind, const ModelDims& dims = {});

/// Graph with zero parameters; call initialize(seed) before training.
nn::Sequential build_model(ModelKind kind, const ModelDims& dims = {});
/// Graph initialized from `seed`.
nn::Sequential build_model(ModelKind kind, std::uint64_t seed, const ModelDims& dims = {});

/// Closed-form trainable parameter count: sum over the layer specs.
std::size_t expected_parameter_count(ModelKind kind, const ModelDims& dims = {});

}  // namespace woodpest::models
