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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "woodpest/audio/clip.hpp"
#include "woodpest/models/inputs.hpp"
#include "woodpest/nn/adam.hpp"
#include "woodpest/nn/sequential.hpp"

namespace woodpest::models {

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  bool shuffle = true;
  nn::AdamConfig adam;

  /// Throws InvalidArgument on zero epochs or batch size.
  void validate() const;
};

/// Per-epoch figures. Training figures are measured in inference mode over
/// the whole training set after the epoch's updates; validation figures are
/// NaN when no validation set is given.
struct EpochStats {
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;

  std::string to_json() const;
};

using EpochCallback = std::function<void(std::size_t epoch, const EpochStats&)>;

/// Mini-batch Adam on softmax cross-entropy. Deterministic for a fixed
/// config seed: one generator drives the per-epoch shuffle and dropout
/// masks. Throws TrainingError (with epoch and batch) if the loss or a
/// gradient becomes non-finite.
TrainHistory train(nn::Sequential& graph, const LabeledInputs& train_set,
                   const LabeledInputs* val_set, const TrainConfig& cfg,
                   const EpochCallback& on_epoch = {});

struct Predictions {
  nn::Tensor probs;  // [N, 2]
  std::vector<audio::ClipLabel> labels;

  double p_infested(std::size_t i) const { return probs.at(i, 1); }
};

/// Inference-mode class probabilities and argmax labels; exact ties go to
/// Clean.
Predictions predict(const nn::Sequential& graph, std::span<const nn::Tensor> inputs);

/// Mean cross-entropy and accuracy over a labeled set (inference mode).
struct SetMetrics {
  double loss = 0.0;
  double accuracy = 0.0;
};
SetMetrics evaluate_set(const nn::Sequential& graph, const LabeledInputs& set);

/// Stacks per-sample tensors into a batch [n, ...]. Throws ShapeError when
/// sample shapes differ.
nn::Tensor stack_batch(std::span<const nn::Tensor> inputs, std::span<const std::size_t> rows);
nn::Tensor one_hot(std::span<const audio::ClipLabel> labels, std::span<const std::size_t> rows);

}  // namespace woodpest::models
