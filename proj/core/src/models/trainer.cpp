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

#include "woodpest/models/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "woodpest/error.hpp"
#include "woodpest/nn/ops.hpp"

namespace woodpest::models {

using audio::ClipLabel;
using nn::Tensor;

namespace {

constexpr std::size_t kInferenceChunk = 64;

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ClipLabel argmax_label(const Tensor& probs, std::size_t row) {
  return probs.at(row, 1) > probs.at(row, 0) ? ClipLabel::Infested : ClipLabel::Clean;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs == 0) throw InvalidArgument("epochs must be at least 1");
  if (batch_size == 0) throw InvalidArgument("batch size must be at least 1");
}

std::string TrainHistory::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    const auto& s = epochs[e];
    rows.push_back({{"epoch", e + 1},
                    {"train_loss", finite_or_null(s.train_loss)},
                    {"train_accuracy", finite_or_null(s.train_accuracy)},
                    {"val_loss", finite_or_null(s.val_loss)},
                    {"val_accuracy", finite_or_null(s.val_accuracy)}});
  }
  return nlohmann::json{{"epochs", std::move(rows)}}.dump(2);
}

Tensor stack_batch(std::span<const Tensor> inputs, std::span<const std::size_t> rows) {
  if (rows.empty()) throw InvalidArgument("cannot stack an empty batch");
  const nn::Shape& sample_shape = inputs[rows.front()].shape();
  nn::Shape shape{rows.size()};
  shape.insert(shape.end(), sample_shape.begin(), sample_shape.end());
  Tensor batch(shape);
  const std::size_t stride = nn::shape_size(sample_shape);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Tensor& x = inputs[rows[i]];
    if (x.shape() != sample_shape) {
      throw ShapeError("batch mixes sample shapes " + nn::shape_to_string(sample_shape) +
                       " and " + nn::shape_to_string(x.shape()));
    }
    std::copy(x.values().begin(), x.values().end(), batch.data() + i * stride);
  }
  return batch;
}

Tensor one_hot(std::span<const ClipLabel> labels, std::span<const std::size_t> rows) {
  Tensor t({rows.size(), 2});
  for (std::size_t i = 0; i < rows.size(); ++i) t.at(i, static_cast<std::size_t>(labels[rows[i]])) = 1.0;
  return t;
}

Predictions predict(const nn::Sequential& graph, std::span<const Tensor> inputs) {
  Predictions out{Tensor({inputs.size(), 2}), {}};
  out.labels.reserve(inputs.size());
  std::vector<std::size_t> rows;
  for (std::size_t begin = 0; begin < inputs.size(); begin += kInferenceChunk) {
    const std::size_t end = std::min(inputs.size(), begin + kInferenceChunk);
    rows.resize(end - begin);
    std::iota(rows.begin(), rows.end(), begin);
    const Tensor probs = graph.forward(stack_batch(inputs, rows), nn::Mode::Infer);
    if (probs.rank() != 2 || probs.dim(1) != 2) {
      throw ShapeError("model output must be [batch, 2], got " +
                       nn::shape_to_string(probs.shape()));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.probs.at(begin + i, 0) = probs.at(i, 0);
      out.probs.at(begin + i, 1) = probs.at(i, 1);
      out.labels.push_back(argmax_label(probs, i));
    }
  }
  return out;
}

SetMetrics evaluate_set(const nn::Sequential& graph, const LabeledInputs& set) {
  if (set.size() == 0) {
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  double loss_sum = 0.0;
  std::size_t correct = 0;
  std::vector<std::size_t> rows;
  nn::ForwardContext ctx{nn::Mode::Infer, nullptr};
  for (std::size_t begin = 0; begin < set.size(); begin += kInferenceChunk) {
    const std::size_t end = std::min(set.size(), begin + kInferenceChunk);
    rows.resize(end - begin);
    std::iota(rows.begin(), rows.end(), begin);
    const Tensor z = graph.logits(stack_batch(set.inputs, rows), ctx);
    const auto ce = nn::softmax_cross_entropy(z, one_hot(set.labels, rows));
    loss_sum += ce.loss * static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (argmax_label(ce.probs, i) == set.labels[rows[i]]) ++correct;
    }
  }
  const auto n = static_cast<double>(set.size());
  return {loss_sum / n, static_cast<double>(correct) / n};
}

TrainHistory train(nn::Sequential& graph, const LabeledInputs& train_set,
                   const LabeledInputs* val_set, const TrainConfig& cfg,
                   const EpochCallback& on_epoch) {
  cfg.validate();
  if (train_set.size() == 0) throw InvalidArgument("training set is empty");
  if (train_set.labels.size() != train_set.size()) {
    throw InvalidArgument("training inputs and labels differ in count");
  }

  Rng rng(cfg.seed);
  auto params = graph.parameters();
  auto adam = nn::make_adam_state(std::vector<const Tensor*>(params.begin(), params.end()),
                                  cfg.adam);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainHistory history;
  history.epochs.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      const std::span<const std::size_t> rows(order.data() + begin, end - begin);
      const std::string where =
          "epoch " + std::to_string(epoch + 1) + ", batch " + std::to_string(batch_index + 1);

      nn::ForwardContext ctx{nn::Mode::Train, &rng};
      nn::Tape tape;
      const Tensor z = graph.logits(stack_batch(train_set.inputs, rows), ctx, &tape);
      const auto ce = nn::softmax_cross_entropy(z, one_hot(train_set.labels, rows));
      if (!std::isfinite(ce.loss)) throw TrainingError("non-finite loss at " + where);
      const auto grads = graph.backward(tape, ce.dlogits);
      try {
        nn::adam_update(params, grads, adam);
      } catch (const TrainingError& e) {
        throw TrainingError(std::string(e.what()) + " at " + where);
      }
    }

    EpochStats stats;
    const auto tr = evaluate_set(graph, train_set);
    stats.train_loss = tr.loss;
    stats.train_accuracy = tr.accuracy;
    if (val_set != nullptr && val_set->size() > 0) {
      const auto va = evaluate_set(graph, *val_set);
      stats.val_loss = va.loss;
      stats.val_accuracy = va.accuracy;
    } else {
      stats.val_loss = std::numeric_limits<double>::quiet_NaN();
      stats.val_accuracy = std::numeric_limits<double>::quiet_NaN();
    }
    history.epochs.push_back(stats);
    if (on_epoch) on_epoch(epoch + 1, stats);
  }
  return history;
}

}  // namespace woodpest::models
