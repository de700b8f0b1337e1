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

#include "woodpest/eval/metrics.hpp"
#include "woodpest/eval/splits.hpp"
#include "woodpest/features/feature_dump.hpp"
#include "woodpest/models/model_zoo.hpp"
#include "woodpest/models/trainer.hpp"
#include "woodpest/nn/checkpoint.hpp"

namespace woodpest::eval {

/// One model trained on a split's train rows and scored on its test rows.
/// The test rows double as the per-epoch validation set.
struct ModelOutcome {
  models::ModelKind kind = models::ModelKind::CnnLstm;
  ConfusionMatrix confusion;
  MetricReport metrics;
  models::TrainHistory history;
  nn::Checkpoint checkpoint;
};

/// Fits input standardization on the train rows, initializes from
/// init_seed, trains with cfg and evaluates on the test rows.
ModelOutcome train_and_evaluate(models::ModelKind kind, const features::FeatureDataset& dataset,
                                const Split& split, std::uint64_t init_seed,
                                const models::TrainConfig& cfg,
                                const models::ModelDims& dims = {},
                                const models::EpochCallback& on_epoch = {});

/// Mean and population (divisor n) standard deviation.
struct AccuracySummary {
  double mean = 0.0;
  double std = 0.0;
};
AccuracySummary summarize(std::span<const double> values);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  ConfusionMatrix confusion;
  MetricReport metrics;
};

struct CvReport {
  models::ModelKind kind = models::ModelKind::CnnLstm;
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;

  std::string to_json() const;
  std::string to_text() const;
};

/// k-fold cross-validation with an independent model per fold. Fold f uses
/// init seed derive_seed(seed, 100 + f) and training seed
/// derive_seed(seed, 200 + f); cfg.seed is not used. Training errors are
/// rethrown with the fold index attached.
CvReport crossval_run(models::ModelKind kind, const features::FeatureDataset& dataset,
                      std::size_t k, std::uint64_t seed, const models::TrainConfig& cfg,
                      const models::ModelDims& dims = {},
                      const std::function<void(const FoldResult&)>& on_fold = {});

struct ComparativeReport {
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<ModelOutcome> rows;

  /// Machine-readable table; deterministic for a fixed seed.
  std::string to_json() const;
  /// Aligned "Model | Accuracy | F1 Score" table.
  std::string to_text() const;
};

/// Trains every requested kind on one shared stratified split (seeded by
/// `seed`). Kind i uses init seed derive_seed(seed, 10 + i) and training
/// seed derive_seed(seed, 20 + i), with i its position in kAllModelKinds.
ComparativeReport comparative_report(
    const features::FeatureDataset& dataset, std::uint64_t seed, const models::TrainConfig& cfg,
    double test_ratio = 0.2, const models::ModelDims& dims = {},
    std::span<const models::ModelKind> kinds = models::kAllModelKinds,
    const std::function<void(const ModelOutcome&)>& on_model = {});

std::string metrics_to_json(const MetricReport& m, const ConfusionMatrix& c);

}  // namespace woodpest::eval
