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

#include "woodpest/eval/crossval.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "woodpest/error.hpp"
#include "woodpest/models/inputs.hpp"
#include "woodpest/random.hpp"

namespace woodpest::eval {

using nlohmann::json;
using models::ModelKind;

namespace {

json metrics_json(const MetricReport& m, const ConfusionMatrix& c) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"confusion", {{"tp", c.tp}, {"fn", c.fn}, {"fp", c.fp}, {"tn", c.tn}}}};
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

std::size_t kind_index(ModelKind kind) {
  for (std::size_t i = 0; i < models::kAllModelKinds.size(); ++i) {
    if (models::kAllModelKinds[i] == kind) return i;
  }
  return 0;
}

}  // namespace

std::string metrics_to_json(const MetricReport& m, const ConfusionMatrix& c) {
  return metrics_json(m, c).dump(2);
}

ModelOutcome train_and_evaluate(ModelKind kind, const features::FeatureDataset& dataset,
                                const Split& split, std::uint64_t init_seed,
                                const models::TrainConfig& cfg, const models::ModelDims& dims,
                                const models::EpochCallback& on_epoch) {
  if (split.train.empty()) throw InvalidDatasetError("split has no training rows");
  const auto stats = models::fit_input_stats(kind, dataset, split.train);
  const auto train_set = models::prepare_inputs(kind, dataset, split.train, stats);
  const auto test_set = models::prepare_inputs(kind, dataset, split.test, stats);

  auto graph = models::build_model(kind, init_seed, dims);
  ModelOutcome out;
  out.kind = kind;
  out.history = models::train(graph, train_set, &test_set, cfg, on_epoch);
  if (test_set.size() > 0) {
    const auto pred = models::predict(graph, test_set.inputs);
    out.confusion = confusion_from_predictions(test_set.labels, pred.labels);
    out.metrics = metrics_from_confusion(out.confusion);
  }
  out.checkpoint = nn::make_checkpoint(graph, std::string(models::to_string(kind)), init_seed,
                                       stats.mean, stats.std);
  return out;
}

AccuracySummary summarize(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("cannot summarize an empty set");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

CvReport crossval_run(ModelKind kind, const features::FeatureDataset& dataset, std::size_t k,
                      std::uint64_t seed, const models::TrainConfig& cfg,
                      const models::ModelDims& dims,
                      const std::function<void(const FoldResult&)>& on_fold) {
  const auto folds = kfold_indices(dataset.labels, k, seed);
  CvReport report;
  report.kind = kind;
  report.seed = seed;
  std::vector<double> accuracies;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    models::TrainConfig fold_cfg = cfg;
    fold_cfg.seed = derive_seed(seed, 200 + f);
    ModelOutcome outcome;
    try {
      outcome = train_and_evaluate(kind, dataset, folds[f], derive_seed(seed, 100 + f), fold_cfg,
                                   dims);
    } catch (const TrainingError& e) {
      throw TrainingError("fold " + std::to_string(f + 1) + ": " + e.what());
    }
    FoldResult r{f + 1, folds[f].train.size(), folds[f].test.size(), outcome.confusion,
                 outcome.metrics};
    accuracies.push_back(r.metrics.accuracy);
    if (on_fold) on_fold(r);
    report.folds.push_back(r);
  }
  const auto summary = summarize(accuracies);
  report.mean_accuracy = summary.mean;
  report.std_accuracy = summary.std;
  return report;
}

std::string CvReport::to_json() const {
  json fold_rows = json::array();
  for (const auto& f : folds) {
    json row = metrics_json(f.metrics, f.confusion);
    row["fold"] = f.fold;
    row["train_size"] = f.train_size;
    row["test_size"] = f.test_size;
    fold_rows.push_back(std::move(row));
  }
  return json{{"kind", models::to_string(kind)},
              {"k", folds.size()},
              {"seed", seed},
              {"folds", std::move(fold_rows)},
              {"mean_accuracy", mean_accuracy},
              {"std_accuracy", std_accuracy}}
      .dump(2);
}

std::string CvReport::to_text() const {
  std::string out = std::string(models::display_name(kind)) + " " + std::to_string(folds.size()) +
                    "-fold cross-validation\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-6s %9s %9s %9s %9s\n", "Fold", "Accuracy", "Precision",
                "Recall", "F1");
  out += line;
  for (const auto& f : folds) {
    std::snprintf(line, sizeof line, "%-6zu %9s %9s %9s %9s\n", f.fold,
                  percent(f.metrics.accuracy).c_str(), percent(f.metrics.precision).c_str(),
                  percent(f.metrics.recall).c_str(), percent(f.metrics.f1).c_str());
    out += line;
  }
  std::snprintf(line, sizeof line, "Mean accuracy %s, std %.4f\n", percent(mean_accuracy).c_str(),
                std_accuracy);
  out += line;
  return out;
}

ComparativeReport comparative_report(const features::FeatureDataset& dataset, std::uint64_t seed,
                                     const models::TrainConfig& cfg, double test_ratio,
                                     const models::ModelDims& dims,
                                     std::span<const ModelKind> kinds,
                                     const std::function<void(const ModelOutcome&)>& on_model) {
  const Split split = stratified_split(dataset.labels, test_ratio, seed);
  ComparativeReport report;
  report.seed = seed;
  report.train_size = split.train.size();
  report.test_size = split.test.size();
  for (ModelKind kind : kinds) {
    const std::size_t i = kind_index(kind);
    models::TrainConfig kind_cfg = cfg;
    kind_cfg.seed = derive_seed(seed, 20 + i);
    report.rows.push_back(
        train_and_evaluate(kind, dataset, split, derive_seed(seed, 10 + i), kind_cfg, dims));
    if (on_model) on_model(report.rows.back());
  }
  return report;
}

std::string ComparativeReport::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    json row = metrics_json(r.metrics, r.confusion);
    row["kind"] = models::to_string(r.kind);
    row["model"] = models::display_name(r.kind);
    if (!r.history.epochs.empty()) {
      row["final_train_loss"] = r.history.epochs.back().train_loss;
      row["final_train_accuracy"] = r.history.epochs.back().train_accuracy;
    }
    rows_json.push_back(std::move(row));
  }
  return json{{"seed", seed},
              {"train_size", train_size},
              {"test_size", test_size},
              {"models", std::move(rows_json)}}
      .dump(2);
}

std::string ComparativeReport::to_text() const {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-18s %10s %10s\n", "Model", "Accuracy", "F1 Score");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-18s %10s %10s\n",
                  std::string(models::display_name(r.kind)).c_str(),
                  percent(r.metrics.accuracy).c_str(), percent(r.metrics.f1).c_str());
    out += line;
  }
  return out;
}

}  // namespace woodpest::eval
