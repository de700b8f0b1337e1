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

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_support.hpp"
#include "woodpest/error.hpp"
#include "woodpest/eval/crossval.hpp"
#include "woodpest/eval/metrics.hpp"
#include "woodpest/eval/splits.hpp"

namespace woodpest::eval {
namespace {

using audio::ClipLabel;
constexpr auto C = ClipLabel::Clean;
constexpr auto I = ClipLabel::Infested;

std::vector<ClipLabel> labels_of(std::size_t clean, std::size_t infested) {
  std::vector<ClipLabel> out(clean, C);
  out.insert(out.end(), infested, I);
  return out;
}

std::size_t count_label(std::span<const ClipLabel> labels, std::span<const std::size_t> rows,
                        ClipLabel which) {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](std::size_t r) { return labels[r] == which; }));
}

void expect_partition(const Split& s, std::size_t n) {
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  EXPECT_TRUE(std::is_sorted(s.test.begin(), s.test.end()));
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(n);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(all, expected);
}

TEST(StratifiedSplit, BalancedEightyTwenty) {
  const auto labels = labels_of(50, 50);
  const auto s = stratified_split(labels, 0.2, 7);
  expect_partition(s, 100);
  EXPECT_EQ(s.train.size(), 80u);
  EXPECT_EQ(s.test.size(), 20u);
  EXPECT_EQ(count_label(labels, s.test, C), 10u);
  EXPECT_EQ(count_label(labels, s.test, I), 10u);
  const auto again = stratified_split(labels, 0.2, 7);
  EXPECT_EQ(again.test, s.test);
  EXPECT_NE(stratified_split(labels, 0.2, 8).test, s.test);
}

TEST(StratifiedSplit, RoundsHalfUpWithMinimumOne) {
  const auto labels = labels_of(7, 13);
  const auto s = stratified_split(labels, 0.2, 1);
  expect_partition(s, 20);
  EXPECT_EQ(count_label(labels, s.test, C), 1u);
  EXPECT_EQ(count_label(labels, s.test, I), 3u);
  // 2.5 rounds up to 3; a tiny class still contributes one test row
  const auto half = labels_of(10, 1);
  const auto h = stratified_split(half, 0.25, 1);
  EXPECT_EQ(count_label(half, h.test, C), 3u);
  EXPECT_EQ(count_label(half, h.test, I), 1u);
  EXPECT_THROW(stratified_split(labels_of(5, 0), 0.2, 1), InvalidDatasetError);
}

TEST(KFold, PartitionsIntoEqualFolds) {
  const auto labels = labels_of(50, 50);
  const auto folds = kfold_indices(labels, 5, 3);
  ASSERT_EQ(folds.size(), 5u);
  std::vector<std::size_t> seen;
  for (const auto& f : folds) {
    EXPECT_EQ(f.test.size(), 20u);
    expect_partition(f, 100);
    seen.insert(seen.end(), f.test.begin(), f.test.end());
  }
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
  EXPECT_EQ(seen.size(), 100u);
}

TEST(KFold, StratificationWithinOne) {
  const auto labels = labels_of(48, 52);
  const auto folds = kfold_indices(labels, 5, 11);
  // 52 = 5 chunks of 10 or 11, 48 = 5 chunks of 9 or 10
  std::size_t infested_total = 0;
  for (const auto& f : folds) {
    const auto inf = count_label(labels, f.test, I);
    const auto cln = count_label(labels, f.test, C);
    EXPECT_TRUE(inf == 10 || inf == 11) << inf;
    EXPECT_TRUE(cln == 9 || cln == 10) << cln;
    infested_total += inf;
  }
  EXPECT_EQ(infested_total, 52u);
}

TEST(KFold, Preconditions) {
  EXPECT_THROW(kfold_indices(labels_of(10, 10), 1, 0), InvalidArgument);
  EXPECT_THROW(kfold_indices(labels_of(3, 10), 5, 0), InvalidDatasetError);
}

TEST(Confusion, EnumerationAndPerfectCases) {
  const std::vector<ClipLabel> truth{I, I, C, C};
  const std::vector<ClipLabel> pred{I, C, C, I};
  EXPECT_EQ(confusion_from_predictions(truth, pred), (ConfusionMatrix{1, 1, 1, 1}));
  const auto perfect = confusion_from_predictions(truth, truth);
  EXPECT_EQ(perfect.fn, 0u);
  EXPECT_EQ(perfect.fp, 0u);
  const auto m = metrics_from_confusion(perfect);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_THROW(confusion_from_predictions(truth, std::vector<ClipLabel>{I}), InvalidArgument);
  EXPECT_THROW(confusion_from_predictions(std::vector<ClipLabel>{}, std::vector<ClipLabel>{}), InvalidArgument);
}

TEST(Confusion, MatchesCountingLoop) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  std::vector<ClipLabel> truth, pred;
  for (int i = 0; i < 100; ++i) {
    truth.push_back(coin(rng) ? I : C);
    pred.push_back(coin(rng) ? I : C);
  }
  std::size_t tp = 0, fn = 0, fp = 0, tn = 0, correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == I && pred[i] == I) ++tp;
    if (truth[i] == I && pred[i] == C) ++fn;
    if (truth[i] == C && pred[i] == I) ++fp;
    if (truth[i] == C && pred[i] == C) ++tn;
    if (truth[i] == pred[i]) ++correct;
  }
  const auto m = confusion_from_predictions(truth, pred);
  EXPECT_EQ(m, (ConfusionMatrix{tp, fn, fp, tn}));
  EXPECT_EQ(metrics_from_confusion(m).accuracy, static_cast<double>(correct) / 100.0);
}

TEST(Metrics, ReportedConfusionCounts) {
  const auto m = metrics_from_confusion(ConfusionMatrix{48, 2, 3, 47});
  EXPECT_DOUBLE_EQ(m.accuracy, 0.95);
  EXPECT_DOUBLE_EQ(m.precision, 48.0 / 51.0);
  EXPECT_DOUBLE_EQ(m.recall, 0.96);
  const double p = 48.0 / 51.0;
  EXPECT_DOUBLE_EQ(m.f1, 2 * p * 0.96 / (p + 0.96));
  EXPECT_NEAR(m.f1, 0.9505, 5e-5);
  EXPECT_EQ(ConfusionMatrix({48, 2, 3, 47}).to_csv(),
            "true\\predicted,clean,infested\nclean,47,3\ninfested,2,48\n");
}

TEST(Metrics, DegenerateDenominatorsAreZero) {
  const auto m = metrics_from_confusion(ConfusionMatrix{0, 0, 0, 5});
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_THROW(metrics_from_confusion(ConfusionMatrix{}), InvalidArgument);
}

TEST(Summary, PopulationStandardDeviation) {
  const std::vector<double> acc{0.9, 1.0, 0.9, 1.0, 1.0};
  const auto s = summarize(acc);
  EXPECT_NEAR(s.mean, 0.96, 1e-12);
  EXPECT_NEAR(s.std, std::sqrt(0.0024), 1e-12);
  EXPECT_NEAR(s.std, 0.04899, 1e-5);
  const std::vector<double> ones(5, 1.0);
  EXPECT_EQ(summarize(ones).std, 0.0);
}

features::FeatureDataset separable_dataset(std::size_t n_per_class, std::size_t frames) {
  features::FeatureDataset ds;
  for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
    const auto label = i < n_per_class ? C : I;
    auto values = testsupport::uniform_values(frames * 40, 100 + i, -0.3, 0.3);
    for (auto& v : values) v += label == I ? 1.0 : -1.0;
    ds.add("r" + std::to_string(i), label, features::MfccMatrix(frames, 40, std::move(values)));
  }
  return ds;
}

TEST(CrossVal, SeparableDataGivesZeroVariance) {
  const auto ds = separable_dataset(10, 8);
  models::TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 8;
  std::size_t calls = 0;
  const auto report = crossval_run(models::ModelKind::DnnMean, ds, 5, 42, cfg,
                                   models::ModelDims::toy(8),
                                   [&](const FoldResult&) { ++calls; });
  EXPECT_EQ(calls, 5u);
  ASSERT_EQ(report.folds.size(), 5u);
  for (const auto& f : report.folds) {
    EXPECT_EQ(f.test_size, 4u);
    EXPECT_EQ(f.train_size, 16u);
    EXPECT_EQ(f.metrics.accuracy, 1.0);
  }
  EXPECT_EQ(report.mean_accuracy, 1.0);
  EXPECT_EQ(report.std_accuracy, 0.0);
  const auto json = nlohmann::json::parse(report.to_json());
  EXPECT_EQ(json.at("folds").size(), 5u);
  EXPECT_NE(report.to_text().find("Mean accuracy"), std::string::npos);

  const auto again = crossval_run(models::ModelKind::DnnMean, ds, 5, 42, cfg,
                                  models::ModelDims::toy(8));
  EXPECT_EQ(again.to_json(), report.to_json());
}

TEST(Comparative, FourRowsWithAccuracyAndF1) {
  const auto ds = separable_dataset(10, 8);
  models::TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  const auto report = comparative_report(ds, 3, cfg, 0.2, models::ModelDims::toy(8));
  ASSERT_EQ(report.rows.size(), 4u);
  EXPECT_EQ(report.train_size, 16u);
  EXPECT_EQ(report.test_size, 4u);
  const auto json = nlohmann::json::parse(report.to_json());
  ASSERT_EQ(json.at("models").size(), 4u);
  for (const auto& row : json.at("models")) {
    EXPECT_TRUE(row.contains("accuracy"));
    EXPECT_TRUE(row.contains("f1"));
  }
  const auto text = report.to_text();
  EXPECT_NE(text.find("F1 Score"), std::string::npos);
  EXPECT_NE(text.find("CNN-LSTM"), std::string::npos);
  EXPECT_EQ(comparative_report(ds, 3, cfg, 0.2, models::ModelDims::toy(8)).to_json(),
            report.to_json());
}

}  // namespace
}  // namespace woodpest::eval
