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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <vector>

#include "cli_common.hpp"
#include "woodpest/eval/crossval.hpp"
#include "woodpest/eval/metrics.hpp"
#include "woodpest/features/feature_dump.hpp"
#include "woodpest/models/classifier.hpp"
#include "woodpest/models/inputs.hpp"
#include "woodpest/nn/checkpoint.hpp"
#include "woodpest/random.hpp"

namespace woodpest::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using models::ModelKind;

namespace {

ModelKind parse_kind_flag(const std::string& text) {
  try {
    return models::parse_model_kind(text);
  } catch (const InvalidArgument&) {
    throw UsageError("unknown model kind '" + text + "' (dnn_mean, cnn, lstm, cnn_lstm)");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

struct LabelPairs {
  std::vector<audio::ClipLabel> truth;
  std::vector<audio::ClipLabel> predicted;
};

// CSV with a header naming "truth" and "predicted" columns.
LabelPairs read_predictions_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty predictions file");
  const auto header = split_csv_line(line);
  std::ptrdiff_t truth_col = -1;
  std::ptrdiff_t pred_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "truth") truth_col = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "predicted") pred_col = static_cast<std::ptrdiff_t>(i);
  }
  if (truth_col < 0 || pred_col < 0) {
    throw FormatError(path + ": header must name 'truth' and 'predicted' columns");
  }
  LabelPairs pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const auto need = static_cast<std::size_t>(std::max(truth_col, pred_col));
    if (cells.size() <= need) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": missing columns");
    }
    try {
      pairs.truth.push_back(audio::parse_label(cells[static_cast<std::size_t>(truth_col)]));
      pairs.predicted.push_back(audio::parse_label(cells[static_cast<std::size_t>(pred_col)]));
    } catch (const InvalidArgument& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pairs;
}

struct TrainOptions {
  std::string features;
  std::string kind = "cnn_lstm";
  std::uint64_t seed = 0;
  double test_ratio = 0.0;
  std::string out;
  std::string history;
  TrainFlags train;
};

void run_train(const TrainOptions& o) {
  const ModelKind kind = parse_kind_flag(o.kind);
  if (o.test_ratio < 0.0 || o.test_ratio >= 1.0) throw UsageError("--test-ratio must be in [0, 1)");
  const std::uint64_t init_seed = derive_seed(o.seed, 1);
  const std::uint64_t train_seed = derive_seed(o.seed, 2);
  echo_config("train", {{"features", o.features},
                        {"kind", models::to_string(kind)},
                        {"seed", o.seed},
                        {"init_seed", init_seed},
                        {"train_seed", train_seed},
                        {"test_ratio", o.test_ratio},
                        {"out", o.out},
                        {"history", o.history},
                        {"train", o.train.to_json()}});
  const auto dataset = features::load_features(o.features);
  eval::Split split;
  if (o.test_ratio > 0.0) {
    split = eval::stratified_split(dataset.labels, o.test_ratio, o.seed);
  } else {
    split.train = models::all_rows(dataset);
  }
  const auto outcome = eval::train_and_evaluate(kind, dataset, split, init_seed,
                                                o.train.config(train_seed), {},
                                                epoch_logger(std::string(models::to_string(kind))));
  nn::save_checkpoint(outcome.checkpoint, o.out);
  if (!o.history.empty()) write_text_file(o.history, outcome.history.to_json());
  json summary{{"checkpoint", o.out},
               {"parameters", outcome.checkpoint.parameters.size()},
               {"train_size", split.train.size()},
               {"test_size", split.test.size()}};
  if (!outcome.history.epochs.empty()) {
    summary["final_train_loss"] = outcome.history.epochs.back().train_loss;
    summary["final_train_accuracy"] = outcome.history.epochs.back().train_accuracy;
  }
  if (!split.test.empty()) {
    summary["test"] = json::parse(eval::metrics_to_json(outcome.metrics, outcome.confusion));
  }
  print_summary(summary);
}

struct EvaluateOptions {
  std::string checkpoint;
  std::string features;
  std::string predictions;
  std::string confusion_csv;
  std::string report;
  std::string predictions_out;
  std::uint64_t seed = 0;
};

void run_evaluate(const EvaluateOptions& o) {
  const bool from_model = !o.checkpoint.empty() || !o.features.empty();
  if (from_model == !o.predictions.empty()) {
    throw UsageError("give either --checkpoint with --features, or --predictions");
  }
  if (from_model && (o.checkpoint.empty() || o.features.empty())) {
    throw UsageError("--checkpoint and --features must be given together");
  }
  echo_config("evaluate", {{"checkpoint", o.checkpoint},
                           {"features", o.features},
                           {"predictions", o.predictions},
                           {"confusion_csv", o.confusion_csv},
                           {"report", o.report},
                           {"predictions_out", o.predictions_out},
                           {"seed", o.seed}});
  LabelPairs pairs;
  if (from_model) {
    const models::Classifier classifier(nn::load_checkpoint(o.checkpoint));
    const auto dataset = features::load_features(o.features);
    std::string csv = "id,truth,predicted,p_infested\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto c = classifier.classify(dataset.matrices[i]);
      pairs.truth.push_back(dataset.labels[i]);
      pairs.predicted.push_back(c.label);
      csv += dataset.ids[i] + "," + std::string(audio::to_string(dataset.labels[i])) + "," +
             std::string(audio::to_string(c.label)) + "," + json(c.p_infested).dump() + "\n";
    }
    if (!o.predictions_out.empty()) write_text_file(o.predictions_out, csv);
  } else {
    pairs = read_predictions_csv(o.predictions);
  }
  if (pairs.truth.empty()) throw InvalidDatasetError("nothing to evaluate");
  const auto confusion = eval::confusion_from_predictions(pairs.truth, pairs.predicted);
  const auto metrics = eval::metrics_from_confusion(confusion);
  const std::string report = eval::metrics_to_json(metrics, confusion);
  if (!o.confusion_csv.empty()) write_text_file(o.confusion_csv, confusion.to_csv());
  if (!o.report.empty()) write_text_file(o.report, report + "\n");
  print_summary(json::parse(report));
}

struct CrossvalOptions {
  std::string features;
  std::string kind = "cnn_lstm";
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::string out;
  TrainFlags train;
};

void run_crossval(const CrossvalOptions& o) {
  const ModelKind kind = parse_kind_flag(o.kind);
  echo_config("crossval", {{"features", o.features},
                           {"kind", models::to_string(kind)},
                           {"k", o.k},
                           {"seed", o.seed},
                           {"out", o.out},
                           {"train", o.train.to_json()}});
  const auto dataset = features::load_features(o.features);
  const auto report = eval::crossval_run(
      kind, dataset, o.k, o.seed, o.train.config(o.seed), {}, [](const eval::FoldResult& f) {
        std::cerr << "[fold " << f.fold << "] accuracy " << f.metrics.accuracy << std::endl;
      });
  const std::string text = report.to_json();
  if (!o.out.empty()) write_text_file(o.out, text + "\n");
  std::cerr << report.to_text();
  print_summary(json::parse(text));
}

struct CompareOptions {
  std::string features;
  std::uint64_t seed = 0;
  double test_ratio = 0.2;
  std::string out;
  std::string table;
  std::string checkpoint_dir;
  TrainFlags train;
};

void run_compare(const CompareOptions& o) {
  if (!(o.test_ratio > 0.0 && o.test_ratio < 1.0)) throw UsageError("--test-ratio must be in (0, 1)");
  echo_config("compare", {{"features", o.features},
                          {"seed", o.seed},
                          {"test_ratio", o.test_ratio},
                          {"out", o.out},
                          {"table", o.table},
                          {"checkpoint_dir", o.checkpoint_dir},
                          {"train", o.train.to_json()}});
  const auto dataset = features::load_features(o.features);
  if (!o.checkpoint_dir.empty()) fs::create_directories(o.checkpoint_dir);
  const auto report = eval::comparative_report(
      dataset, o.seed, o.train.config(o.seed), o.test_ratio, {}, models::kAllModelKinds,
      [&](const eval::ModelOutcome& m) {
        std::cerr << "[" << models::to_string(m.kind) << "] test accuracy " << m.metrics.accuracy
                  << std::endl;
        if (!o.checkpoint_dir.empty()) {
          nn::save_checkpoint(m.checkpoint, fs::path(o.checkpoint_dir) /
                                                (std::string(models::to_string(m.kind)) + ".ckpt"));
        }
      });
  const std::string text = report.to_json();
  if (!o.out.empty()) write_text_file(o.out, text + "\n");
  if (!o.table.empty()) write_text_file(o.table, report.to_text());
  std::cerr << report.to_text();
  print_summary(json::parse(text));
}

}  // namespace

void register_model_commands(CLI::App& app, Registry& registry) {
  auto tr = std::make_shared<TrainOptions>();
  auto* t = app.add_subcommand("train", "Train one model on a feature dump");
  t->add_option("--features", tr->features, "Feature dump (JSON)")->required();
  t->add_option("--kind", tr->kind, "dnn_mean | cnn | lstm | cnn_lstm")->capture_default_str();
  t->add_option("--seed", tr->seed, "Master seed")->capture_default_str();
  t->add_option("--test-ratio", tr->test_ratio, "Stratified hold-out fraction (0 trains on all)")
      ->capture_default_str();
  t->add_option("--out", tr->out, "Checkpoint path")->required();
  t->add_option("--history", tr->history, "Per-epoch history JSON path");
  tr->train.add_to(t);
  t->callback([tr, &registry] { registry.action = [tr] { run_train(*tr); }; });

  auto ev = std::make_shared<EvaluateOptions>();
  auto* e = app.add_subcommand("evaluate", "Score a checkpoint, or a predictions CSV");
  e->add_option("--checkpoint", ev->checkpoint, "Checkpoint path");
  e->add_option("--features", ev->features, "Feature dump (JSON)");
  e->add_option("--predictions", ev->predictions, "CSV with truth and predicted columns");
  e->add_option("--confusion-csv", ev->confusion_csv, "Write the 2x2 confusion matrix here");
  e->add_option("--report", ev->report, "Write the metric report JSON here");
  e->add_option("--predictions-out", ev->predictions_out, "Write per-record predictions here");
  e->add_option("--seed", ev->seed, "Seed (recorded only)")->capture_default_str();
  e->callback([ev, &registry] { registry.action = [ev] { run_evaluate(*ev); }; });

  auto cv = std::make_shared<CrossvalOptions>();
  auto* c = app.add_subcommand("crossval", "Stratified k-fold cross-validation");
  c->add_option("--features", cv->features, "Feature dump (JSON)")->required();
  c->add_option("--kind", cv->kind, "dnn_mean | cnn | lstm | cnn_lstm")->capture_default_str();
  c->add_option("--k", cv->k, "Number of folds")->capture_default_str();
  c->add_option("--seed", cv->seed, "Master seed")->capture_default_str();
  c->add_option("--out", cv->out, "Report JSON path");
  cv->train.add_to(c);
  c->callback([cv, &registry] { registry.action = [cv] { run_crossval(*cv); }; });

  auto cmp = std::make_shared<CompareOptions>();
  auto* m = app.add_subcommand("compare", "Train all four models on one split and tabulate");
  m->add_option("--features", cmp->features, "Feature dump (JSON)")->required();
  m->add_option("--seed", cmp->seed, "Master seed")->capture_default_str();
  m->add_option("--test-ratio", cmp->test_ratio, "Stratified hold-out fraction")
      ->capture_default_str();
  m->add_option("--out", cmp->out, "Report JSON path");
  m->add_option("--table", cmp->table, "Text table path");
  m->add_option("--checkpoint-dir", cmp->checkpoint_dir, "Save each model's checkpoint here");
  cmp->train.add_to(m);
  m->callback([cmp, &registry] { registry.action = [cmp] { run_compare(*cmp); }; });
}

}  // namespace woodpest::cli
