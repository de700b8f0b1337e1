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

#include "woodpest/eval/metrics.hpp"

#include "woodpest/error.hpp"

namespace woodpest::eval {

using audio::ClipLabel;

std::string ConfusionMatrix::to_csv() const {
  return "true\\predicted,clean,infested\n"
         "clean," + std::to_string(tn) + "," + std::to_string(fp) + "\n"
         "infested," + std::to_string(fn) + "," + std::to_string(tp) + "\n";
}

ConfusionMatrix confusion_from_predictions(std::span<const ClipLabel> truth,
                                           std::span<const ClipLabel> predicted) {
  if (truth.size() != predicted.size()) {
    throw InvalidArgument("confusion: " + std::to_string(truth.size()) + " labels vs " +
                          std::to_string(predicted.size()) + " predictions");
  }
  if (truth.empty()) throw InvalidArgument("confusion: no samples");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == ClipLabel::Infested;
    const bool flagged = predicted[i] == ClipLabel::Infested;
    if (actual && flagged) ++m.tp;
    else if (actual) ++m.fn;
    else if (flagged) ++m.fp;
    else ++m.tn;
  }
  return m;
}

MetricReport metrics_from_confusion(const ConfusionMatrix& m) {
  if (m.total() == 0) throw InvalidArgument("metrics: empty confusion matrix");
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  MetricReport r;
  r.accuracy = ratio(m.tp + m.tn, m.total());
  r.precision = ratio(m.tp, m.tp + m.fp);
  r.recall = ratio(m.tp, m.tp + m.fn);
  const double pr = r.precision + r.recall;
  r.f1 = pr == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / pr;
  return r;
}

}  // namespace woodpest::eval
