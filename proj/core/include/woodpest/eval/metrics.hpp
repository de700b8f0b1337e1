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

#include <cstddef>
#include <span>
#include <string>

#include "woodpest/audio/clip.hpp"

namespace woodpest::eval {

/// Binary confusion counts with Infested as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fn + fp + tn; }
  /// 2x2 CSV: rows are true classes, columns predicted (clean, infested).
  std::string to_csv() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct MetricReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Throws InvalidArgument when the sequences are empty or differ in length.
ConfusionMatrix confusion_from_predictions(std::span<const audio::ClipLabel> truth,
                                           std::span<const audio::ClipLabel> predicted);

/// Precision, recall and F1 are 0 (not an error) when their denominator is 0.
/// Throws InvalidArgument on an empty matrix.
MetricReport metrics_from_confusion(const ConfusionMatrix& m);

}  // namespace woodpest::eval
