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

#include "woodpest/eval/splits.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "woodpest/error.hpp"
#include "woodpest/random.hpp"

namespace woodpest::eval {

using audio::ClipLabel;

namespace {

constexpr std::array<ClipLabel, 2> kClasses = {ClipLabel::Clean, ClipLabel::Infested};

/// Rows of each class, shuffled with one generator (Clean first).
std::array<std::vector<std::size_t>, 2> shuffled_by_class(std::span<const ClipLabel> labels,
                                                          std::uint64_t seed) {
  std::array<std::vector<std::size_t>, 2> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) rows[static_cast<int>(labels[i])].push_back(i);
  Rng rng(seed);
  for (auto& r : rows) std::shuffle(r.begin(), r.end(), rng);
  return rows;
}

}  // namespace

Split stratified_split(std::span<const ClipLabel> labels, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("split ratio must be in (0, 1)");
  const auto by_class = shuffled_by_class(labels, seed);
  Split split;
  for (std::size_t c = 0; c < kClasses.size(); ++c) {
    const auto& rows = by_class[c];
    if (rows.empty()) {
      throw InvalidDatasetError("class '" + std::string(audio::to_string(kClasses[c])) +
                                "' has no samples");
    }
    auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(rows.size()) * ratio + 0.5));
    n_test = std::clamp<std::size_t>(n_test, 1, rows.size());
    split.test.insert(split.test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<Split> kfold_indices(std::span<const ClipLabel> labels, std::size_t k,
                                 std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("k-fold requires k >= 2");
  const auto by_class = shuffled_by_class(labels, seed);
  for (std::size_t c = 0; c < kClasses.size(); ++c) {
    if (by_class[c].size() < k) {
      throw InvalidDatasetError("class '" + std::string(audio::to_string(kClasses[c])) +
                                "' has " + std::to_string(by_class[c].size()) +
                                " samples, fewer than k=" + std::to_string(k));
    }
  }

  std::vector<std::vector<std::size_t>> test_folds(k);
  for (const auto& rows : by_class) {
    const std::size_t base = rows.size() / k;
    const std::size_t extra = rows.size() % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const std::size_t len = base + (f < extra ? 1 : 0);
      test_folds[f].insert(test_folds[f].end(), rows.begin() + static_cast<std::ptrdiff_t>(pos),
                           rows.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
  }

  std::vector<Split> folds(k);
  std::vector<int> fold_of(labels.size());
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t r : test_folds[f]) fold_of[r] = static_cast<int>(f);
  }
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t r = 0; r < labels.size(); ++r) {
      (fold_of[r] == static_cast<int>(f) ? folds[f].test : folds[f].train).push_back(r);
    }
  }
  return folds;
}

}  // namespace woodpest::eval
