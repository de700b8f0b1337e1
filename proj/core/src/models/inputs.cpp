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

#include "woodpest/models/inputs.hpp"

#include <numeric>

#include "woodpest/error.hpp"

namespace woodpest::models {

using features::MfccMatrix;

namespace {

MfccMatrix mean_as_matrix(const MfccMatrix& m) {
  auto mean = features::mfcc_mean(m);
  const std::size_t n = mean.values.size();
  return MfccMatrix(1, n, std::move(mean.values));
}

}  // namespace

features::StandardizeStats fit_input_stats(ModelKind kind,
                                           const features::FeatureDataset& dataset,
                                           std::span<const std::size_t> rows) {
  std::vector<MfccMatrix> subset;
  subset.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto& m = dataset.matrices.at(r);
    subset.push_back(uses_sequence(kind) ? m : mean_as_matrix(m));
  }
  return features::fit_standardize(subset);
}

nn::Tensor to_model_input(ModelKind kind, const MfccMatrix& matrix,
                          const features::StandardizeStats& stats) {
  if (uses_sequence(kind)) {
    const auto z = features::apply_standardize(matrix, stats);
    return nn::Tensor({z.frames(), z.coeffs()},
                      std::vector<double>(z.values().begin(), z.values().end()));
  }
  const auto z = features::apply_standardize(mean_as_matrix(matrix), stats);
  return nn::Tensor({z.coeffs()}, std::vector<double>(z.values().begin(), z.values().end()));
}

LabeledInputs prepare_inputs(ModelKind kind, const features::FeatureDataset& dataset,
                             std::span<const std::size_t> rows,
                             const features::StandardizeStats& stats) {
  LabeledInputs out;
  out.inputs.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    out.inputs.push_back(to_model_input(kind, dataset.matrices.at(r), stats));
    out.labels.push_back(dataset.labels.at(r));
  }
  return out;
}

std::vector<std::size_t> all_rows(const features::FeatureDataset& dataset) {
  std::vector<std::size_t> rows(dataset.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace woodpest::models
