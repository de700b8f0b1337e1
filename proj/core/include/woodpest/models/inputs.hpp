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

#include <span>
#include <vector>

#include "woodpest/audio/clip.hpp"
#include "woodpest/features/feature_dump.hpp"
#include "woodpest/features/standardize.hpp"
#include "woodpest/models/model_zoo.hpp"
#include "woodpest/nn/tensor.hpp"

namespace woodpest::models {

/// Per-sample model inputs and their labels.
struct LabeledInputs {
  std::vector<nn::Tensor> inputs;
  std::vector<audio::ClipLabel> labels;

  std::size_t size() const { return inputs.size(); }
};

/// Standardization statistics for a model kind, fit on the given rows of a
/// dataset only: over all frames for sequence kinds, over the time-mean
/// vectors for DnnMean.
features::StandardizeStats fit_input_stats(ModelKind kind,
                                           const features::FeatureDataset& dataset,
                                           std::span<const std::size_t> rows);

/// Standardized per-sample tensor: [T, 40] for sequence kinds, [40] for
/// DnnMean.
nn::Tensor to_model_input(ModelKind kind, const features::MfccMatrix& matrix,
                          const features::StandardizeStats& stats);

LabeledInputs prepare_inputs(ModelKind kind, const features::FeatureDataset& dataset,
                             std::span<const std::size_t> rows,
                             const features::StandardizeStats& stats);

/// All row indices 0..n-1.
std::vector<std::size_t> all_rows(const features::FeatureDataset& dataset);

}  // namespace woodpest::models
