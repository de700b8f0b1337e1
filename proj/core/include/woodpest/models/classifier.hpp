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

#include <filesystem>

#include "woodpest/audio/clip.hpp"
#include "woodpest/features/mfcc.hpp"
#include "woodpest/features/standardize.hpp"
#include "woodpest/models/model_zoo.hpp"
#include "woodpest/nn/checkpoint.hpp"

namespace woodpest::models {

struct Classification {
  audio::ClipLabel label = audio::ClipLabel::Clean;
  double p_infested = 0.0;
};

/// Trained model plus the featurization it expects. classify() is const and
/// safe to call from several threads at once.
class Classifier {
 public:
  explicit Classifier(const nn::Checkpoint& ckpt);

  ModelKind kind() const { return kind_; }
  const features::StandardizeStats& stats() const { return stats_; }

  /// Resamples to the canonical rate and fits the clip to the canonical
  /// length (first window, zero-padded) before featurizing.
  Classification classify(const audio::AudioClip& clip) const;
  Classification classify(const features::MfccMatrix& matrix) const;

 private:
  ModelKind kind_;
  nn::Sequential graph_;
  features::StandardizeStats stats_;
  features::MfccExtractor extractor_;
};

}  // namespace woodpest::models
