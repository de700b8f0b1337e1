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

#include "woodpest/models/classifier.hpp"

#include "woodpest/audio/transform.hpp"
#include "woodpest/error.hpp"
#include "woodpest/models/inputs.hpp"

namespace woodpest::models {

Classifier::Classifier(const nn::Checkpoint& ckpt)
    : kind_(parse_model_kind(ckpt.architecture)),
      graph_(ckpt.build()),
      stats_{ckpt.feature_mean, ckpt.feature_std} {
  if (stats_.mean.empty() || stats_.mean.size() != stats_.std.size()) {
    throw FormatError("checkpoint carries no feature standardization statistics");
  }
}

Classification Classifier::classify(const audio::AudioClip& clip) const {
  audio::AudioClip canon = audio::resample_linear(clip, audio::kCanonicalSampleRate);
  if (canon.size() != audio::kCanonicalClipSamples) {
    canon = audio::segment_clip(canon, audio::kCanonicalClipSeconds).front();
  }
  return classify(extractor_.frames(canon));
}

Classification Classifier::classify(const features::MfccMatrix& matrix) const {
  nn::Tensor x = to_model_input(kind_, matrix, stats_);
  nn::Shape batched{1};
  batched.insert(batched.end(), x.shape().begin(), x.shape().end());
  const nn::Tensor probs = graph_.forward(x.reshaped(batched));
  Classification out;
  out.p_infested = probs.at(0, 1);
  out.label = probs.at(0, 1) > probs.at(0, 0) ? audio::ClipLabel::Infested
                                               : audio::ClipLabel::Clean;
  return out;
}

}  // namespace woodpest::models
