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

#include "woodpest/audio/clip.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "woodpest/error.hpp"

namespace woodpest::audio {

std::string_view to_string(ClipLabel label) {
  return label == ClipLabel::Infested ? "infested" : "clean";
}

ClipLabel parse_label(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "clean" || lower == "0") return ClipLabel::Clean;
  if (lower == "infested" || lower == "1") return ClipLabel::Infested;
  throw InvalidArgument("unknown clip label '" + std::string(text) + "'");
}

AudioClip::AudioClip(std::vector<double> samples, int sample_rate,
                     std::optional<std::string> source_id)
    : samples_(std::move(samples)),
      sample_rate_(sample_rate),
      source_id_(std::move(source_id)) {
  if (sample_rate_ <= 0) {
    throw InvalidArgument("sample rate must be positive, got " +
                          std::to_string(sample_rate_));
  }
  for (double& s : samples_) {
    if (std::isnan(s)) throw InvalidArgument("NaN sample in audio clip");
    s = std::clamp(s, -1.0, 1.0);
  }
}

AudioClip AudioClip::with_source_id(std::string id) const {
  AudioClip copy = *this;
  copy.source_id_ = std::move(id);
  return copy;
}

}  // namespace woodpest::audio
