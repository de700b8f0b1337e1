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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace woodpest::audio {

inline constexpr int kCanonicalSampleRate = 16000;
inline constexpr double kCanonicalClipSeconds = 5.0;
inline constexpr std::size_t kCanonicalClipSamples = 80000;

/// Binary class of a clip. The integer codes are stable and used on disk.
enum class ClipLabel : int { Clean = 0, Infested = 1 };

std::string_view to_string(ClipLabel label);
/// Accepts "clean"/"infested" (any case) or "0"/"1".
ClipLabel parse_label(std::string_view text);

/// Mono PCM audio with amplitudes in [-1, 1]. Immutable once built.
class AudioClip {
 public:
  AudioClip() = default;
  /// Samples outside [-1, 1] are clamped. Throws InvalidArgument if
  /// sample_rate is not positive or a sample is NaN.
  AudioClip(std::vector<double> samples, int sample_rate,
            std::optional<std::string> source_id = std::nullopt);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  const std::optional<std::string>& source_id() const { return source_id_; }

  AudioClip with_source_id(std::string id) const;

  friend bool operator==(const AudioClip&, const AudioClip&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = kCanonicalSampleRate;
  std::optional<std::string> source_id_;
};

}  // namespace woodpest::audio
