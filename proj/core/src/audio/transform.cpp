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

#include "woodpest/audio/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "woodpest/error.hpp"

namespace woodpest::audio {

AudioClip resample_linear(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) {
    throw InvalidArgument("target rate must be positive, got " + std::to_string(target_rate));
  }
  if (target_rate == clip.sample_rate()) return clip;

  const auto in = clip.samples();
  const double ratio = static_cast<double>(clip.sample_rate()) / target_rate;
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(in.size()) * target_rate / clip.sample_rate()));
  std::vector<double> out(out_len);
  if (in.empty()) return AudioClip(std::move(out), target_rate, clip.source_id());

  const std::size_t last = in.size() - 1;
  for (std::size_t j = 0; j < out_len; ++j) {
    const double pos = static_cast<double>(j) * ratio;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= last) {
      out[j] = in[last];
      continue;
    }
    const double frac = pos - static_cast<double>(i);
    out[j] = in[i] * (1.0 - frac) + in[i + 1] * frac;
  }
  return AudioClip(std::move(out), target_rate, clip.source_id());
}

std::vector<AudioClip> segment_clip(const AudioClip& clip, double length_s) {
  if (!(length_s > 0.0)) throw InvalidArgument("segment length must be positive");
  const auto seg_len =
      static_cast<std::size_t>(std::llround(length_s * clip.sample_rate()));
  if (seg_len == 0) throw InvalidArgument("segment length rounds to zero samples");

  const auto in = clip.samples();
  const std::size_t count = std::max<std::size_t>(1, (in.size() + seg_len - 1) / seg_len);
  const std::string base = clip.source_id().value_or("clip");

  std::vector<AudioClip> segments;
  segments.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<double> window(seg_len, 0.0);
    const std::size_t begin = s * seg_len;
    const std::size_t end = std::min(in.size(), begin + seg_len);
    if (begin < end) std::copy(in.begin() + begin, in.begin() + end, window.begin());
    std::optional<std::string> id;
    if (count == 1) {
      id = clip.source_id();
    } else {
      id = base + "#" + std::to_string(s);
    }
    segments.emplace_back(std::move(window), clip.sample_rate(), std::move(id));
  }
  return segments;
}

}  // namespace woodpest::audio
