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

#include <vector>

#include "woodpest/audio/clip.hpp"

namespace woodpest::audio {

/// Linear-interpolation resampler. Output length is
/// round(len * target / source); positions past the last input sample hold
/// the final value. Equal rates return the clip unchanged.
AudioClip resample_linear(const AudioClip& clip, int target_rate);

/// Splits into consecutive non-overlapping windows of
/// round(length_s * rate) samples. The final remainder is zero-padded; an
/// empty clip yields a single all-zero window.
std::vector<AudioClip> segment_clip(const AudioClip& clip, double length_s);

}  // namespace woodpest::audio
