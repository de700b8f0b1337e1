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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "woodpest/audio/clip.hpp"

namespace woodpest::audio {

/// Maps an amplitude to 16-bit PCM: round(x * 32768), saturated to
/// [-32768, 32767].
std::int16_t to_pcm16(double amplitude);
/// Inverse fixed-point map: value / 32768.
constexpr double from_pcm16(std::int16_t value) { return value / 32768.0; }

std::vector<std::int16_t> to_pcm16(std::span<const double> samples);
std::vector<double> from_pcm16(std::span<const std::int16_t> samples);

/// Decodes a RIFF/WAVE PCM16 image (mono or stereo; stereo is averaged).
/// Throws FormatError on malformed containers and UnsupportedFormatError on
/// float, 24-bit, compressed, or more-than-two-channel data.
AudioClip decode_wav(std::span<const std::uint8_t> bytes,
                     std::string source_id = {});
/// Encodes a mono PCM16 RIFF/WAVE image.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

AudioClip load_wav(const std::filesystem::path& path);
/// Throws IoError if the path cannot be written.
void save_wav(const AudioClip& clip, const std::filesystem::path& path);

}  // namespace woodpest::audio
