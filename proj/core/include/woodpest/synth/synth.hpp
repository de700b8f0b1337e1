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
#include <string>
#include <vector>

#include "woodpest/audio/clip.hpp"

namespace woodpest::synth {

struct SynthConfig {
  int sample_rate = audio::kCanonicalSampleRate;
  double duration_s = audio::kCanonicalClipSeconds;
  double click_rate = 8.0;  // clicks per second
  double band_low_hz = 3000.0;
  double band_high_hz = 6000.0;
  double decay_s = 0.005;
  double snr_db = 10.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on a violated invariant.
  void validate() const;
  std::size_t num_samples() const;
  std::string to_json() const;
};

/// Output peak amplitude of every generated clip.
inline constexpr double kPeakAmplitude = 0.5;

/// Pink (1/f power) Gaussian noise of length n, not normalized.
std::vector<double> pink_noise(std::size_t n, std::uint64_t seed);

/// One decaying click: white noise band-passed to [low, high] Hz with an
/// exp(-t / decay) envelope, truncated at 8 decay constants.
std::vector<double> click_burst(const SynthConfig& cfg, std::uint64_t seed);

/// Components of an infested clip after peak normalization:
/// samples == noise + clicks.
struct InfestedDetail {
  audio::AudioClip clip;
  std::vector<double> noise;
  std::vector<double> clicks;
  std::vector<std::size_t> onsets;
  std::size_t click_length = 0;
};

audio::AudioClip gen_clean_clip(const SynthConfig& cfg, std::uint64_t seed);
audio::AudioClip gen_infested_clip(const SynthConfig& cfg, std::uint64_t seed);
/// With zero clicks the result equals gen_clean_clip(cfg, seed).
InfestedDetail gen_infested_detail(const SynthConfig& cfg, std::uint64_t seed);

struct SynthEntry {
  std::string id;
  audio::ClipLabel label = audio::ClipLabel::Clean;
  std::uint64_t seed = 0;
  audio::AudioClip clip;
};

/// n clean then n infested clips. Per-clip seeds derive from the master seed,
/// class and index, so clip i of a class is stable as n grows.
std::vector<SynthEntry> gen_entries(std::size_t n_per_class, const SynthConfig& cfg,
                                    std::uint64_t seed);

struct DatasetManifest {
  std::uint64_t seed = 0;
  SynthConfig config;
  std::vector<SynthEntry> entries;  // clips left empty when read from disk
  std::string to_json() const;
};

/// Writes {clean,infested}/clip_NNNN.wav and manifest.json under dir.
/// Throws IoError on filesystem failures.
DatasetManifest gen_dataset(const std::filesystem::path& dir, std::size_t n_per_class,
                            const SynthConfig& cfg, std::uint64_t seed);

}  // namespace woodpest::synth
