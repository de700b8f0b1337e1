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

#include "woodpest/synth/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>

#include <json.hpp>

#include "woodpest/audio/wav.hpp"
#include "woodpest/error.hpp"
#include "woodpest/features/fft.hpp"
#include "woodpest/random.hpp"

namespace woodpest::synth {

using nlohmann::json;

namespace {

// Independent generator streams per clip seed.
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kClickStream = 2;
constexpr std::uint64_t kBurstStream = 3;

double energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double peak(const std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

json config_json(const SynthConfig& cfg) {
  return {{"sample_rate", cfg.sample_rate}, {"duration_s", cfg.duration_s},
          {"click_rate", cfg.click_rate},   {"band_low_hz", cfg.band_low_hz},
          {"band_high_hz", cfg.band_high_hz}, {"decay_s", cfg.decay_s},
          {"snr_db", cfg.snr_db},           {"seed", cfg.seed}};
}

std::string clip_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "clip_%04zu", i);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (sample_rate <= 0) throw InvalidArgument("sample_rate must be positive");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidArgument("duration_s must be positive");
  }
  if (!(click_rate > 0.0) || !std::isfinite(click_rate)) {
    throw InvalidArgument("click_rate must be positive");
  }
  const double nyquist = sample_rate / 2.0;
  if (!(band_low_hz >= 0.0) || !(band_high_hz > band_low_hz) || band_high_hz > nyquist) {
    throw InvalidArgument("click band must satisfy 0 <= low < high <= Nyquist");
  }
  if (!(decay_s > 0.0) || !std::isfinite(decay_s)) {
    throw InvalidArgument("decay_s must be positive");
  }
  if (!std::isfinite(snr_db)) throw InvalidArgument("snr_db must be finite");
}

std::size_t SynthConfig::num_samples() const {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

std::string SynthConfig::to_json() const { return config_json(*this).dump(2); }

std::vector<double> pink_noise(std::size_t n, std::uint64_t seed) {
  if (n == 0) return {};
  const std::size_t size = std::bit_ceil(n);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::complex<double>> spec(size);
  for (auto& v : spec) v = gauss(rng);
  features::fft_inplace(spec);
  spec[0] = 0.0;
  for (std::size_t k = 1; k <= size / 2; ++k) {
    const double g = 1.0 / std::sqrt(static_cast<double>(k));
    spec[k] *= g;
    if (k != size - k) spec[size - k] *= g;
  }
  features::fft_inplace(spec, true);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = spec[i].real();
  return out;
}

std::vector<double> click_burst(const SynthConfig& cfg, std::uint64_t seed) {
  const auto length = static_cast<std::size_t>(std::ceil(8.0 * cfg.decay_s * cfg.sample_rate));
  const std::size_t size = std::bit_ceil(std::max<std::size_t>(length, 2));
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::complex<double>> spec(size);
  for (auto& v : spec) v = gauss(rng);
  features::fft_inplace(spec);
  const double bin_hz = static_cast<double>(cfg.sample_rate) / static_cast<double>(size);
  for (std::size_t k = 0; k <= size / 2; ++k) {
    const double f = k * bin_hz;
    if (f < cfg.band_low_hz || f > cfg.band_high_hz) {
      spec[k] = 0.0;
      spec[(size - k) % size] = 0.0;
    }
  }
  features::fft_inplace(spec, true);
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double t = static_cast<double>(i) / cfg.sample_rate;
    out[i] = spec[i].real() * std::exp(-t / cfg.decay_s);
  }
  return out;
}

InfestedDetail gen_infested_detail(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = cfg.num_samples();
  std::vector<double> noise = pink_noise(n, derive_seed(seed, kNoiseStream));
  std::vector<double> clicks(n, 0.0);

  InfestedDetail d;
  Rng rng(derive_seed(seed, kClickStream));
  std::poisson_distribution<std::size_t> count_dist(cfg.click_rate * cfg.duration_s);
  const std::size_t count = n == 0 ? 0 : count_dist(rng);
  std::uniform_int_distribution<std::size_t> onset_dist(0, n == 0 ? 0 : n - 1);
  const std::uint64_t burst_base = derive_seed(seed, kBurstStream);
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t onset = onset_dist(rng);
    const auto burst = click_burst(cfg, derive_seed(burst_base, j));
    d.click_length = burst.size();
    for (std::size_t i = 0; i < burst.size() && onset + i < n; ++i) clicks[onset + i] += burst[i];
    d.onsets.push_back(onset);
  }
  std::sort(d.onsets.begin(), d.onsets.end());

  const double e_clicks = energy(clicks);
  if (e_clicks > 0.0) {
    const double target = energy(noise) * std::pow(10.0, cfg.snr_db / 10.0);
    const double g = std::sqrt(target / e_clicks);
    for (double& v : clicks) v *= g;
  }
  std::vector<double> mix(n);
  for (std::size_t i = 0; i < n; ++i) mix[i] = noise[i] + clicks[i];
  const double p = peak(mix);
  const double scale = p > 0.0 ? kPeakAmplitude / p : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    noise[i] *= scale;
    clicks[i] *= scale;
    mix[i] = noise[i] + clicks[i];
  }
  d.clip = audio::AudioClip(std::move(mix), cfg.sample_rate);
  d.noise = std::move(noise);
  d.clicks = std::move(clicks);
  return d;
}

audio::AudioClip gen_clean_clip(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::vector<double> noise = pink_noise(cfg.num_samples(), derive_seed(seed, kNoiseStream));
  const double p = peak(noise);
  const double scale = p > 0.0 ? kPeakAmplitude / p : 1.0;
  for (double& v : noise) v *= scale;
  return audio::AudioClip(std::move(noise), cfg.sample_rate);
}

audio::AudioClip gen_infested_clip(const SynthConfig& cfg, std::uint64_t seed) {
  return gen_infested_detail(cfg, seed).clip;
}

std::vector<SynthEntry> gen_entries(std::size_t n_per_class, const SynthConfig& cfg,
                                    std::uint64_t seed) {
  if (n_per_class < 1) throw InvalidArgument("n_per_class must be at least 1");
  cfg.validate();
  std::vector<SynthEntry> out;
  out.reserve(2 * n_per_class);
  for (auto label : {audio::ClipLabel::Clean, audio::ClipLabel::Infested}) {
    const std::uint64_t cls = static_cast<std::uint64_t>(label);
    for (std::size_t i = 0; i < n_per_class; ++i) {
      SynthEntry e;
      e.label = label;
      e.seed = derive_seed(seed, 2 * i + cls);
      e.id = std::string(audio::to_string(label)) + "/" + clip_name(i);
      e.clip = (label == audio::ClipLabel::Clean ? gen_clean_clip(cfg, e.seed)
                                                 : gen_infested_clip(cfg, e.seed))
                   .with_source_id(e.id);
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::string DatasetManifest::to_json() const {
  json clips = json::array();
  for (const auto& e : entries) {
    clips.push_back({{"id", e.id},
                     {"label", audio::to_string(e.label)},
                     {"seed", e.seed},
                     {"path", e.id + ".wav"}});
  }
  return json{{"format", "woodpest-synth"},
              {"version", 1},
              {"seed", seed},
              {"config", config_json(config)},
              {"clips", std::move(clips)}}
      .dump(2);
}

DatasetManifest gen_dataset(const std::filesystem::path& dir, std::size_t n_per_class,
                            const SynthConfig& cfg, std::uint64_t seed) {
  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.config = cfg;
  manifest.entries = gen_entries(n_per_class, cfg, seed);
  std::error_code ec;
  for (const char* sub : {"clean", "infested"}) {
    std::filesystem::create_directories(dir / sub, ec);
    if (ec) throw IoError("cannot create " + (dir / sub).string() + ": " + ec.message());
  }
  for (auto& e : manifest.entries) {
    audio::save_wav(e.clip, dir / (e.id + ".wav"));
    e.clip = audio::AudioClip();
  }
  const auto path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << manifest.to_json() << '\n';
  if (!out) throw IoError("cannot write " + path.string());
  return manifest;
}

}  // namespace woodpest::synth
