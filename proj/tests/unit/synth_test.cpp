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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "test_support.hpp"
#include "woodpest/error.hpp"
#include "woodpest/features/mfcc.hpp"
#include "woodpest/random.hpp"
#include "woodpest/synth/synth.hpp"

namespace woodpest::synth {
namespace {

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double peak(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

TEST(SynthConfig, Validation) {
  SynthConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.num_samples(), 80000u);
  auto bad = cfg;
  bad.click_rate = 0.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.band_high_hz = 9000.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.decay_s = -1.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.snr_db = NAN;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_EQ(nlohmann::json::parse(cfg.to_json()).at("click_rate"), 8.0);
}

TEST(CleanClip, DeterministicLengthAndPeak) {
  const SynthConfig cfg;
  const auto a = gen_clean_clip(cfg, 17);
  const auto b = gen_clean_clip(cfg, 17);
  EXPECT_EQ(a.size(), 80000u);
  EXPECT_EQ(a.sample_rate(), 16000);
  EXPECT_TRUE(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
  EXPECT_NEAR(peak(a.samples()), kPeakAmplitude, 1e-12);
  const auto c = gen_clean_clip(cfg, 18);
  EXPECT_FALSE(std::equal(a.samples().begin(), a.samples().end(), c.samples().begin()));
}

TEST(CleanClip, PinkSpectralSlope) {
  constexpr std::size_t kFrame = 1024;
  const SynthConfig cfg;
  std::vector<double> window(kFrame);
  for (std::size_t i = 0; i < kFrame; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / kFrame);
  }
  std::vector<double> avg(kFrame / 2 + 1, 0.0);
  std::vector<double> frame(kFrame);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto clip = gen_clean_clip(cfg, 500 + seed);
    const auto s = clip.samples();
    for (std::size_t start = 0; start + kFrame <= s.size(); start += kFrame) {
      for (std::size_t i = 0; i < kFrame; ++i) frame[i] = s[start + i] * window[i];
      const auto p = oracle::direct_power_spectrum(frame);
      for (std::size_t k = 0; k < p.size(); ++k) avg[k] += p[k];
    }
  }
  std::vector<double> log_f, db;
  const double bin_hz = 16000.0 / kFrame;
  for (std::size_t k = 1; k < avg.size(); ++k) {
    const double f = k * bin_hz;
    if (f < 100.0 || f > 4000.0) continue;
    log_f.push_back(std::log2(f));
    db.push_back(10.0 * std::log10(avg[k]));
  }
  EXPECT_NEAR(oracle::slope(log_f, db), -10.0 * std::log10(2.0), 1.0);
}

TEST(ClickBurst, LengthAndBand) {
  const SynthConfig cfg;
  const auto burst = click_burst(cfg, 3);
  ASSERT_EQ(burst.size(), static_cast<std::size_t>(std::ceil(8 * 0.005 * 16000)));
  // Most of the burst energy sits inside the pass band.
  std::vector<double> padded(1024, 0.0);
  std::copy(burst.begin(), burst.end(), padded.begin());
  const auto p = oracle::direct_power_spectrum(padded);
  double in_band = 0.0, total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double f = k * 16000.0 / 1024.0;
    total += p[k];
    if (f >= 2800.0 && f <= 6200.0) in_band += p[k];
  }
  EXPECT_GT(in_band / total, 0.95);
  // exponential envelope: late tail far weaker than the head
  const std::size_t q = burst.size() / 4;
  EXPECT_GT(energy(std::span(burst).first(q)), 100.0 * energy(std::span(burst).last(q)));
}

TEST(InfestedClip, VanishingRateEqualsClean) {
  SynthConfig cfg;
  cfg.click_rate = 1e-9;
  const auto detail = gen_infested_detail(cfg, 77);
  EXPECT_TRUE(detail.onsets.empty());
  const auto clean = gen_clean_clip(cfg, 77);
  EXPECT_NEAR(energy(detail.clip.samples()), energy(clean.samples()), 1e-6);
  const auto s = detail.clip.samples();
  for (std::size_t i = 0; i < s.size(); ++i) ASSERT_NEAR(s[i], clean.samples()[i], 1e-12);
}

TEST(InfestedClip, PoissonClickCount) {
  const SynthConfig cfg;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    total += static_cast<double>(gen_infested_detail(cfg, derive_seed(99, seed)).onsets.size());
  }
  const double lambda = cfg.click_rate * cfg.duration_s;
  EXPECT_NEAR(total / 200.0, lambda, 3.0 * std::sqrt(lambda / 200.0));
}

TEST(InfestedClip, ComponentsSumAndPeak) {
  const SynthConfig cfg;
  const auto d = gen_infested_detail(cfg, 5);
  EXPECT_TRUE(std::is_sorted(d.onsets.begin(), d.onsets.end()));
  EXPECT_NEAR(peak(d.clip.samples()), kPeakAmplitude, 1e-12);
  const auto s = d.clip.samples();
  for (std::size_t i = 0; i < s.size(); ++i) ASSERT_NEAR(s[i], d.noise[i] + d.clicks[i], 1e-12);
  const auto again = gen_infested_clip(cfg, 5);
  EXPECT_TRUE(std::equal(s.begin(), s.end(), again.samples().begin()));
}

// Click energy is estimated from the clip alone: energy under the click mask
// minus the noise power measured outside it.
double measured_snr_db(const InfestedDetail& d) {
  const auto s = d.clip.samples();
  std::vector<bool> mask(s.size(), false);
  for (auto onset : d.onsets) {
    for (std::size_t i = onset; i < std::min(s.size(), onset + d.click_length); ++i) mask[i] = true;
  }
  double e_in = 0.0, e_out = 0.0;
  std::size_t n_in = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (mask[i]) {
      e_in += s[i] * s[i];
      ++n_in;
    } else {
      e_out += s[i] * s[i];
    }
  }
  const double noise_power = e_out / static_cast<double>(s.size() - n_in);
  const double click_energy = e_in - noise_power * static_cast<double>(n_in);
  return 10.0 * std::log10(click_energy / (noise_power * static_cast<double>(s.size())));
}

TEST(InfestedClip, MeasuredSnrMatchesTarget) {
  for (double target : {0.0, 10.0}) {
    SynthConfig cfg;
    cfg.snr_db = target;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto d = gen_infested_detail(cfg, 300 + seed);
      ASSERT_FALSE(d.onsets.empty());
      EXPECT_NEAR(measured_snr_db(d), target, 1.0) << "seed " << seed;
      EXPECT_NEAR(10.0 * std::log10(energy(d.clicks) / energy(d.noise)), target, 1e-9);
    }
  }
}

TEST(Dataset, WritesFilesAndManifestDeterministically) {
  testsupport::TempDir a, b;
  const SynthConfig cfg;
  const auto m = gen_dataset(a.path(), 3, cfg, 11);
  gen_dataset(b.path(), 3, cfg, 11);
  ASSERT_EQ(m.entries.size(), 6u);
  const auto manifest_bytes = oracle::read_bytes((a.path() / "manifest.json").c_str());
  const auto manifest = nlohmann::json::parse(manifest_bytes.begin(), manifest_bytes.end());
  std::size_t clean = 0, infested = 0;
  for (const auto& clip : manifest.at("clips")) {
    (clip.at("label") == "clean" ? clean : infested)++;
  }
  EXPECT_EQ(clean, 3u);
  EXPECT_EQ(infested, 3u);
  for (const char* sub : {"clean", "infested"}) {
    for (int i = 0; i < 3; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "clip_%04d.wav", i);
      const auto pa = a.path() / sub / name;
      ASSERT_TRUE(std::filesystem::exists(pa)) << pa;
      EXPECT_EQ(oracle::read_bytes(pa.c_str()), oracle::read_bytes((b.path() / sub / name).c_str()));
    }
  }
  EXPECT_EQ(oracle::read_bytes((a.path() / "manifest.json").c_str()),
            oracle::read_bytes((b.path() / "manifest.json").c_str()));
  EXPECT_THROW(gen_dataset(a.path(), 0, cfg, 1), InvalidArgument);
}

TEST(Dataset, EntriesAreStableAsDatasetGrows) {
  const SynthConfig cfg;
  const auto small = gen_entries(2, cfg, 4);
  const auto large = gen_entries(3, cfg, 4);
  EXPECT_EQ(small[0].seed, large[0].seed);
  EXPECT_EQ(small[2].seed, large[3].seed);
  EXPECT_EQ(small[2].label, audio::ClipLabel::Infested);
  EXPECT_EQ(small[0].id, "clean/clip_0000");
}

TEST(Dataset, ClassesSeparableInMfccMeanSpace) {
  const SynthConfig cfg;
  const features::MfccExtractor extractor;
  const auto entries = gen_entries(15, cfg, 21);
  std::vector<std::vector<double>> means[2];
  for (const auto& e : entries) {
    means[e.label == audio::ClipLabel::Infested].push_back(
        features::mfcc_mean(extractor.frames(e.clip)).values);
  }
  std::vector<double> centroid[2];
  for (int c = 0; c < 2; ++c) {
    centroid[c].assign(40, 0.0);
    for (const auto& m : means[c]) {
      for (std::size_t j = 0; j < 40; ++j) centroid[c][j] += m[j] / means[c].size();
    }
  }
  auto dist = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - y[j]) * (x[j] - y[j]);
    return std::sqrt(s);
  };
  double spread = 0.0;
  std::size_t count = 0;
  for (int c = 0; c < 2; ++c) {
    for (const auto& m : means[c]) {
      spread += dist(m, centroid[c]);
      ++count;
    }
  }
  spread /= static_cast<double>(count);
  EXPECT_GT(dist(centroid[0], centroid[1]) / spread, 1.0);
}

}  // namespace
}  // namespace woodpest::synth
