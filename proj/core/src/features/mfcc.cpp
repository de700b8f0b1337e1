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

#include "woodpest/features/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "woodpest/error.hpp"
#include "woodpest/features/fft.hpp"

namespace woodpest::features {
namespace {

constexpr double kMelBreakHz = 1000.0;
constexpr double kMelBreak = 15.0;          // 1000 Hz / (200/3)
constexpr double kHzPerMelLinear = 200.0 / 3.0;
const double kLogStep = std::log(6.4) / 27.0;

/// numpy-style "reflect" index (edge sample not repeated).
std::size_t reflect_index(std::ptrdiff_t q, std::size_t len) {
  if (len == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (len - 1));
  std::ptrdiff_t r = q % period;
  if (r < 0) r += period;
  if (r >= static_cast<std::ptrdiff_t>(len)) r = period - r;
  return static_cast<std::size_t>(r);
}

std::size_t frame_count(std::size_t num_samples, std::size_t hop) {
  return 1 + num_samples / hop;
}

/// Writes windowed frame t of the centered, reflect-padded signal into out.
void fill_frame(std::span<const double> signal, std::size_t t, const FeatureConfig& cfg,
                std::span<const double> window, std::span<double> out) {
  if (signal.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const auto pad = static_cast<std::ptrdiff_t>(cfg.fft_size / 2);
  const auto start = static_cast<std::ptrdiff_t>(t * cfg.hop) - pad;
  for (std::size_t n = 0; n < cfg.fft_size; ++n) {
    const std::ptrdiff_t q = start + static_cast<std::ptrdiff_t>(n);
    out[n] = signal[reflect_index(q, signal.size())] * window[n];
  }
}

}  // namespace

void FeatureConfig::validate(int sample_rate) const {
  if (!is_power_of_two(fft_size)) throw InvalidArgument("fft_size must be a power of two");
  if (hop == 0) throw InvalidArgument("hop must be positive");
  if (n_mels == 0) throw InvalidArgument("n_mels must be positive");
  if (n_mfcc == 0 || n_mfcc > n_mels) throw InvalidArgument("n_mfcc must be in [1, n_mels]");
  if (!(fmin >= 0.0) || !(fmin < fmax)) throw InvalidArgument("require 0 <= fmin < fmax");
  if (fmax > sample_rate / 2.0) {
    throw InvalidArgument("fmax " + std::to_string(fmax) + " Hz exceeds Nyquist for rate " +
                          std::to_string(sample_rate));
  }
  if (!(log_floor > 0.0)) throw InvalidArgument("log_floor must be positive");
}

MfccMatrix::MfccMatrix(std::size_t frames, std::size_t coeffs, std::vector<double> values,
                       std::vector<double> frame_times)
    : frames_(frames),
      coeffs_(coeffs),
      values_(std::move(values)),
      frame_times_(std::move(frame_times)) {
  if (values_.size() != frames_ * coeffs_) {
    throw ShapeError("mfcc matrix: " + std::to_string(values_.size()) + " values for " +
                     std::to_string(frames_) + "x" + std::to_string(coeffs_));
  }
  if (!frame_times_.empty() && frame_times_.size() != frames_) {
    throw ShapeError("mfcc matrix: frame_times length differs from frame count");
  }
}

std::vector<double> hann_window(std::size_t n) {
  if (n == 0) throw InvalidArgument("window length must be at least 1");
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(n));
  }
  return w;
}

std::vector<std::vector<double>> frame_signal(const audio::AudioClip& clip,
                                              const FeatureConfig& cfg) {
  cfg.validate(clip.sample_rate());
  const auto window = hann_window(cfg.fft_size);
  const std::size_t count = frame_count(clip.size(), cfg.hop);
  std::vector<std::vector<double>> frames(count, std::vector<double>(cfg.fft_size));
  for (std::size_t t = 0; t < count; ++t) {
    fill_frame(clip.samples(), t, cfg, window, frames[t]);
  }
  return frames;
}

double hz_to_mel(double hz) {
  if (hz < 0.0 || std::isnan(hz)) throw InvalidArgument("frequency must be non-negative");
  if (hz < kMelBreakHz) return hz / kHzPerMelLinear;
  return kMelBreak + std::log(hz / kMelBreakHz) / kLogStep;
}

double mel_to_hz(double mel) {
  if (mel < 0.0 || std::isnan(mel)) throw InvalidArgument("mel value must be non-negative");
  if (mel < kMelBreak) return mel * kHzPerMelLinear;
  return kMelBreakHz * std::exp(kLogStep * (mel - kMelBreak));
}

Matrix mel_filterbank(const FeatureConfig& cfg, int sample_rate) {
  cfg.validate(sample_rate);
  const std::size_t bins = cfg.fft_size / 2 + 1;

  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.fmax);
  std::vector<double> edges(cfg.n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double mel =
        mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(cfg.n_mels + 1);
    edges[i] = mel_to_hz(mel);
  }

  Matrix fb{cfg.n_mels, bins, std::vector<double>(cfg.n_mels * bins, 0.0)};
  for (std::size_t m = 0; m < cfg.n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    const double scale = 2.0 / (hi - lo);
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(cfg.fft_size);
      const double rising = (f - lo) / (mid - lo);
      const double falling = (hi - f) / (hi - mid);
      const double w = std::max(0.0, std::min(rising, falling));
      fb.values[m * bins + k] = w * scale;
    }
  }
  return fb;
}

double power_to_db(double power, double floor) {
  return 10.0 * std::log10(std::max(power, floor));
}

std::vector<double> dct2_ortho(std::span<const double> x, std::size_t keep) {
  const std::size_t n = x.size();
  if (keep < 1 || keep > n) {
    throw InvalidArgument("dct keep=" + std::to_string(keep) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  std::vector<double> out(keep);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < keep; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) *
                             static_cast<double>(k) / static_cast<double>(n));
    }
    out[k] = (k == 0 ? s0 : sk) * acc;
  }
  return out;
}

MfccExtractor::MfccExtractor(FeatureConfig cfg, int sample_rate)
    : cfg_(cfg), sample_rate_(sample_rate) {
  cfg_.validate(sample_rate_);
  window_ = hann_window(cfg_.fft_size);
  filterbank_ = mel_filterbank(cfg_, sample_rate_);

  bands_.resize(cfg_.n_mels);
  for (std::size_t m = 0; m < cfg_.n_mels; ++m) {
    const auto row = filterbank_.row(m);
    const auto first = std::find_if(row.begin(), row.end(), [](double w) { return w > 0.0; });
    if (first == row.end()) {
      bands_[m] = {1, 0};  // empty range
      continue;
    }
    const auto last = std::find_if(row.rbegin(), row.rend(), [](double w) { return w > 0.0; });
    bands_[m] = {static_cast<std::size_t>(first - row.begin()),
                 static_cast<std::size_t>(row.rend() - last) - 1};
  }

  const std::size_t n = cfg_.n_mels;
  dct_basis_.resize(cfg_.n_mfcc * n);
  for (std::size_t k = 0; k < cfg_.n_mfcc; ++k) {
    const double s = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      dct_basis_[k * n + i] =
          s * std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) *
                       static_cast<double>(k) / static_cast<double>(n));
    }
  }
}

MfccMatrix MfccExtractor::frames(const audio::AudioClip& clip) const {
  if (clip.sample_rate() != sample_rate_) {
    throw InvalidArgument("clip rate " + std::to_string(clip.sample_rate()) +
                          " Hz differs from extractor rate " + std::to_string(sample_rate_));
  }
  const std::size_t count = frame_count(clip.size(), cfg_.hop);
  const std::size_t bins = cfg_.fft_size / 2 + 1;
  const std::size_t n_mels = cfg_.n_mels;
  const std::size_t n_mfcc = cfg_.n_mfcc;

  std::vector<double> values(count * n_mfcc);
  std::vector<double> times(count);
  std::vector<double> frame(cfg_.fft_size);
  std::vector<std::complex<double>> spectrum(cfg_.fft_size);
  std::vector<double> power(bins);
  std::vector<double> mel_db(n_mels);

  for (std::size_t t = 0; t < count; ++t) {
    fill_frame(clip.samples(), t, cfg_, window_, frame);
    std::copy(frame.begin(), frame.end(), spectrum.begin());
    fft_inplace(spectrum);
    for (std::size_t k = 0; k < bins; ++k) power[k] = std::norm(spectrum[k]);

    for (std::size_t m = 0; m < n_mels; ++m) {
      double energy = 0.0;
      const auto row = filterbank_.row(m);
      for (std::size_t k = bands_[m].first; k <= bands_[m].last; ++k) energy += row[k] * power[k];
      mel_db[m] = power_to_db(energy, cfg_.log_floor);
    }

    double* out = values.data() + t * n_mfcc;
    for (std::size_t k = 0; k < n_mfcc; ++k) {
      const double* basis = dct_basis_.data() + k * n_mels;
      double acc = 0.0;
      for (std::size_t i = 0; i < n_mels; ++i) acc += basis[i] * mel_db[i];
      out[k] = acc;
    }
    times[t] = static_cast<double>(t * cfg_.hop) / sample_rate_;
  }
  return MfccMatrix(count, n_mfcc, std::move(values), std::move(times));
}

MfccMatrix mfcc_frames(const audio::AudioClip& clip, const FeatureConfig& cfg) {
  return MfccExtractor(cfg, clip.sample_rate()).frames(clip);
}

MfccVector mfcc_mean(const MfccMatrix& matrix) {
  if (matrix.empty()) throw InvalidArgument("cannot average an empty MFCC matrix");
  MfccVector mean{std::vector<double>(matrix.coeffs(), 0.0)};
  for (std::size_t t = 0; t < matrix.frames(); ++t) {
    const auto row = matrix.row(t);
    for (std::size_t c = 0; c < matrix.coeffs(); ++c) mean.values[c] += row[c];
  }
  for (double& v : mean.values) v /= static_cast<double>(matrix.frames());
  return mean;
}

}  // namespace woodpest::features
