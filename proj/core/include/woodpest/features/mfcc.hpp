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
#include <span>
#include <vector>

#include "woodpest/audio/clip.hpp"

namespace woodpest::features {

/// STFT / mel / cepstrum settings. Defaults are the canonical pipeline.
struct FeatureConfig {
  std::size_t fft_size = 2048;
  std::size_t hop = 512;
  std::size_t n_mels = 128;
  double fmin = 0.0;
  double fmax = 8000.0;
  std::size_t n_mfcc = 40;
  double log_floor = 1e-10;

  /// Throws InvalidArgument when the config cannot be used at sample_rate.
  void validate(int sample_rate) const;
};

/// T x n_mfcc cepstral frames, row-major.
class MfccMatrix {
 public:
  MfccMatrix() = default;
  MfccMatrix(std::size_t frames, std::size_t coeffs, std::vector<double> values,
             std::vector<double> frame_times = {});

  std::size_t frames() const { return frames_; }
  std::size_t coeffs() const { return coeffs_; }
  bool empty() const { return frames_ == 0; }
  double at(std::size_t t, std::size_t c) const { return values_[t * coeffs_ + c]; }
  std::span<const double> row(std::size_t t) const {
    return std::span<const double>(values_).subspan(t * coeffs_, coeffs_);
  }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  /// Center time in seconds of each frame (empty when unknown).
  std::span<const double> frame_times() const { return frame_times_; }

  friend bool operator==(const MfccMatrix&, const MfccMatrix&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t coeffs_ = 0;
  std::vector<double> values_;
  std::vector<double> frame_times_;
};

/// Time-averaged MFCCs, one value per coefficient.
struct MfccVector {
  std::vector<double> values;
};

/// Row-major dense matrix used for filterbanks.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * cols, cols);
  }
};

/// Periodic Hann: w[k] = 0.5 - 0.5 cos(2 pi k / n).
std::vector<double> hann_window(std::size_t n);

/// Centered framing: reflect-pad by fft_size/2 on both ends, take a frame
/// every hop samples, and apply the Hann window. Returns
/// 1 + floor(len / hop) frames of fft_size samples each; an empty clip
/// yields one zero frame.
std::vector<std::vector<double>> frame_signal(const audio::AudioClip& clip,
                                              const FeatureConfig& cfg);

/// Slaney mel scale: linear (3 hz / 200) below 1 kHz, logarithmic above.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// n_mels x (fft_size/2 + 1) area-normalized triangular filters.
Matrix mel_filterbank(const FeatureConfig& cfg, int sample_rate);

/// 10 log10(max(power, floor)); no top-end clamp.
double power_to_db(double power, double floor = 1e-10);

/// Orthonormal DCT-II, first `keep` coefficients.
std::vector<double> dct2_ortho(std::span<const double> x, std::size_t keep);

/// Precomputes window, filterbank and DCT basis for one (config, rate) pair.
/// Immutable after construction; share freely across threads.
class MfccExtractor {
 public:
  explicit MfccExtractor(FeatureConfig cfg = {},
                         int sample_rate = audio::kCanonicalSampleRate);

  const FeatureConfig& config() const { return cfg_; }
  int sample_rate() const { return sample_rate_; }
  const Matrix& filterbank() const { return filterbank_; }

  /// Throws InvalidArgument if the clip's rate differs from the extractor's.
  MfccMatrix frames(const audio::AudioClip& clip) const;

 private:
  struct Band {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
  };

  FeatureConfig cfg_;
  int sample_rate_;
  std::vector<double> window_;
  Matrix filterbank_;
  std::vector<Band> bands_;
  std::vector<double> dct_basis_;  // n_mfcc x n_mels
};

/// Full pipeline: frames -> power spectrum -> mel -> dB -> DCT.
MfccMatrix mfcc_frames(const audio::AudioClip& clip, const FeatureConfig& cfg = {});

/// Arithmetic mean over frames. Throws InvalidArgument on an empty matrix.
MfccVector mfcc_mean(const MfccMatrix& matrix);

}  // namespace woodpest::features
