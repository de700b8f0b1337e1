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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

namespace oracle {

std::vector<double> reflect_pad(std::span<const double> x, std::size_t pad) {
  const auto n = static_cast<long>(x.size());
  std::vector<double> out;
  for (long i = -static_cast<long>(pad); i < n + static_cast<long>(pad); ++i) {
    long j = i;
    // Bounce between the ends until inside.
    while (j < 0 || j >= n) {
      if (j < 0) j = -j;
      if (j >= n) j = 2 * (n - 1) - j;
    }
    out.push_back(x[static_cast<std::size_t>(j)]);
  }
  return out;
}

std::vector<double> direct_power_spectrum(std::span<const double> frame) {
  const std::size_t n = frame.size();
  // Twiddles e^{-2 pi i r / n}, each evaluated directly from its angle.
  static thread_local std::vector<double> cos_table;
  static thread_local std::vector<double> sin_table;
  if (cos_table.size() != n) {
    cos_table.resize(n);
    sin_table.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> * r / n;
      cos_table[r] = static_cast<double>(std::cos(ang));
      sin_table[r] = static_cast<double>(std::sin(ang));
    }
  }
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0;
    double im = 0.0;
    std::size_t r = 0;  // (k * t) mod n
    for (std::size_t t = 0; t < n; ++t) {
      re += frame[t] * cos_table[r];
      im += frame[t] * sin_table[r];
      r += k;
      if (r >= n) r -= n;
    }
    out[k] = re * re + im * im;
  }
  return out;
}

double slaney_mel(double hz) {
  if (hz < 1000.0) return hz / (200.0 / 3.0);
  return 15.0 + std::log(hz / 1000.0) / (std::log(6.4) / 27.0);
}

double slaney_hz(double mel) {
  if (mel < 15.0) return mel * (200.0 / 3.0);
  return 1000.0 * std::exp((mel - 15.0) * (std::log(6.4) / 27.0));
}

double triangle_weight(std::size_t band, double f, std::size_t n_mels, double fmin, double fmax) {
  const double mlo = slaney_mel(fmin);
  const double mhi = slaney_mel(fmax);
  auto edge = [&](std::size_t i) {
    return slaney_hz(mlo + (mhi - mlo) * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  };
  const double lo = edge(band);
  const double mid = edge(band + 1);
  const double hi = edge(band + 2);
  double w = 0.0;
  if (f > lo && f <= mid) {
    w = (f - lo) / (mid - lo);
  } else if (f > mid && f < hi) {
    w = (hi - f) / (hi - mid);
  }
  return w * 2.0 / (hi - lo);
}

std::vector<double> direct_dct(std::span<const double> x, std::size_t keep) {
  const std::size_t n = x.size();
  std::vector<double> out(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi_v<long double> * (i + 0.5L) * k / n);
    }
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    out[k] = scale * static_cast<double>(acc);
  }
  return out;
}

Matrix mfcc(std::span<const double> samples, double sample_rate, std::size_t fft_size,
            std::size_t hop, std::size_t n_mels, double fmin, double fmax, std::size_t n_mfcc) {
  std::vector<double> padded;
  if (samples.empty()) {
    padded.assign(fft_size, 0.0);
  } else {
    padded = reflect_pad(samples, fft_size / 2);
  }
  const std::size_t frames = 1 + samples.size() / hop;
  std::vector<double> window(fft_size);
  for (std::size_t i = 0; i < fft_size; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / fft_size);
  }
  // Weights evaluated per (band, bin) straight from the triangle definition.
  Matrix weights(n_mels, std::vector<double>(fft_size / 2 + 1));
  for (std::size_t m = 0; m < n_mels; ++m) {
    for (std::size_t k = 0; k <= fft_size / 2; ++k) {
      weights[m][k] = triangle_weight(m, k * sample_rate / fft_size, n_mels, fmin, fmax);
    }
  }
  Matrix out;
  std::vector<double> frame(fft_size);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < fft_size; ++i) {
      const std::size_t idx = t * hop + i;
      frame[i] = (idx < padded.size() ? padded[idx] : 0.0) * window[i];
    }
    const auto power = direct_power_spectrum(frame);
    std::vector<double> db(n_mels);
    for (std::size_t m = 0; m < n_mels; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k) e += weights[m][k] * power[k];
      db[m] = 10.0 * std::log10(std::max(e, 1e-10));
    }
    out.push_back(direct_dct(db, n_mfcc));
  }
  return out;
}

std::vector<double> matmul(std::span<const double> a, std::span<const double> b, std::size_t m,
                           std::size_t k, std::size_t n) {
  std::vector<double> c(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a[i * k + p] * b[p * n + j];
      c[i * n + j] = acc;
    }
  }
  return c;
}

std::vector<double> conv1d(std::span<const double> x, std::span<const double> kernel,
                           std::span<const double> bias, std::size_t batch, std::size_t time,
                           std::size_t cin, std::size_t k, std::size_t cout) {
  const long half = static_cast<long>(k - 1) / 2;
  std::vector<double> y(batch * time * cout);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < time; ++t) {
      for (std::size_t co = 0; co < cout; ++co) {
        double acc = bias[co];
        for (std::size_t dt = 0; dt < k; ++dt) {
          const long src = static_cast<long>(t) + static_cast<long>(dt) - half;
          if (src < 0 || src >= static_cast<long>(time)) continue;
          for (std::size_t ci = 0; ci < cin; ++ci) {
            acc += x[(b * time + static_cast<std::size_t>(src)) * cin + ci] *
                   kernel[(dt * cin + ci) * cout + co];
          }
        }
        y[(b * time + t) * cout + co] = acc;
      }
    }
  }
  return y;
}

std::vector<double> maxpool1d(std::span<const double> x, std::size_t batch, std::size_t time,
                              std::size_t channels, std::size_t width) {
  const std::size_t out_t = time / width;
  std::vector<double> y(batch * out_t * channels);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < out_t; ++t) {
      for (std::size_t c = 0; c < channels; ++c) {
        double best = -INFINITY;
        for (std::size_t w = 0; w < width; ++w) {
          best = std::max(best, x[(b * time + t * width + w) * channels + c]);
        }
        y[(b * out_t + t) * channels + c] = best;
      }
    }
  }
  return y;
}

MeanStd column_stats(const Matrix& rows) {
  const std::size_t cols = rows.front().size();
  MeanStd s{std::vector<double>(cols, 0.0), std::vector<double>(cols, 0.0)};
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < cols; ++j) s.mean[j] += r[j];
  }
  for (auto& m : s.mean) m /= static_cast<double>(rows.size());
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < cols; ++j) s.std[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
  }
  for (auto& v : s.std) v = std::sqrt(v / static_cast<double>(rows.size()));
  return s;
}

double slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::vector<std::uint8_t> read_bytes(const char* path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace oracle
