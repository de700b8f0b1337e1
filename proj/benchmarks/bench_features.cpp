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

#include <complex>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "woodpest/features/fft.hpp"
#include "woodpest/features/mfcc.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = noise(n);
  std::vector<std::complex<double>> buf(n);
  for (auto _ : state) {
    for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
    woodpest::features::fft_inplace(buf);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(256, 16384);

void BM_PowerSpectrum2048(benchmark::State& state) {
  const auto x = noise(2048);
  for (auto _ : state) benchmark::DoNotOptimize(woodpest::features::power_spectrum(x));
}
BENCHMARK(BM_PowerSpectrum2048);

void BM_MfccClip(benchmark::State& state) {
  const woodpest::features::MfccExtractor extractor;
  const woodpest::audio::AudioClip clip(noise(80000), 16000);
  for (auto _ : state) benchmark::DoNotOptimize(extractor.frames(clip));
  state.SetLabel("5 s at 16 kHz");
}
BENCHMARK(BM_MfccClip)->Unit(benchmark::kMillisecond);

void BM_MelFilterbank(benchmark::State& state) {
  const woodpest::features::FeatureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(woodpest::features::mel_filterbank(cfg, 16000));
}
BENCHMARK(BM_MelFilterbank)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
