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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "woodpest/ingest/crc32.hpp"
#include "woodpest/ingest/frame.hpp"

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n) {
  std::mt19937_64 rng(1);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

void BM_Crc32(benchmark::State& state) {
  const auto data = random_bytes(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(woodpest::ingest::crc32(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Crc32)->Range(64, 1 << 20);

void BM_EncodeFrame(benchmark::State& state) {
  const woodpest::ingest::DeviceFrame frame{1, 0, 16000, random_bytes(5000)};
  for (auto _ : state) benchmark::DoNotOptimize(woodpest::ingest::encode_frame(frame));
  state.SetBytesProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_EncodeFrame);

void BM_DecodeFrame(benchmark::State& state) {
  const auto bytes = woodpest::ingest::encode_frame({1, 0, 16000, random_bytes(5000)});
  for (auto _ : state) benchmark::DoNotOptimize(woodpest::ingest::decode_frame(bytes));
  state.SetBytesProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_DecodeFrame);

}  // namespace

BENCHMARK_MAIN();
