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

#include "woodpest/models/model_zoo.hpp"
#include "woodpest/models/trainer.hpp"
#include "woodpest/nn/ops.hpp"

namespace {

using woodpest::nn::Tensor;

Tensor random_tensor(woodpest::nn::Shape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Tensor t(std::move(shape));
  for (auto& v : t.values()) v = nd(rng);
  return t;
}

void BM_DenseForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_tensor({32, n}, 1);
  const auto w = random_tensor({n, n}, 2);
  const Tensor b({n});
  for (auto _ : state) benchmark::DoNotOptimize(woodpest::nn::dense_forward(x, w, b));
}
BENCHMARK(BM_DenseForward)->Arg(64)->Arg(256);

void BM_Conv1dForward(benchmark::State& state) {
  const auto x = random_tensor({32, 157, 40}, 3);
  const auto k = random_tensor({5, 40, 32}, 4);
  const Tensor b({32});
  for (auto _ : state) benchmark::DoNotOptimize(woodpest::nn::conv1d_forward(x, k, b));
}
BENCHMARK(BM_Conv1dForward)->Unit(benchmark::kMillisecond);

void BM_LstmSequence(benchmark::State& state) {
  const auto x = random_tensor({32, 39, 64}, 5);
  const woodpest::nn::LstmParams p{random_tensor({64, 256}, 6), random_tensor({64, 256}, 7),
                                   Tensor({256})};
  for (auto _ : state) {
    const auto fwd = woodpest::nn::lstm_sequence_forward(x, p);
    if (state.range(0) != 0) {
      benchmark::DoNotOptimize(
          woodpest::nn::lstm_sequence_backward(x, p, fwd, random_tensor({32, 64}, 8)));
    }
    benchmark::DoNotOptimize(fwd.last_hidden().data());
  }
}
BENCHMARK(BM_LstmSequence)->ArgName("backward")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  const auto kind = woodpest::models::kAllModelKinds[static_cast<std::size_t>(state.range(0))];
  woodpest::models::LabeledInputs in;
  for (std::size_t i = 0; i < 64; ++i) {
    woodpest::nn::Shape shape = woodpest::models::input_shape(kind);
    in.inputs.push_back(random_tensor(shape, 100 + i));
    in.labels.push_back(i % 2 ? woodpest::audio::ClipLabel::Infested
                              : woodpest::audio::ClipLabel::Clean);
  }
  woodpest::models::TrainConfig cfg;
  cfg.epochs = 1;
  auto graph = woodpest::models::build_model(kind, 1);
  for (auto _ : state) benchmark::DoNotOptimize(woodpest::models::train(graph, in, nullptr, cfg));
  state.SetLabel(std::string(woodpest::models::to_string(kind)) + ", 64 samples");
}
BENCHMARK(BM_TrainEpoch)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
