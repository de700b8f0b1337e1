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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "woodpest/error.hpp"
#include "woodpest/nn/adam.hpp"
#include "woodpest/nn/checkpoint.hpp"
#include "woodpest/nn/gradcheck.hpp"
#include "woodpest/nn/sequential.hpp"

namespace woodpest::nn {
namespace {

using testsupport::uniform_values;

Tensor random_tensor(Shape shape, std::uint64_t seed) {
  const std::size_t n = shape_size(shape);
  return Tensor(std::move(shape), uniform_values(n, seed));
}

Tensor onehot_rows(std::size_t batch) {
  Tensor t({batch, 2});
  for (std::size_t r = 0; r < batch; ++r) t.at(r, r % 2) = 1.0;
  return t;
}

// Adam with beta/eps defaults, applied to a scalar.
struct ScalarAdam {
  double m = 0.0, v = 0.0;
  int t = 0;
  double step(double theta, double g, double lr = 1e-3) {
    ++t;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    return theta - lr * mh / (std::sqrt(vh) + 1e-8);
  }
};

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  Tensor p = random_tensor({3, 2}, 1);
  const Tensor before = p;
  std::vector<Tensor*> params{&p};
  auto state = make_adam_state(std::vector<const Tensor*>{&p});
  std::vector<Tensor> grads{Tensor({3, 2})};
  for (int i = 0; i < 5; ++i) adam_update(params, grads, state);
  EXPECT_EQ(p, before);
  EXPECT_EQ(state.step, 5u);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Tensor p({2}, std::vector<double>{1.0, -3.0});
  std::vector<Tensor*> params{&p};
  auto state = make_adam_state(std::vector<const Tensor*>{&p});
  adam_update(params, std::vector<Tensor>{Tensor({2}, std::vector<double>{0.5, -20.0})}, state);
  EXPECT_NEAR(p[0], 1.0 - 1e-3, 1e-10);
  EXPECT_NEAR(p[1], -3.0 + 1e-3, 1e-10);
}

TEST(Adam, QuadraticMatchesScalarRecurrence) {
  Tensor p({1}, std::vector<double>{2.0});
  std::vector<Tensor*> params{&p};
  auto state = make_adam_state(std::vector<const Tensor*>{&p}, AdamConfig{0.1, 0.9, 0.999, 1e-8});
  ScalarAdam ref;
  double theta = 2.0;
  for (int i = 0; i < 3; ++i) {
    adam_update(params, std::vector<Tensor>{Tensor({1}, std::vector<double>{2.0 * p[0]})}, state);
    theta = ref.step(theta, 2.0 * theta, 0.1);
    EXPECT_NEAR(p[0], theta, 1e-14);
  }
  EXPECT_LT(p[0], 2.0);
}

TEST(Adam, RejectsNonFiniteGradients) {
  Tensor p({2});
  std::vector<Tensor*> params{&p};
  auto state = make_adam_state(std::vector<const Tensor*>{&p});
  EXPECT_THROW(adam_update(params,
                           std::vector<Tensor>{Tensor({2}, std::vector<double>{0.0, NAN})}, state),
               TrainingError);
  EXPECT_THROW(adam_update(params, std::vector<Tensor>{}, state), ShapeError);
}

TEST(GradCheck, LinearModelIsExact) {
  Sequential g({5}, {LayerSpec::dense(2), LayerSpec::softmax()});
  g.initialize(3);
  EXPECT_LT(finite_diff_check(g, random_tensor({4, 5}, 4), onehot_rows(4)), 1e-8);
}

TEST(GradCheck, DetectsWrongGradients) {
  Sequential g({5}, {LayerSpec::dense(2), LayerSpec::softmax()});
  g.initialize(5);
  const Tensor x = random_tensor({4, 5}, 6);
  auto analytic = analytic_gradients(g, x, onehot_rows(4));
  const auto numeric = numeric_gradients(g, x, onehot_rows(4));
  for (auto& t : analytic) {
    for (double& v : t.values()) v *= 2.0;
  }
  EXPECT_NEAR(compare_gradients(analytic, numeric), 1.0 / 3.0, 1e-3);
}

TEST(GradCheck, MixedGraphPasses) {
  Sequential g({6, 3}, {LayerSpec::conv1d(4, 3), LayerSpec::relu(), LayerSpec::maxpool1d(2),
                        LayerSpec::lstm(3), LayerSpec::dropout(0.5), LayerSpec::dense(2),
                        LayerSpec::softmax()});
  g.initialize(7);
  EXPECT_LT(finite_diff_check(g, random_tensor({2, 6, 3}, 8), onehot_rows(2)), 1e-4);
}

TEST(Sequential, ShapesAndParameterCounts) {
  Sequential g({10, 4}, {LayerSpec::conv1d(6, 3), LayerSpec::maxpool1d(2), LayerSpec::lstm(5),
                         LayerSpec::dense(2), LayerSpec::softmax()});
  EXPECT_EQ(g.output_shape(), (Shape{2}));
  // conv 3*4*6+6, lstm 4*(6*5+5*5+5), dense 5*2+2
  EXPECT_EQ(g.parameter_count(), 78u + 240u + 12u);
  g.initialize(1);
  const auto y = g.forward(random_tensor({3, 10, 4}, 2));
  ASSERT_EQ(y.shape(), (Shape{3, 2}));
  for (std::size_t r = 0; r < 3; ++r) EXPECT_NEAR(y.at(r, 0) + y.at(r, 1), 1.0, 1e-12);
  EXPECT_THROW(g.forward(random_tensor({3, 10, 5}, 2)), ShapeError);
  EXPECT_THROW(Sequential({4}, {LayerSpec::conv1d(2, 3)}), ShapeError);
}

TEST(Sequential, InitializationIsSeededAndGlorotBounded) {
  Sequential a({30}, {LayerSpec::dense(20)});
  Sequential b = a;
  a.initialize(11);
  b.initialize(11);
  EXPECT_EQ(a.flat_parameters(), b.flat_parameters());
  b.initialize(12);
  EXPECT_NE(a.flat_parameters(), b.flat_parameters());
  const double limit = std::sqrt(6.0 / 50.0);
  const auto* w = a.parameters()[0];
  double sq = 0.0;
  for (double v : w->values()) {
    EXPECT_LE(std::abs(v), limit);
    sq += v * v;
  }
  // variance of U(-l, l) is l^2 / 3
  EXPECT_NEAR(sq / static_cast<double>(w->size()), limit * limit / 3.0, 0.2 * limit * limit / 3.0);
  for (double v : a.parameters()[1]->values()) EXPECT_EQ(v, 0.0);
}

TEST(Sequential, LstmForgetBiasStartsAtOne) {
  Sequential g({4, 2}, {LayerSpec::lstm(3)});
  g.initialize(9);
  const auto* b = g.parameters()[2];
  ASSERT_EQ(b->size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ((*b)[i], (i / 3 == 1) ? 1.0 : 0.0);
}

TEST(Sequential, FlatParameterRoundTrip) {
  Sequential g({4, 2}, {LayerSpec::lstm(3), LayerSpec::dense(2)});
  g.initialize(3);
  const auto flat = g.flat_parameters();
  EXPECT_EQ(flat.size(), g.parameter_count());
  Sequential h = g;
  h.initialize(4);
  h.set_flat_parameters(flat);
  EXPECT_EQ(h.flat_parameters(), flat);
  EXPECT_THROW(h.set_flat_parameters(std::vector<double>(3)), ShapeError);
}

Checkpoint sample_checkpoint() {
  Sequential g({6, 3}, {LayerSpec::conv1d(4, 3), LayerSpec::relu(), LayerSpec::lstm(3),
                        LayerSpec::dropout(0.25), LayerSpec::dense(2), LayerSpec::softmax()});
  g.initialize(21);
  return make_checkpoint(g, "toy", 21, {0.5, 1.5, -2.0}, {1.0, 2.0, 3.0});
}

TEST(Checkpoint, EncodeDecodeRoundTrip) {
  const auto ckpt = sample_checkpoint();
  const auto bytes = encode_checkpoint(ckpt);
  const auto back = decode_checkpoint(bytes);
  EXPECT_EQ(back, ckpt);
  EXPECT_EQ(encode_checkpoint(back), bytes);
  const Tensor x = random_tensor({2, 6, 3}, 22);
  EXPECT_EQ(back.build().forward(x), ckpt.build().forward(x));
}

TEST(Checkpoint, FileRoundTripAndArchitectureCheck) {
  testsupport::TempDir dir;
  const auto path = dir.path() / "toy.ckpt";
  const auto ckpt = sample_checkpoint();
  save_checkpoint(ckpt, path);
  EXPECT_EQ(load_checkpoint(path), ckpt);
  EXPECT_EQ(load_checkpoint(path, "toy"), ckpt);
  EXPECT_THROW(load_checkpoint(path, "cnn"), FormatError);
  EXPECT_THROW(load_checkpoint(dir.path() / "missing.ckpt"), IoError);
}

TEST(Checkpoint, RejectsCorruptImages) {
  const auto bytes = encode_checkpoint(sample_checkpoint());
  auto bad_magic = bytes;
  bad_magic[0] ^= 0xFF;
  EXPECT_THROW(decode_checkpoint(bad_magic), FormatError);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 8);
  EXPECT_THROW(decode_checkpoint(truncated), FormatError);
  EXPECT_THROW(decode_checkpoint(std::vector<std::uint8_t>(5)), FormatError);
  auto extended = bytes;
  extended.push_back(0);
  EXPECT_THROW(decode_checkpoint(extended), FormatError);
}

}  // namespace
}  // namespace woodpest::nn
