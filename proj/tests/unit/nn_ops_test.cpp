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
#include <functional>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_support.hpp"
#include "woodpest/error.hpp"
#include "woodpest/nn/gradcheck.hpp"
#include "woodpest/nn/ops.hpp"

namespace woodpest::nn {
namespace {

using testsupport::uniform_values;

Tensor random_tensor(Shape shape, std::uint64_t seed, double scale = 1.0) {
  const std::size_t n = shape_size(shape);
  return Tensor(std::move(shape), uniform_values(n, seed, -scale, scale));
}

double dot(const Tensor& a, const Tensor& b) {
  return std::inner_product(a.values().begin(), a.values().end(), b.values().begin(), 0.0);
}

// Max relative error of `analytic` against central differences of
// loss(t) with respect to every entry of t.
double check_against_numeric(Tensor& t, const std::function<double()>& loss,
                             const Tensor& analytic, double eps = 1e-5) {
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double saved = t[i];
    t[i] = saved + eps;
    const double up = loss();
    t[i] = saved - eps;
    const double down = loss();
    t[i] = saved;
    worst = std::max(worst, relative_error(analytic[i], (up - down) / (2.0 * eps)));
  }
  return worst;
}

TEST(Tensor, ShapeBookkeeping) {
  Tensor t({2, 3}, 1.5);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.rank(), 2u);
  EXPECT_EQ(t.at(1, 2), 1.5);
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
  EXPECT_THROW(t.reshaped({4}), ShapeError);
  EXPECT_EQ(t.reshaped({3, 2}).shape(), (Shape{3, 2}));
  t[0] = std::nan("");
  EXPECT_FALSE(t.all_finite());
}

TEST(Dense, IdentityAndBiasOnly) {
  const Tensor x = random_tensor({3, 4}, 1);
  Tensor eye({4, 4});
  for (std::size_t i = 0; i < 4; ++i) eye.at(i, i) = 1.0;
  EXPECT_EQ(dense_forward(x, eye, Tensor({4})), x);

  const Tensor b({2}, std::vector<double>{0.25, -7.0});
  const auto y = dense_forward(x, Tensor({4, 2}), b);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(y.at(r, 0), 0.25);
    EXPECT_EQ(y.at(r, 1), -7.0);
  }
}

TEST(Dense, MatchesLoopOracle) {
  const Tensor x = random_tensor({3, 4}, 2);
  const Tensor w = random_tensor({4, 2}, 3);
  const Tensor b = random_tensor({2}, 4);
  const auto y = dense_forward(x, w, b);
  const auto ref = oracle::matmul(x.values(), w.values(), 3, 4, 2);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(y.at(r, c), ref[r * 2 + c] + b[c], 1e-12);
  }
  EXPECT_THROW(dense_forward(x, Tensor({5, 2}), b), ShapeError);
  EXPECT_THROW(dense_forward(x, w, Tensor({3})), ShapeError);
}

TEST(Dense, GradientsMatchDefinitions) {
  Tensor x = random_tensor({3, 4}, 5);
  Tensor w = random_tensor({4, 2}, 6);
  Tensor b = random_tensor({2}, 7);
  const Tensor r = random_tensor({3, 2}, 8);
  const auto g = dense_backward(x, w, r);
  const auto ref_dx = oracle::matmul(r.values(), std::vector<double>{w[0], w[2], w[4], w[6], w[1], w[3], w[5], w[7]}, 3, 2, 4);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(g.dx[i], ref_dx[i], 1e-12);
  for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(g.db[c], r.at(0, c) + r.at(1, c) + r.at(2, c), 1e-12);
  auto loss = [&] { return dot(dense_forward(x, w, b), r); };
  EXPECT_LT(check_against_numeric(w, loss, g.dw), 1e-6);
  EXPECT_LT(check_against_numeric(x, loss, g.dx), 1e-6);
}

TEST(Conv1d, PointwiseIdentity) {
  const Tensor x = random_tensor({2, 5, 3}, 9);
  Tensor k({1, 3, 3});
  for (std::size_t c = 0; c < 3; ++c) k.at(0, c, c) = 1.0;
  EXPECT_EQ(conv1d_forward(x, k, Tensor({3})), x);
}

TEST(Conv1d, ZeroInputGivesBias) {
  const Tensor b({2}, std::vector<double>{1.0, -2.0});
  const auto y = conv1d_forward(Tensor({1, 6, 3}), random_tensor({3, 3, 2}, 10), b);
  for (std::size_t t = 0; t < 6; ++t) {
    EXPECT_EQ(y.at(0, t, 0), 1.0);
    EXPECT_EQ(y.at(0, t, 1), -2.0);
  }
}

TEST(Conv1d, MatchesLoopOracleAndRejectsEvenKernels) {
  const Tensor x = random_tensor({2, 7, 3}, 11);
  const Tensor k = random_tensor({5, 3, 4}, 12);
  const Tensor b = random_tensor({4}, 13);
  const auto y = conv1d_forward(x, k, b);
  ASSERT_EQ(y.shape(), (Shape{2, 7, 4}));
  const auto ref = oracle::conv1d(x.values(), k.values(), b.values(), 2, 7, 3, 5, 4);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(y[i], ref[i], 1e-12);
  EXPECT_THROW(conv1d_forward(x, random_tensor({4, 3, 4}, 1), b), InvalidArgument);
}

TEST(Conv1d, GradientsMatchFiniteDifferences) {
  Tensor x = random_tensor({2, 6, 3}, 14);
  Tensor k = random_tensor({3, 3, 2}, 15);
  Tensor b = random_tensor({2}, 16);
  const Tensor r = random_tensor({2, 6, 2}, 17);
  const auto g = conv1d_backward(x, k, r);
  auto loss = [&] { return dot(conv1d_forward(x, k, b), r); };
  EXPECT_LT(check_against_numeric(x, loss, g.dx), 1e-6);
  EXPECT_LT(check_against_numeric(k, loss, g.dk), 1e-6);
  EXPECT_LT(check_against_numeric(b, loss, g.db), 1e-6);
}

TEST(MaxPool, ExamplesAndOracle) {
  const Tensor x({1, 4, 1}, std::vector<double>{1, 3, 2, 5});
  EXPECT_EQ(maxpool1d_forward(x, 2).y.values()[0], 3.0);
  EXPECT_EQ(maxpool1d_forward(x, 2).y.values()[1], 5.0);
  const Tensor r = random_tensor({2, 5, 3}, 18);
  EXPECT_EQ(maxpool1d_forward(r, 1).y, r);
  const auto pooled = maxpool1d_forward(r, 2);
  ASSERT_EQ(pooled.y.shape(), (Shape{2, 2, 3}));
  const auto ref = oracle::maxpool1d(r.values(), 2, 5, 3, 2);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(pooled.y[i], ref[i]);
}

TEST(MaxPool, GradientRoutesToFirstMaximum) {
  const Tensor x({1, 4, 1}, std::vector<double>{2, 2, 1, 4});
  const auto p = maxpool1d_forward(x, 2);
  const auto dx = maxpool1d_backward(Tensor({1, 2, 1}, std::vector<double>{1.0, 1.0}), p.argmax,
                                     x.shape());
  EXPECT_EQ(std::vector<double>(dx.values().begin(), dx.values().end()),
            (std::vector<double>{1.0, 0.0, 0.0, 1.0}));

  Tensor xr = random_tensor({2, 6, 2}, 19);
  const Tensor r = random_tensor({2, 3, 2}, 20);
  const auto fwd = maxpool1d_forward(xr, 2);
  const auto g = maxpool1d_backward(r, fwd.argmax, xr.shape());
  auto loss = [&] { return dot(maxpool1d_forward(xr, 2).y, r); };
  EXPECT_LT(check_against_numeric(xr, loss, g), 1e-6);
}

TEST(ReluAndAvgPool, Gradients) {
  Tensor x = random_tensor({2, 4, 3}, 21);
  const Tensor r = random_tensor({2, 4, 3}, 22);
  auto relu_loss = [&] { return dot(relu_forward(x), r); };
  EXPECT_LT(check_against_numeric(x, relu_loss, relu_backward(x, r)), 1e-6);

  const Tensor r2 = random_tensor({2, 3}, 23);
  const auto avg = global_avg_pool_forward(x);
  EXPECT_NEAR(avg.at(1, 2), (x.at(1, 0, 2) + x.at(1, 1, 2) + x.at(1, 2, 2) + x.at(1, 3, 2)) / 4, 1e-15);
  auto avg_loss = [&] { return dot(global_avg_pool_forward(x), r2); };
  EXPECT_LT(check_against_numeric(x, avg_loss, global_avg_pool_backward(r2, x.shape())), 1e-6);
}

LstmParams zero_lstm(std::size_t in, std::size_t h) {
  return {Tensor({in, 4 * h}), Tensor({h, 4 * h}), Tensor({4 * h})};
}

TEST(Lstm, ZeroWeightsZeroState) {
  const auto p = zero_lstm(2, 3);
  const auto s = lstm_step(random_tensor({2, 2}, 24), Tensor({2, 3}), Tensor({2, 3}), p);
  for (std::size_t i = 0; i < 2 * 12; ++i) {
    const std::size_t block = (i % 12) / 3;
    EXPECT_EQ(s.gates[i], block == 2 ? 0.0 : 0.5) << i;
  }
  for (double v : s.c.values()) EXPECT_EQ(v, 0.0);
  for (double v : s.h.values()) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, ZeroWeightsCarryHalfTheCell) {
  const auto p = zero_lstm(2, 3);
  const Tensor c_prev = random_tensor({2, 3}, 25, 2.0);
  const auto s = lstm_step(random_tensor({2, 2}, 26), Tensor({2, 3}), c_prev, p);
  for (std::size_t i = 0; i < c_prev.size(); ++i) {
    EXPECT_NEAR(s.c[i], 0.5 * c_prev[i], 1e-15);
    EXPECT_NEAR(s.h[i], 0.5 * std::tanh(0.5 * c_prev[i]), 1e-15);
  }
}

TEST(Lstm, StepMatchesGateFormulas) {
  LstmParams p{random_tensor({2, 8}, 27), random_tensor({2, 8}, 28), random_tensor({8}, 29)};
  const Tensor x = random_tensor({1, 2}, 30);
  const Tensor h = random_tensor({1, 2}, 31);
  const Tensor c = random_tensor({1, 2}, 32);
  const auto s = lstm_step(x, h, c, p);
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  for (std::size_t j = 0; j < 2; ++j) {
    double z[4];
    for (std::size_t g = 0; g < 4; ++g) {
      const std::size_t col = g * 2 + j;
      z[g] = p.b[col] + x[0] * p.w.at(0, col) + x[1] * p.w.at(1, col) + h[0] * p.u.at(0, col) +
             h[1] * p.u.at(1, col);
    }
    const double cn = sig(z[1]) * c[j] + sig(z[0]) * std::tanh(z[2]);
    EXPECT_NEAR(s.c[j], cn, 1e-14);
    EXPECT_NEAR(s.h[j], sig(z[3]) * std::tanh(cn), 1e-14);
  }
}

TEST(Lstm, SequenceGradientsMatchFiniteDifferences) {
  // batch 2, H = 3, T = 4
  LstmParams p{random_tensor({2, 12}, 33, 0.5), random_tensor({3, 12}, 34, 0.5),
               random_tensor({12}, 35, 0.5)};
  Tensor x = random_tensor({2, 4, 2}, 36);
  const Tensor r = random_tensor({2, 3}, 37);
  const auto fwd = lstm_sequence_forward(x, p);
  const auto g = lstm_sequence_backward(x, p, fwd, r);
  auto loss = [&] { return dot(lstm_sequence_forward(x, p).last_hidden(), r); };
  EXPECT_LT(check_against_numeric(p.w, loss, g.dw), 1e-4);
  EXPECT_LT(check_against_numeric(p.u, loss, g.du), 1e-4);
  EXPECT_LT(check_against_numeric(p.b, loss, g.db), 1e-4);
  EXPECT_LT(check_against_numeric(x, loss, g.dx), 1e-4);
}

TEST(Lstm, StepBackwardMatchesFiniteDifferences) {
  LstmParams p{random_tensor({2, 8}, 38), random_tensor({2, 8}, 39), random_tensor({8}, 40)};
  Tensor x = random_tensor({2, 2}, 41);
  Tensor h = random_tensor({2, 2}, 42);
  Tensor c = random_tensor({2, 2}, 43);
  const Tensor rh = random_tensor({2, 2}, 44);
  const Tensor rc = random_tensor({2, 2}, 45);
  const auto s = lstm_step(x, h, c, p);
  const auto g = lstm_step_backward(x, h, c, p, s, rh, rc);
  auto loss = [&] {
    const auto o = lstm_step(x, h, c, p);
    return dot(o.h, rh) + dot(o.c, rc);
  };
  EXPECT_LT(check_against_numeric(h, loss, g.dh_prev), 1e-6);
  EXPECT_LT(check_against_numeric(c, loss, g.dc_prev), 1e-6);
  EXPECT_LT(check_against_numeric(p.u, loss, g.du), 1e-6);
  EXPECT_THROW(lstm_step(Tensor({2, 3}), h, c, p), ShapeError);
}

TEST(Softmax, EqualLogitsAndSaturation) {
  const auto ce = softmax_cross_entropy(Tensor({1, 2}), Tensor({1, 2}, std::vector<double>{1, 0}));
  EXPECT_NEAR(ce.probs[0], 0.5, 1e-15);
  EXPECT_NEAR(ce.loss, std::log(2.0), 1e-12);
  const auto sat = softmax_cross_entropy(Tensor({1, 2}, std::vector<double>{1000.0, 0.0}),
                                         Tensor({1, 2}, std::vector<double>{1, 0}));
  EXPECT_LT(sat.loss, 1e-6);
  EXPECT_TRUE(sat.probs.all_finite());
}

TEST(Softmax, RowsSumToOneAndGradientMatches) {
  Tensor z = random_tensor({4, 3}, 46, 5.0);
  Tensor onehot({4, 3});
  for (std::size_t r = 0; r < 4; ++r) onehot.at(r, r % 3) = 1.0;
  const auto ce = softmax_cross_entropy(z, onehot);
  for (std::size_t r = 0; r < 4; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_GT(ce.probs.at(r, c), 0.0);
      EXPECT_LT(ce.probs.at(r, c), 1.0);
      s += ce.probs.at(r, c);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  auto loss = [&] { return softmax_cross_entropy(z, onehot).loss; };
  EXPECT_LT(check_against_numeric(z, loss, ce.dlogits), 1e-5);

  const Tensor r = random_tensor({4, 3}, 47);
  auto sm_loss = [&] { return dot(softmax(z), r); };
  EXPECT_LT(check_against_numeric(z, sm_loss, softmax_backward(softmax(z), r)), 1e-6);
}

TEST(Dropout, IdentityCases) {
  const Tensor x = random_tensor({3, 5}, 48);
  Rng rng(1);
  EXPECT_EQ(dropout_forward(x, 0.0, Mode::Train, &rng).y, x);
  EXPECT_EQ(dropout_forward(x, 0.0, Mode::Infer, nullptr).y, x);
  EXPECT_EQ(dropout_forward(x, 0.7, Mode::Infer, nullptr).y, x);
}

TEST(Dropout, InvertedScalingStatistics) {
  const Tensor ones({100000}, 1.0);
  Rng rng(2024);
  const auto out = dropout_forward(ones, 0.3, Mode::Train, &rng);
  double mean = 0.0;
  for (double v : out.y.values()) {
    EXPECT_TRUE(v == 0.0 || std::abs(v - 1.0 / 0.7) < 1e-15);
    mean += v;
  }
  mean /= 100000.0;
  EXPECT_GE(mean, 0.97);
  EXPECT_LE(mean, 1.03);
  Rng again(2024);
  EXPECT_EQ(dropout_forward(ones, 0.3, Mode::Train, &again).mask, out.mask);
  const Tensor dy = random_tensor({100000}, 49);
  const auto dx = dropout_backward(dy, out.mask);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(dx[i], dy[i] * out.mask[i]);
}

}  // namespace
}  // namespace woodpest::nn
