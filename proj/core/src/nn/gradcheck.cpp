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

#include "woodpest/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "woodpest/error.hpp"

namespace woodpest::nn {

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

double graph_loss(const Sequential& graph, const Tensor& x, const Tensor& onehot) {
  ForwardContext ctx{Mode::Infer, nullptr};
  return softmax_cross_entropy(graph.logits(x, ctx), onehot).loss;
}

std::vector<Tensor> analytic_gradients(const Sequential& graph, const Tensor& x,
                                       const Tensor& onehot) {
  ForwardContext ctx{Mode::Infer, nullptr};
  Tape tape;
  const Tensor z = graph.logits(x, ctx, &tape);
  return graph.backward(tape, softmax_cross_entropy(z, onehot).dlogits);
}

std::vector<Tensor> numeric_gradients(Sequential& graph, const Tensor& x, const Tensor& onehot,
                                      double eps) {
  std::vector<Tensor> grads;
  for (Tensor* p : graph.parameters()) {
    Tensor g(p->shape());
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double saved = (*p)[i];
      (*p)[i] = saved + eps;
      const double up = graph_loss(graph, x, onehot);
      (*p)[i] = saved - eps;
      const double down = graph_loss(graph, x, onehot);
      (*p)[i] = saved;
      g[i] = (up - down) / (2.0 * eps);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

double compare_gradients(std::span<const Tensor> analytic, std::span<const Tensor> numeric) {
  if (analytic.size() != numeric.size()) throw ShapeError("gradient lists differ in length");
  double worst = 0.0;
  for (std::size_t t = 0; t < analytic.size(); ++t) {
    expect_shape(numeric[t], analytic[t].shape(), "numeric gradient");
    for (std::size_t i = 0; i < analytic[t].size(); ++i) {
      worst = std::max(worst, relative_error(analytic[t][i], numeric[t][i]));
    }
  }
  return worst;
}

double finite_diff_check(Sequential& graph, const Tensor& x, const Tensor& onehot, double eps) {
  const auto analytic = analytic_gradients(graph, x, onehot);
  const auto numeric = numeric_gradients(graph, x, onehot, eps);
  return compare_gradients(analytic, numeric);
}

}  // namespace woodpest::nn
