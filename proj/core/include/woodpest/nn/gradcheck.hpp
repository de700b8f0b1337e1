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

#include <span>
#include <vector>

#include "woodpest/nn/sequential.hpp"

namespace woodpest::nn {

/// |a - n| / max(1e-8, |a| + |n|)
double relative_error(double analytic, double numeric);

/// Mean softmax cross-entropy of the graph's logits (Infer mode).
double graph_loss(const Sequential& graph, const Tensor& x, const Tensor& onehot);
std::vector<Tensor> analytic_gradients(const Sequential& graph, const Tensor& x,
                                       const Tensor& onehot);
/// Central differences (f(p + eps) - f(p - eps)) / 2 eps for every parameter.
std::vector<Tensor> numeric_gradients(Sequential& graph, const Tensor& x, const Tensor& onehot,
                                      double eps = 1e-4);
/// Max relative_error over all parameter entries.
double compare_gradients(std::span<const Tensor> analytic, std::span<const Tensor> numeric);

/// Max relative error between backprop and central differences. Dropout is
/// evaluated in Infer mode so the loss is deterministic.
double finite_diff_check(Sequential& graph, const Tensor& x, const Tensor& onehot,
                         double eps = 1e-4);

}  // namespace woodpest::nn
