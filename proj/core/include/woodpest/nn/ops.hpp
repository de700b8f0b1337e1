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

// Stateless layer kernels and their exact gradients. Batch is always the
// leading axis; sequences are [batch, time, channels].

#include <cstddef>
#include <span>
#include <vector>

#include "woodpest/nn/tensor.hpp"
#include "woodpest/random.hpp"

namespace woodpest::nn {

enum class Mode { Train, Infer };

// y = x W + b for x [B, in], W [in, out], b [out].
Tensor dense_forward(const Tensor& x, const Tensor& w, const Tensor& b);
struct DenseGrads {
  Tensor dx, dw, db;
};
DenseGrads dense_backward(const Tensor& x, const Tensor& w, const Tensor& dy);

// "Same" 1-D convolution over time. x [B, T, Cin], K [k, Cin, Cout] with k
// odd, b [Cout]; zero padding (k-1)/2 on each side.
Tensor conv1d_forward(const Tensor& x, const Tensor& kernel, const Tensor& b);
struct Conv1dGrads {
  Tensor dx, dk, db;
};
Conv1dGrads conv1d_backward(const Tensor& x, const Tensor& kernel, const Tensor& dy);

// Non-overlapping max over `width` time steps; the trailing remainder is
// dropped. argmax holds flat input indices (first maximum on ties).
struct MaxPoolResult {
  Tensor y;
  std::vector<std::size_t> argmax;
};
MaxPoolResult maxpool1d_forward(const Tensor& x, std::size_t width);
Tensor maxpool1d_backward(const Tensor& dy, std::span<const std::size_t> argmax,
                          const Shape& input_shape);

Tensor relu_forward(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& dy);

// Mean over time: [B, T, C] -> [B, C].
Tensor global_avg_pool_forward(const Tensor& x);
Tensor global_avg_pool_backward(const Tensor& dy, const Shape& input_shape);

/// Gate blocks are laid out [input | forget | cell | output] along the 4H
/// axis of W [in, 4H], U [H, 4H] and b [4H].
struct LstmParams {
  Tensor w;
  Tensor u;
  Tensor b;

  std::size_t input_size() const { return w.dim(0); }
  std::size_t hidden() const { return u.dim(0); }
};

struct LstmStep {
  Tensor h;       // [B, H]
  Tensor c;       // [B, H]
  Tensor gates;   // activated i, f, g, o: [B, 4H]
  Tensor tanh_c;  // tanh(c): [B, H]
};

/// One cell update: i,f,o = sigmoid(.), g = tanh(.), c = f c_prev + i g,
/// h = o tanh(c).
LstmStep lstm_step(const Tensor& x_t, const Tensor& h_prev, const Tensor& c_prev,
                   const LstmParams& params);

struct LstmStepGrads {
  Tensor dx, dh_prev, dc_prev, dw, du, db;
};
LstmStepGrads lstm_step_backward(const Tensor& x_t, const Tensor& h_prev, const Tensor& c_prev,
                                 const LstmParams& params, const LstmStep& step,
                                 const Tensor& dh, const Tensor& dc);

/// Unrolled LSTM over x [B, T, in] from zero state.
struct LstmSequence {
  std::vector<LstmStep> steps;
  const Tensor& last_hidden() const { return steps.back().h; }
};
LstmSequence lstm_sequence_forward(const Tensor& x, const LstmParams& params);

struct LstmSequenceGrads {
  Tensor dx, dw, du, db;
};
/// Backprop through time given the gradient w.r.t. the last hidden state.
LstmSequenceGrads lstm_sequence_backward(const Tensor& x, const LstmParams& params,
                                         const LstmSequence& fwd, const Tensor& dh_last);

/// Row-wise max-shifted softmax.
Tensor softmax(const Tensor& logits);
Tensor softmax_backward(const Tensor& probs, const Tensor& dy);

struct SoftmaxCrossEntropy {
  double loss = 0.0;  // mean over the batch
  Tensor probs;
  Tensor dlogits;     // (probs - onehot) / batch
};
SoftmaxCrossEntropy softmax_cross_entropy(const Tensor& logits, const Tensor& onehot);

/// Inverted dropout. In Train mode each element is kept with probability
/// 1 - rate and scaled by 1 / (1 - rate); mask holds the applied factors.
/// Infer mode (or rate 0) is the identity with an all-ones mask.
struct DropoutResult {
  Tensor y;
  Tensor mask;
};
DropoutResult dropout_forward(const Tensor& x, double rate, Mode mode, Rng* rng);
Tensor dropout_backward(const Tensor& dy, const Tensor& mask);

}  // namespace woodpest::nn
