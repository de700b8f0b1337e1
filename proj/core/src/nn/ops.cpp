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

#include "woodpest/nn/ops.hpp"

#include <algorithm>
#include <cmath>

#include "eigen_map.hpp"
#include "woodpest/error.hpp"

namespace woodpest::nn {

using detail::as_matrix;
using detail::as_row;

namespace {

void expect_rank(const Tensor& t, std::size_t rank, const char* context) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(context) + ": expected rank " + std::to_string(rank) +
                     ", got shape " + shape_to_string(t.shape()));
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor column_sum(const Tensor& m, std::size_t rows, std::size_t cols) {
  Tensor out({cols});
  as_row(out) = as_matrix(m, rows, cols).colwise().sum();
  return out;
}

/// Applies gate nonlinearities to pre-activations A [B, 4H] and advances
/// the cell state.
LstmStep activate_gates(Tensor pre, const Tensor& c_prev, std::size_t hidden) {
  const std::size_t batch = pre.dim(0);
  LstmStep step{Tensor({batch, hidden}), Tensor({batch, hidden}), std::move(pre),
                Tensor({batch, hidden})};
  for (std::size_t b = 0; b < batch; ++b) {
    double* a = step.gates.data() + b * 4 * hidden;
    for (std::size_t j = 0; j < hidden; ++j) {
      const double i = sigmoid(a[j]);
      const double f = sigmoid(a[hidden + j]);
      const double g = std::tanh(a[2 * hidden + j]);
      const double o = sigmoid(a[3 * hidden + j]);
      a[j] = i;
      a[hidden + j] = f;
      a[2 * hidden + j] = g;
      a[3 * hidden + j] = o;
      const double c = f * c_prev.at(b, j) + i * g;
      const double tc = std::tanh(c);
      step.c.at(b, j) = c;
      step.tanh_c.at(b, j) = tc;
      step.h.at(b, j) = o * tc;
    }
  }
  return step;
}

/// Gradient w.r.t. the gate pre-activations for one step. `dc` is the
/// gradient flowing into c_t from later steps; dc_prev receives the
/// gradient for c_{t-1}.
Tensor gate_gradients(const LstmStep& step, const Tensor& c_prev, const Tensor& dh,
                      const Tensor& dc, Tensor& dc_prev) {
  const std::size_t batch = step.h.dim(0);
  const std::size_t hidden = step.h.dim(1);
  Tensor da({batch, 4 * hidden});
  dc_prev = Tensor({batch, hidden});
  for (std::size_t b = 0; b < batch; ++b) {
    const double* gate = step.gates.data() + b * 4 * hidden;
    double* out = da.data() + b * 4 * hidden;
    for (std::size_t j = 0; j < hidden; ++j) {
      const double i = gate[j];
      const double f = gate[hidden + j];
      const double g = gate[2 * hidden + j];
      const double o = gate[3 * hidden + j];
      const double tc = step.tanh_c.at(b, j);
      const double dh_bj = dh.at(b, j);
      const double dct = dc.at(b, j) + dh_bj * o * (1.0 - tc * tc);
      out[j] = dct * g * i * (1.0 - i);
      out[hidden + j] = dct * c_prev.at(b, j) * f * (1.0 - f);
      out[2 * hidden + j] = dct * i * (1.0 - g * g);
      out[3 * hidden + j] = dh_bj * tc * o * (1.0 - o);
      dc_prev.at(b, j) = dct * f;
    }
  }
  return da;
}

void check_lstm_params(const LstmParams& p) {
  expect_rank(p.w, 2, "lstm W");
  expect_rank(p.u, 2, "lstm U");
  const std::size_t h = p.u.dim(0);
  expect_shape(p.u, {h, 4 * h}, "lstm U");
  expect_shape(p.w, {p.w.dim(0), 4 * h}, "lstm W");
  expect_shape(p.b, {4 * h}, "lstm b");
}

}  // namespace

Tensor dense_forward(const Tensor& x, const Tensor& w, const Tensor& b) {
  expect_rank(x, 2, "dense input");
  expect_rank(w, 2, "dense weight");
  const std::size_t batch = x.dim(0), in = x.dim(1), out = w.dim(1);
  if (w.dim(0) != in) {
    throw ShapeError("dense: input has " + std::to_string(in) + " features, weight expects " +
                     std::to_string(w.dim(0)));
  }
  expect_shape(b, {out}, "dense bias");
  Tensor y({batch, out});
  auto ym = as_matrix(y, batch, out);
  ym.noalias() = as_matrix(x, batch, in) * as_matrix(w, in, out);
  ym.rowwise() += as_row(b);
  return y;
}

DenseGrads dense_backward(const Tensor& x, const Tensor& w, const Tensor& dy) {
  const std::size_t batch = x.dim(0), in = x.dim(1), out = w.dim(1);
  expect_shape(dy, {batch, out}, "dense dy");
  DenseGrads g{Tensor({batch, in}), Tensor({in, out}), Tensor({out})};
  const auto dym = as_matrix(dy, batch, out);
  as_matrix(g.dx, batch, in).noalias() = dym * as_matrix(w, in, out).transpose();
  as_matrix(g.dw, in, out).noalias() = as_matrix(x, batch, in).transpose() * dym;
  g.db = column_sum(dy, batch, out);
  return g;
}

namespace {

Tensor im2col(const Tensor& x, std::size_t k) {
  const std::size_t batch = x.dim(0), steps = x.dim(1), cin = x.dim(2);
  const auto pad = static_cast<std::ptrdiff_t>((k - 1) / 2);
  Tensor cols({batch * steps, k * cin});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < steps; ++t) {
      double* row = cols.data() + (b * steps + t) * k * cin;
      for (std::size_t dt = 0; dt < k; ++dt) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + dt) - pad;
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(steps)) continue;
        const double* in = x.data() + (b * steps + static_cast<std::size_t>(src)) * cin;
        std::copy(in, in + cin, row + dt * cin);
      }
    }
  }
  return cols;
}

void check_conv(const Tensor& x, const Tensor& kernel) {
  expect_rank(x, 3, "conv1d input");
  expect_rank(kernel, 3, "conv1d kernel");
  if (kernel.dim(0) % 2 == 0) {
    throw InvalidArgument("conv1d kernel width must be odd, got " + std::to_string(kernel.dim(0)));
  }
  if (kernel.dim(1) != x.dim(2)) {
    throw ShapeError("conv1d: input has " + std::to_string(x.dim(2)) +
                     " channels, kernel expects " + std::to_string(kernel.dim(1)));
  }
}

}  // namespace

Tensor conv1d_forward(const Tensor& x, const Tensor& kernel, const Tensor& b) {
  check_conv(x, kernel);
  const std::size_t batch = x.dim(0), steps = x.dim(1), cin = x.dim(2);
  const std::size_t k = kernel.dim(0), cout = kernel.dim(2);
  expect_shape(b, {cout}, "conv1d bias");
  const Tensor cols = im2col(x, k);
  Tensor y({batch, steps, cout});
  auto ym = as_matrix(y, batch * steps, cout);
  ym.noalias() = as_matrix(cols, batch * steps, k * cin) * as_matrix(kernel, k * cin, cout);
  ym.rowwise() += as_row(b);
  return y;
}

Conv1dGrads conv1d_backward(const Tensor& x, const Tensor& kernel, const Tensor& dy) {
  check_conv(x, kernel);
  const std::size_t batch = x.dim(0), steps = x.dim(1), cin = x.dim(2);
  const std::size_t k = kernel.dim(0), cout = kernel.dim(2);
  expect_shape(dy, {batch, steps, cout}, "conv1d dy");
  const std::size_t rows = batch * steps;

  const Tensor cols = im2col(x, k);
  const auto dym = as_matrix(dy, rows, cout);
  Conv1dGrads g{Tensor(x.shape()), Tensor(kernel.shape()), column_sum(dy, rows, cout)};
  as_matrix(g.dk, k * cin, cout).noalias() = as_matrix(cols, rows, k * cin).transpose() * dym;

  Tensor dcols({rows, k * cin});
  as_matrix(dcols, rows, k * cin).noalias() = dym * as_matrix(kernel, k * cin, cout).transpose();
  const auto pad = static_cast<std::ptrdiff_t>((k - 1) / 2);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < steps; ++t) {
      const double* row = dcols.data() + (b * steps + t) * k * cin;
      for (std::size_t dt = 0; dt < k; ++dt) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + dt) - pad;
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(steps)) continue;
        double* dx = g.dx.data() + (b * steps + static_cast<std::size_t>(src)) * cin;
        for (std::size_t ci = 0; ci < cin; ++ci) dx[ci] += row[dt * cin + ci];
      }
    }
  }
  return g;
}

MaxPoolResult maxpool1d_forward(const Tensor& x, std::size_t width) {
  expect_rank(x, 3, "maxpool1d input");
  if (width == 0) throw InvalidArgument("maxpool1d width must be at least 1");
  const std::size_t batch = x.dim(0), steps = x.dim(1), ch = x.dim(2);
  const std::size_t out_steps = steps / width;
  MaxPoolResult r{Tensor({batch, out_steps, ch}), {}};
  r.argmax.resize(batch * out_steps * ch);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < out_steps; ++t) {
      for (std::size_t c = 0; c < ch; ++c) {
        std::size_t best = (b * steps + t * width) * ch + c;
        for (std::size_t w = 1; w < width; ++w) {
          const std::size_t idx = (b * steps + t * width + w) * ch + c;
          if (x[idx] > x[best]) best = idx;
        }
        const std::size_t o = (b * out_steps + t) * ch + c;
        r.y[o] = x[best];
        r.argmax[o] = best;
      }
    }
  }
  return r;
}

Tensor maxpool1d_backward(const Tensor& dy, std::span<const std::size_t> argmax,
                          const Shape& input_shape) {
  if (argmax.size() != dy.size()) throw ShapeError("maxpool1d: argmax size differs from dy");
  Tensor dx(input_shape);
  for (std::size_t o = 0; o < dy.size(); ++o) dx[argmax[o]] += dy[o];
  return dx;
}

Tensor relu_forward(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& dy) {
  expect_shape(dy, x.shape(), "relu dy");
  Tensor dx(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
  return dx;
}

Tensor global_avg_pool_forward(const Tensor& x) {
  expect_rank(x, 3, "global_avg_pool input");
  const std::size_t batch = x.dim(0), steps = x.dim(1), ch = x.dim(2);
  if (steps == 0) throw ShapeError("global_avg_pool: empty time axis");
  Tensor y({batch, ch});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t c = 0; c < ch; ++c) y.at(b, c) += x.at(b, t, c);
    }
  }
  for (double& v : y.values()) v /= static_cast<double>(steps);
  return y;
}

Tensor global_avg_pool_backward(const Tensor& dy, const Shape& input_shape) {
  const std::size_t batch = input_shape.at(0), steps = input_shape.at(1), ch = input_shape.at(2);
  expect_shape(dy, {batch, ch}, "global_avg_pool dy");
  Tensor dx(input_shape);
  const double scale = 1.0 / static_cast<double>(steps);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t c = 0; c < ch; ++c) dx.at(b, t, c) = dy.at(b, c) * scale;
    }
  }
  return dx;
}

LstmStep lstm_step(const Tensor& x_t, const Tensor& h_prev, const Tensor& c_prev,
                   const LstmParams& params) {
  check_lstm_params(params);
  expect_rank(x_t, 2, "lstm x_t");
  const std::size_t batch = x_t.dim(0), in = params.input_size(), hidden = params.hidden();
  expect_shape(x_t, {batch, in}, "lstm x_t");
  expect_shape(h_prev, {batch, hidden}, "lstm h_prev");
  expect_shape(c_prev, {batch, hidden}, "lstm c_prev");

  Tensor pre({batch, 4 * hidden});
  auto pm = as_matrix(pre, batch, 4 * hidden);
  pm.noalias() = as_matrix(x_t, batch, in) * as_matrix(params.w, in, 4 * hidden);
  pm.noalias() += as_matrix(h_prev, batch, hidden) * as_matrix(params.u, hidden, 4 * hidden);
  pm.rowwise() += as_row(params.b);
  return activate_gates(std::move(pre), c_prev, hidden);
}

LstmStepGrads lstm_step_backward(const Tensor& x_t, const Tensor& h_prev, const Tensor& c_prev,
                                 const LstmParams& params, const LstmStep& step,
                                 const Tensor& dh, const Tensor& dc) {
  const std::size_t batch = x_t.dim(0), in = params.input_size(), hidden = params.hidden();
  expect_shape(dh, {batch, hidden}, "lstm dh");
  expect_shape(dc, {batch, hidden}, "lstm dc");
  LstmStepGrads g;
  const Tensor da = gate_gradients(step, c_prev, dh, dc, g.dc_prev);
  const auto dam = as_matrix(da, batch, 4 * hidden);
  g.dx = Tensor({batch, in});
  g.dh_prev = Tensor({batch, hidden});
  g.dw = Tensor({in, 4 * hidden});
  g.du = Tensor({hidden, 4 * hidden});
  as_matrix(g.dx, batch, in).noalias() = dam * as_matrix(params.w, in, 4 * hidden).transpose();
  as_matrix(g.dh_prev, batch, hidden).noalias() =
      dam * as_matrix(params.u, hidden, 4 * hidden).transpose();
  as_matrix(g.dw, in, 4 * hidden).noalias() = as_matrix(x_t, batch, in).transpose() * dam;
  as_matrix(g.du, hidden, 4 * hidden).noalias() =
      as_matrix(h_prev, batch, hidden).transpose() * dam;
  g.db = column_sum(da, batch, 4 * hidden);
  return g;
}

LstmSequence lstm_sequence_forward(const Tensor& x, const LstmParams& params) {
  check_lstm_params(params);
  expect_rank(x, 3, "lstm input");
  const std::size_t batch = x.dim(0), steps = x.dim(1), in = x.dim(2);
  const std::size_t hidden = params.hidden(), gates = 4 * hidden;
  if (in != params.input_size()) {
    throw ShapeError("lstm: input has " + std::to_string(in) + " features, W expects " +
                     std::to_string(params.input_size()));
  }
  if (steps == 0) throw ShapeError("lstm: empty time axis");

  // Input projections for every (b, t) in one product: row b*T + t.
  Tensor xw({batch * steps, gates});
  as_matrix(xw, batch * steps, gates).noalias() =
      as_matrix(x, batch * steps, in) * as_matrix(params.w, in, gates);

  LstmSequence seq;
  seq.steps.reserve(steps);
  Tensor h({batch, hidden});
  Tensor c({batch, hidden});
  for (std::size_t t = 0; t < steps; ++t) {
    Tensor pre({batch, gates});
    for (std::size_t b = 0; b < batch; ++b) {
      const double* src = xw.data() + (b * steps + t) * gates;
      std::copy(src, src + gates, pre.data() + b * gates);
    }
    auto pm = as_matrix(pre, batch, gates);
    pm.noalias() += as_matrix(h, batch, hidden) * as_matrix(params.u, hidden, gates);
    pm.rowwise() += as_row(params.b);
    seq.steps.push_back(activate_gates(std::move(pre), c, hidden));
    h = seq.steps.back().h;
    c = seq.steps.back().c;
  }
  return seq;
}

LstmSequenceGrads lstm_sequence_backward(const Tensor& x, const LstmParams& params,
                                         const LstmSequence& fwd, const Tensor& dh_last) {
  const std::size_t batch = x.dim(0), steps = x.dim(1), in = x.dim(2);
  const std::size_t hidden = params.hidden(), gates = 4 * hidden;
  expect_shape(dh_last, {batch, hidden}, "lstm dh_last");
  if (fwd.steps.size() != steps) throw ShapeError("lstm: forward record length differs from T");

  LstmSequenceGrads g{Tensor(x.shape()), Tensor(params.w.shape()), Tensor(params.u.shape()),
                      Tensor(params.b.shape())};
  Tensor da_all({batch * steps, gates});
  const Tensor zeros({batch, hidden});
  Tensor dh = dh_last;
  Tensor dc({batch, hidden});
  Tensor dc_prev;
  auto dum = as_matrix(g.du, hidden, gates);
  const auto um = as_matrix(params.u, hidden, gates);

  for (std::size_t t = steps; t-- > 0;) {
    const Tensor& c_prev = t ? fwd.steps[t - 1].c : zeros;
    const Tensor& h_prev = t ? fwd.steps[t - 1].h : zeros;
    const Tensor da = gate_gradients(fwd.steps[t], c_prev, dh, dc, dc_prev);
    const auto dam = as_matrix(da, batch, gates);
    dum.noalias() += as_matrix(h_prev, batch, hidden).transpose() * dam;
    as_row(g.db) += dam.colwise().sum();
    Tensor dh_prev({batch, hidden});
    as_matrix(dh_prev, batch, hidden).noalias() = dam * um.transpose();
    for (std::size_t b = 0; b < batch; ++b) {
      std::copy(da.data() + b * gates, da.data() + (b + 1) * gates,
                da_all.data() + (b * steps + t) * gates);
    }
    dh = std::move(dh_prev);
    dc = std::move(dc_prev);
  }

  const auto dam_all = as_matrix(da_all, batch * steps, gates);
  as_matrix(g.dw, in, gates).noalias() = as_matrix(x, batch * steps, in).transpose() * dam_all;
  as_matrix(g.dx, batch * steps, in).noalias() =
      dam_all * as_matrix(params.w, in, gates).transpose();
  return g;
}

Tensor softmax(const Tensor& logits) {
  expect_rank(logits, 2, "softmax input");
  const std::size_t batch = logits.dim(0), k = logits.dim(1);
  Tensor p(logits.shape());
  for (std::size_t b = 0; b < batch; ++b) {
    const double* z = logits.data() + b * k;
    double* out = p.data() + b * k;
    const double zmax = *std::max_element(z, z + k);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += (out[j] = std::exp(z[j] - zmax));
    for (std::size_t j = 0; j < k; ++j) out[j] /= sum;
  }
  return p;
}

Tensor softmax_backward(const Tensor& probs, const Tensor& dy) {
  expect_shape(dy, probs.shape(), "softmax dy");
  const std::size_t batch = probs.dim(0), k = probs.dim(1);
  Tensor dx(probs.shape());
  for (std::size_t b = 0; b < batch; ++b) {
    double dot = 0.0;
    for (std::size_t j = 0; j < k; ++j) dot += dy.at(b, j) * probs.at(b, j);
    for (std::size_t j = 0; j < k; ++j) dx.at(b, j) = probs.at(b, j) * (dy.at(b, j) - dot);
  }
  return dx;
}

SoftmaxCrossEntropy softmax_cross_entropy(const Tensor& logits, const Tensor& onehot) {
  expect_rank(logits, 2, "cross-entropy logits");
  expect_shape(onehot, logits.shape(), "cross-entropy targets");
  const std::size_t batch = logits.dim(0), k = logits.dim(1);
  SoftmaxCrossEntropy r{0.0, Tensor(logits.shape()), Tensor(logits.shape())};
  for (std::size_t b = 0; b < batch; ++b) {
    const double* z = logits.data() + b * k;
    const double zmax = *std::max_element(z, z + k);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += std::exp(z[j] - zmax);
    const double log_sum = std::log(sum);
    for (std::size_t j = 0; j < k; ++j) {
      const double log_p = z[j] - zmax - log_sum;
      const double p = std::exp(log_p);
      r.probs.at(b, j) = p;
      r.loss -= onehot.at(b, j) * log_p;
      r.dlogits.at(b, j) = (p - onehot.at(b, j)) / static_cast<double>(batch);
    }
  }
  r.loss /= static_cast<double>(batch);
  return r;
}

DropoutResult dropout_forward(const Tensor& x, double rate, Mode mode, Rng* rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw InvalidArgument("dropout rate must be in [0, 1)");
  if (mode == Mode::Infer || rate == 0.0) return {x, Tensor(x.shape(), 1.0)};
  if (rng == nullptr) throw InvalidArgument("dropout in train mode requires a generator");
  DropoutResult r{Tensor(x.shape()), Tensor(x.shape())};
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.mask[i] = keep(*rng) ? scale : 0.0;
    r.y[i] = x[i] * r.mask[i];
  }
  return r;
}

Tensor dropout_backward(const Tensor& dy, const Tensor& mask) {
  expect_shape(dy, mask.shape(), "dropout dy");
  Tensor dx(dy.shape());
  for (std::size_t i = 0; i < dy.size(); ++i) dx[i] = dy[i] * mask[i];
  return dx;
}

}  // namespace woodpest::nn
