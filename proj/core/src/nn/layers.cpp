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

#include "woodpest/nn/layers.hpp"

#include <cmath>

#include "woodpest/error.hpp"

namespace woodpest::nn {
namespace {

struct TensorCache : LayerCache {
  Tensor input;
  Tensor aux;
};

struct PoolCache : LayerCache {
  Shape input_shape;
  std::vector<std::size_t> argmax;
};

struct LstmCache : LayerCache {
  Tensor input;
  LstmSequence sequence;
};

void expect_batched(const Tensor& t, const char* context, std::size_t rank) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(context) + ": expected batched rank-" + std::to_string(rank) +
                     " input, got " + shape_to_string(t.shape()));
  }
}

void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : t.values()) v = dist(rng);
}

class DenseLayer final : public Layer {
 public:
  DenseLayer(std::size_t in, std::size_t units) : w_({in, units}), b_({units}) {}

  LayerSpec spec() const override { return LayerSpec::dense(b_.size()); }
  Shape output_shape(const Shape&) const override { return {b_.size()}; }
  std::vector<Tensor*> parameters() override { return {&w_, &b_}; }
  std::vector<const Tensor*> parameters() const override { return {&w_, &b_}; }
  void initialize(Rng& rng) override {
    glorot_uniform(w_, w_.dim(0), w_.dim(1), rng);
    b_.fill(0.0);
  }

  Tensor forward(const Tensor& x, ForwardContext&,
                 std::unique_ptr<LayerCache>* cache) const override {
    Tensor y = dense_forward(x, w_, b_);
    if (cache) {
      auto c = std::make_unique<TensorCache>();
      c->input = x;
      *cache = std::move(c);
    }
    return y;
  }

  Tensor backward(const Tensor& dy, const LayerCache& cache,
                  std::span<Tensor> grads) const override {
    const auto& c = static_cast<const TensorCache&>(cache);
    auto g = dense_backward(c.input, w_, dy);
    grads[0] = std::move(g.dw);
    grads[1] = std::move(g.db);
    return std::move(g.dx);
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<DenseLayer>(*this); }

 private:
  Tensor w_;
  Tensor b_;
};

class Conv1dLayer final : public Layer {
 public:
  Conv1dLayer(std::size_t cin, std::size_t filters, std::size_t kernel)
      : k_({kernel, cin, filters}), b_({filters}) {}

  LayerSpec spec() const override { return LayerSpec::conv1d(k_.dim(2), k_.dim(0)); }
  Shape output_shape(const Shape& in) const override { return {in.at(0), k_.dim(2)}; }
  std::vector<Tensor*> parameters() override { return {&k_, &b_}; }
  std::vector<const Tensor*> parameters() const override { return {&k_, &b_}; }
  void initialize(Rng& rng) override {
    const std::size_t width = k_.dim(0);
    glorot_uniform(k_, width * k_.dim(1), width * k_.dim(2), rng);
    b_.fill(0.0);
  }

  Tensor forward(const Tensor& x, ForwardContext&,
                 std::unique_ptr<LayerCache>* cache) const override {
    Tensor y = conv1d_forward(x, k_, b_);
    if (cache) {
      auto c = std::make_unique<TensorCache>();
      c->input = x;
      *cache = std::move(c);
    }
    return y;
  }

  Tensor backward(const Tensor& dy, const LayerCache& cache,
                  std::span<Tensor> grads) const override {
    const auto& c = static_cast<const TensorCache&>(cache);
    auto g = conv1d_backward(c.input, k_, dy);
    grads[0] = std::move(g.dk);
    grads[1] = std::move(g.db);
    return std::move(g.dx);
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv1dLayer>(*this); }

 private:
  Tensor k_;
  Tensor b_;
};

class MaxPoolLayer final : public Layer {
 public:
  explicit MaxPoolLayer(std::size_t width) : width_(width) {}

  LayerSpec spec() const override { return LayerSpec::maxpool1d(width_); }
  Shape output_shape(const Shape& in) const override { return {in.at(0) / width_, in.at(1)}; }

  Tensor forward(const Tensor& x, ForwardContext&,
                 std::unique_ptr<LayerCache>* cache) const override {
    auto r = maxpool1d_forward(x, width_);
    if (cache) {
      auto c = std::make_unique<PoolCache>();
      c->input_shape = x.shape();
      c->argmax = std::move(r.argmax);
      *cache = std::move(c);
    }
    return std::move(r.y);
  }

  Tensor backward(const Tensor& dy, const LayerCache& cache, std::span<Tensor>) const override {
    const auto& c = static_cast<const PoolCache&>(cache);
    return maxpool1d_backward(dy, c.argmax, c.input_shape);
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<MaxPoolLayer>(*this); }

 private:
  std::size_t width_;
};

class ReluLayer final : public Layer {
 public:
  LayerSpec spec() const override { return LayerSpec::relu(); }
  Shape output_shape(const Shape& in) const override { return in; }

  Tensor forward(const Tensor& x, ForwardContext&,
                 std::unique_ptr<LayerCache>* cache) const override {
    if (cache) {
      auto c = std::make_unique<TensorCache>();
      c->input = x;
      *cache = std::move(c);
    }
    return relu_forward(x);
  }

  Tensor backward(const Tensor& dy, const LayerCache& cache, std::span<Tensor>) const override {
    return relu_backward(static_cast<const TensorCache&>(cache).input, dy);
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<ReluLayer>(*this); }
};

class DropoutLayer final : public Layer {
 public:
  explicit DropoutLayer(double rate) : rate_(rate) {}

  LayerSpec spec() const override { return LayerSpec::dropout(rate_); }
  Shape output_shape(const Shape& in) const override { return in; }

  Tensor forward(const Tensor& x, ForwardContext& ctx,
                 std::unique_ptr<LayerCache>* cache) const override {
    auto r = dropout_forward(x, rate_, ctx.mode, ctx.rng);
    if (cache) {
      auto c = std::make_unique<TensorCache>();
      c->aux = std::move(r.mask);
      *cache = std::move(c);
    }
    return std::move(r.y);
  }

  Tensor backward(const Tensor& dy, const LayerCache& cache, std::span<Tensor>) const override {
    return dropout_backward(dy, static_cast<const TensorCache&>(cache).aux);
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<DropoutLayer>(*this); }

 private:
  double rate_;
};

/// Unrolled LSTM emitting the last hidden state: [B, T, in] -> [B, H].
class LstmLayer final : public Layer {
 public:
  LstmLayer(std::size_t in, std::size_t hidden)
      : p_{Tensor({in, 4 * hidden}), Tensor({hidden, 4 * hidden}), Tensor({4 * hidden})} {}

  LayerSpec spec() const override { return LayerSpec::lstm(p_.hidden()); }
  Shape output_shape(const Shape&) const override { return {p_.hidden()}; }
  std::vector<Tensor*> parameters() override { return {&p_.w, &p_.u, &p_.b}; }
  std::vector<const Tensor*> parameters() const override { return {&p_.w, &p_.u, &p_.b}; }
  void initialize(Rng& rng) override {
    const std::size_t h = p_.hidden();
    glorot_uniform(p_.w, p_.input_size(), 4 * h, rng);
    glorot_uniform(p_.u, h, 4 * h, rng);
    p_.b.fill(0.0);
    for (std::size_t j = h; j < 2 * h; ++j) p_.b[j] = 1.0;
  }

  Tensor forward(const Tensor& x, ForwardContext&,
                 std::unique_ptr<LayerCache>* cache) const override {
    expect_batched(x, "lstm", 3);
    auto seq = lstm_sequence_forward(x, p_);
    Tensor h = seq.last_hidden();
    if (cache) {
      auto c = std::make_unique<LstmCache>();
      c->input = x;
      c->sequence = std::move(seq);
      *cache = std::move(c);
    }
    return h;
  }

  Tensor backward(const Tensor& dy, const LayerCache& cache,
                  std::span<Tensor> grads) const override {
    const auto& c = static_cast<const LstmCache&>(cache);
    auto g = lstm_sequence_backward(c.input, p_, c.sequence, dy);
    grads[0] = std::move(g.dw);
    grads[1] = std::move(g.du);
    grads[2] = std::move(g.db);
    return std::move(g.dx);
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<LstmLayer>(*this); }

 private:
  LstmParams p_;
};

class GlobalAvgPoolLayer final : public Layer {
 public:
  LayerSpec spec() const override { return LayerSpec::global_avg_pool(); }
  Shape output_shape(const Shape& in) const override { return {in.at(1)}; }

  Tensor forward(const Tensor& x, ForwardContext&,
                 std::unique_ptr<LayerCache>* cache) const override {
    if (cache) {
      auto c = std::make_unique<PoolCache>();
      c->input_shape = x.shape();
      *cache = std::move(c);
    }
    return global_avg_pool_forward(x);
  }

  Tensor backward(const Tensor& dy, const LayerCache& cache, std::span<Tensor>) const override {
    return global_avg_pool_backward(dy, static_cast<const PoolCache&>(cache).input_shape);
  }

  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<GlobalAvgPoolLayer>(*this);
  }
};

class SoftmaxLayer final : public Layer {
 public:
  LayerSpec spec() const override { return LayerSpec::softmax(); }
  Shape output_shape(const Shape& in) const override { return in; }

  Tensor forward(const Tensor& x, ForwardContext&,
                 std::unique_ptr<LayerCache>* cache) const override {
    Tensor p = softmax(x);
    if (cache) {
      auto c = std::make_unique<TensorCache>();
      c->aux = p;
      *cache = std::move(c);
    }
    return p;
  }

  Tensor backward(const Tensor& dy, const LayerCache& cache, std::span<Tensor>) const override {
    return softmax_backward(static_cast<const TensorCache&>(cache).aux, dy);
  }

  std::unique_ptr<Layer> clone() const override { return std::make_unique<SoftmaxLayer>(*this); }
};

void expect_input_rank(const LayerSpec& spec, const Shape& input, std::size_t rank) {
  if (input.size() != rank) {
    throw ShapeError(std::string(to_string(spec.kind)) + " layer needs a rank-" +
                     std::to_string(rank) + " per-sample input, got " + shape_to_string(input));
  }
}

}  // namespace

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Dense: return "dense";
    case LayerKind::Conv1D: return "conv1d";
    case LayerKind::MaxPool1D: return "maxpool1d";
    case LayerKind::ReLU: return "relu";
    case LayerKind::Dropout: return "dropout";
    case LayerKind::LSTM: return "lstm";
    case LayerKind::GlobalAvgPool1D: return "global_avg_pool1d";
    case LayerKind::Softmax: return "softmax";
  }
  return "unknown";
}

LayerKind parse_layer_kind(std::string_view name) {
  for (auto kind : {LayerKind::Dense, LayerKind::Conv1D, LayerKind::MaxPool1D, LayerKind::ReLU,
                    LayerKind::Dropout, LayerKind::LSTM, LayerKind::GlobalAvgPool1D,
                    LayerKind::Softmax}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown layer kind '" + std::string(name) + "'");
}

void LayerSpec::validate() const {
  auto positive = [&](std::size_t v, const char* field) {
    if (v == 0) {
      throw InvalidArgument(std::string(to_string(kind)) + " layer: " + field +
                            " must be positive");
    }
  };
  switch (kind) {
    case LayerKind::Dense: positive(units, "units"); break;
    case LayerKind::Conv1D:
      positive(filters, "filters");
      positive(kernel, "kernel");
      if (kernel % 2 == 0) throw InvalidArgument("conv1d kernel width must be odd");
      break;
    case LayerKind::MaxPool1D: positive(pool, "pool"); break;
    case LayerKind::LSTM: positive(hidden, "hidden"); break;
    case LayerKind::Dropout:
      if (!(rate >= 0.0 && rate < 1.0)) throw InvalidArgument("dropout rate must be in [0, 1)");
      break;
    default: break;
  }
}

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const Shape& input) {
  spec.validate();
  switch (spec.kind) {
    case LayerKind::Dense:
      expect_input_rank(spec, input, 1);
      return std::make_unique<DenseLayer>(input[0], spec.units);
    case LayerKind::Conv1D:
      expect_input_rank(spec, input, 2);
      return std::make_unique<Conv1dLayer>(input[1], spec.filters, spec.kernel);
    case LayerKind::MaxPool1D:
      expect_input_rank(spec, input, 2);
      return std::make_unique<MaxPoolLayer>(spec.pool);
    case LayerKind::ReLU: return std::make_unique<ReluLayer>();
    case LayerKind::Dropout: return std::make_unique<DropoutLayer>(spec.rate);
    case LayerKind::LSTM:
      expect_input_rank(spec, input, 2);
      return std::make_unique<LstmLayer>(input[1], spec.hidden);
    case LayerKind::GlobalAvgPool1D:
      expect_input_rank(spec, input, 2);
      return std::make_unique<GlobalAvgPoolLayer>();
    case LayerKind::Softmax:
      expect_input_rank(spec, input, 1);
      return std::make_unique<SoftmaxLayer>();
  }
  throw InvalidArgument("unhandled layer kind");
}

std::size_t layer_parameter_count(const LayerSpec& spec, const Shape& input) {
  switch (spec.kind) {
    case LayerKind::Dense: return input.at(0) * spec.units + spec.units;
    case LayerKind::Conv1D: return spec.kernel * input.at(1) * spec.filters + spec.filters;
    case LayerKind::LSTM: return 4 * spec.hidden * (input.at(1) + spec.hidden + 1);
    default: return 0;
  }
}

}  // namespace woodpest::nn
