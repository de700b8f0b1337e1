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

#include "woodpest/nn/sequential.hpp"

#include "woodpest/error.hpp"

namespace woodpest::nn {

Sequential::Sequential(Shape input_shape, std::vector<LayerSpec> specs)
    : input_shape_(std::move(input_shape)), specs_(std::move(specs)) {
  if (input_shape_.empty()) throw ShapeError("model input shape must not be empty");
  Shape shape = input_shape_;
  layers_.reserve(specs_.size());
  for (const auto& spec : specs_) {
    layers_.push_back(make_layer(spec, shape));
    shape = layers_.back()->output_shape(shape);
  }
}

Sequential::Sequential(const Sequential& other)
    : input_shape_(other.input_shape_), specs_(other.specs_) {
  layers_.reserve(other.layers_.size());
  for (const auto& layer : other.layers_) layers_.push_back(layer->clone());
}

Sequential& Sequential::operator=(const Sequential& other) {
  if (this != &other) *this = Sequential(other);
  return *this;
}

Shape Sequential::output_shape() const {
  Shape shape = input_shape_;
  for (const auto& layer : layers_) shape = layer->output_shape(shape);
  return shape;
}

void Sequential::initialize(std::uint64_t seed) {
  Rng rng(seed);
  for (auto& layer : layers_) layer->initialize(rng);
}

std::vector<Tensor*> Sequential::parameters() {
  std::vector<Tensor*> out;
  for (auto& layer : layers_) {
    auto p = layer->parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<const Tensor*> Sequential::parameters() const {
  std::vector<const Tensor*> out;
  for (const auto& layer : layers_) {
    auto p = std::as_const(*layer).parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::size_t Sequential::parameter_count() const {
  std::size_t n = 0;
  for (const Tensor* p : parameters()) n += p->size();
  return n;
}

std::vector<double> Sequential::flat_parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const Tensor* p : parameters()) flat.insert(flat.end(), p->values().begin(), p->values().end());
  return flat;
}

void Sequential::set_flat_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw ShapeError("model has " + std::to_string(parameter_count()) + " parameters, got " +
                     std::to_string(values.size()));
  }
  std::size_t offset = 0;
  for (Tensor* p : parameters()) {
    std::copy(values.begin() + static_cast<std::ptrdiff_t>(offset),
              values.begin() + static_cast<std::ptrdiff_t>(offset + p->size()), p->data());
    offset += p->size();
  }
}

void Sequential::check_input(const Tensor& x) const {
  if (x.rank() != input_shape_.size() + 1 || x.dim(x.rank() - 1) != input_shape_.back()) {
    throw ShapeError("model expects batched input of per-sample shape " +
                     shape_to_string(input_shape_) + ", got " + shape_to_string(x.shape()));
  }
}

std::size_t Sequential::logit_layer_count() const {
  if (!layers_.empty() && specs_.back().kind == LayerKind::Softmax) return layers_.size() - 1;
  return layers_.size();
}

Tensor Sequential::logits(const Tensor& x, ForwardContext& ctx, Tape* tape) const {
  check_input(x);
  const std::size_t n = logit_layer_count();
  if (tape) {
    tape->caches.clear();
    tape->caches.resize(n);
  }
  Tensor act = x;
  for (std::size_t i = 0; i < n; ++i) {
    act = layers_[i]->forward(act, ctx, tape ? &tape->caches[i] : nullptr);
  }
  return act;
}

Tensor Sequential::forward(const Tensor& x, Mode mode, Rng* rng) const {
  ForwardContext ctx{mode, rng};
  Tensor act = logits(x, ctx);
  for (std::size_t i = logit_layer_count(); i < layers_.size(); ++i) {
    act = layers_[i]->forward(act, ctx, nullptr);
  }
  return act;
}

std::vector<Tensor> Sequential::backward(const Tape& tape, const Tensor& dlogits) const {
  const std::size_t n = logit_layer_count();
  if (tape.caches.size() != n) throw InvalidArgument("tape does not match this model");

  std::vector<std::size_t> offsets(layers_.size() + 1, 0);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    offsets[i + 1] = offsets[i] + std::as_const(*layers_[i]).parameters().size();
  }
  std::vector<Tensor> grads(offsets.back());

  Tensor grad = dlogits;
  for (std::size_t i = n; i-- > 0;) {
    std::span<Tensor> layer_grads(grads.data() + offsets[i], offsets[i + 1] - offsets[i]);
    grad = layers_[i]->backward(grad, *tape.caches[i], layer_grads);
  }
  return grads;
}

}  // namespace woodpest::nn
