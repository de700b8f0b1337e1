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

#include "woodpest/models/model_zoo.hpp"

#include "woodpest/error.hpp"

namespace woodpest::models {

using nn::LayerSpec;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::DnnMean: return "dnn_mean";
    case ModelKind::CnnOnly: return "cnn";
    case ModelKind::LstmOnly: return "lstm";
    case ModelKind::CnnLstm: return "cnn_lstm";
  }
  return "unknown";
}

std::string_view display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::DnnMean: return "DNN (mean MFCC)";
    case ModelKind::CnnOnly: return "CNN only";
    case ModelKind::LstmOnly: return "LSTM only";
    case ModelKind::CnnLstm: return "CNN-LSTM";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind kind : kAllModelKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown model kind '" + std::string(name) +
                        "' (expected dnn_mean, cnn, lstm or cnn_lstm)");
}

bool uses_sequence(ModelKind kind) { return kind != ModelKind::DnnMean; }

ModelDims ModelDims::toy(std::size_t frames) {
  ModelDims d;
  d.frames = frames;
  d.dense_units = {12, 8, 6};
  d.conv1_filters = 4;
  d.conv2_filters = 5;
  d.lstm_hidden = 3;
  d.head_units = 6;
  return d;
}

std::vector<LayerSpec> layer_specs(ModelKind kind, const ModelDims& d) {
  std::vector<LayerSpec> specs;
  auto head = [&] {
    specs.push_back(LayerSpec::dense(d.head_units));
    specs.push_back(LayerSpec::relu());
    specs.push_back(LayerSpec::dropout(d.dropout));
    specs.push_back(LayerSpec::dense(d.n_classes));
    specs.push_back(LayerSpec::softmax());
  };
  auto conv_stack = [&] {
    specs.push_back(LayerSpec::conv1d(d.conv1_filters, d.conv1_kernel));
    specs.push_back(LayerSpec::relu());
    specs.push_back(LayerSpec::maxpool1d(d.pool));
    specs.push_back(LayerSpec::conv1d(d.conv2_filters, d.conv2_kernel));
    specs.push_back(LayerSpec::relu());
    specs.push_back(LayerSpec::maxpool1d(d.pool));
  };

  switch (kind) {
    case ModelKind::DnnMean:
      for (std::size_t units : d.dense_units) {
        specs.push_back(LayerSpec::dense(units));
        specs.push_back(LayerSpec::relu());
        specs.push_back(LayerSpec::dropout(d.dropout));
      }
      specs.push_back(LayerSpec::dense(d.n_classes));
      specs.push_back(LayerSpec::softmax());
      break;
    case ModelKind::CnnOnly:
      conv_stack();
      specs.push_back(LayerSpec::global_avg_pool());
      head();
      break;
    case ModelKind::LstmOnly:
      specs.push_back(LayerSpec::lstm(d.lstm_hidden));
      head();
      break;
    case ModelKind::CnnLstm:
      conv_stack();
      specs.push_back(LayerSpec::lstm(d.lstm_hidden));
      head();
      break;
  }
  return specs;
}

nn::Shape input_shape(ModelKind kind, const ModelDims& dims) {
  if (uses_sequence(kind)) return {dims.frames, dims.n_features};
  return {dims.n_features};
}

nn::Sequential build_model(ModelKind kind, const ModelDims& dims) {
  return nn::Sequential(input_shape(kind, dims), layer_specs(kind, dims));
}

nn::Sequential build_model(ModelKind kind, std::uint64_t seed, const ModelDims& dims) {
  auto graph = build_model(kind, dims);
  graph.initialize(seed);
  return graph;
}

std::size_t expected_parameter_count(ModelKind kind, const ModelDims& dims) {
  // Walk the spec chain with hand-derived shape rules.
  std::size_t total = 0;
  nn::Shape shape = input_shape(kind, dims);
  for (const auto& spec : layer_specs(kind, dims)) {
    total += nn::layer_parameter_count(spec, shape);
    switch (spec.kind) {
      case nn::LayerKind::Dense: shape = {spec.units}; break;
      case nn::LayerKind::Conv1D: shape = {shape[0], spec.filters}; break;
      case nn::LayerKind::MaxPool1D: shape = {shape[0] / spec.pool, shape[1]}; break;
      case nn::LayerKind::LSTM: shape = {spec.hidden}; break;
      case nn::LayerKind::GlobalAvgPool1D: shape = {shape[1]}; break;
      default: break;
    }
  }
  return total;
}

}  // namespace woodpest::models
