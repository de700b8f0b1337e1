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

#include "woodpest/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "woodpest/error.hpp"

namespace woodpest::nn {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'W', 'P', 'C', 'K'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> b, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
  return v;
}

json spec_to_json(const LayerSpec& s) {
  json j = {{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case LayerKind::Dense: j["units"] = s.units; break;
    case LayerKind::Conv1D:
      j["filters"] = s.filters;
      j["kernel"] = s.kernel;
      break;
    case LayerKind::MaxPool1D: j["pool"] = s.pool; break;
    case LayerKind::LSTM: j["hidden"] = s.hidden; break;
    case LayerKind::Dropout: j["rate"] = s.rate; break;
    default: break;
  }
  return j;
}

LayerSpec spec_from_json(const json& j) {
  LayerSpec s;
  s.kind = parse_layer_kind(j.at("kind").get<std::string>());
  s.units = j.value("units", std::size_t{0});
  s.filters = j.value("filters", std::size_t{0});
  s.kernel = j.value("kernel", std::size_t{0});
  s.pool = j.value("pool", std::size_t{0});
  s.hidden = j.value("hidden", std::size_t{0});
  s.rate = j.value("rate", 0.0);
  return s;
}

}  // namespace

Sequential Checkpoint::build() const {
  Sequential graph(input_shape, layers);
  graph.set_flat_parameters(parameters);
  return graph;
}

Checkpoint make_checkpoint(const Sequential& graph, std::string architecture, std::uint64_t seed,
                           std::vector<double> feature_mean, std::vector<double> feature_std) {
  return Checkpoint{std::move(architecture), seed,       graph.input_shape(),
                    graph.specs(),           std::move(feature_mean), std::move(feature_std),
                    graph.flat_parameters()};
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
  json layers = json::array();
  for (const auto& s : ckpt.layers) layers.push_back(spec_to_json(s));
  const json header = {{"architecture", ckpt.architecture},
                       {"seed", ckpt.seed},
                       {"input_shape", ckpt.input_shape},
                       {"layers", std::move(layers)},
                       {"feature_mean", ckpt.feature_mean},
                       {"feature_std", ckpt.feature_std}};
  const std::string text = header.dump();

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  put_u64(out, ckpt.parameters.size());
  for (double v : ckpt.parameters) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("checkpoint: bad magic");
  }
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto header_len = static_cast<std::size_t>(get_le(bytes, 8, 4));
  if (bytes.size() < 12 + header_len + 8) throw FormatError("checkpoint: truncated header");

  Checkpoint ckpt;
  try {
    const json header = json::parse(bytes.begin() + 12, bytes.begin() + 12 + header_len);
    ckpt.architecture = header.at("architecture").get<std::string>();
    ckpt.seed = header.at("seed").get<std::uint64_t>();
    ckpt.input_shape = header.at("input_shape").get<Shape>();
    for (const auto& l : header.at("layers")) ckpt.layers.push_back(spec_from_json(l));
    ckpt.feature_mean = header.at("feature_mean").get<std::vector<double>>();
    ckpt.feature_std = header.at("feature_std").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }

  std::size_t pos = 12 + header_len;
  const auto count = get_le(bytes, pos, 8);
  pos += 8;
  if (count > (bytes.size() - pos) / 8 || bytes.size() - pos != count * 8) {
    throw FormatError("checkpoint: payload length does not match parameter count");
  }
  ckpt.parameters.resize(count);
  for (std::size_t i = 0; i < count; ++i, pos += 8) {
    ckpt.parameters[i] = std::bit_cast<double>(get_le(bytes, pos, 8));
  }

  // Validate the architecture against the payload before handing it out.
  try {
    const Sequential graph(ckpt.input_shape, ckpt.layers);
    if (graph.parameter_count() != count) {
      throw FormatError("checkpoint: payload has " + std::to_string(count) +
                        " parameters, architecture needs " +
                        std::to_string(graph.parameter_count()));
    }
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("checkpoint: invalid architecture: ") + e.what());
  }
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::string& expected_architecture) {
  Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.architecture != expected_architecture) {
    throw FormatError("checkpoint '" + path.string() + "' holds architecture '" +
                      ckpt.architecture + "', expected '" + expected_architecture + "'");
  }
  return ckpt;
}

}  // namespace woodpest::nn
