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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "woodpest/nn/sequential.hpp"

namespace woodpest::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary layout, all integers little-endian:
///   "WPCK" | u32 version | u32 header length | JSON header |
///   u64 parameter count | float64 parameters in layer order
/// The header holds architecture name, seed, input shape, layer specs and
/// the input standardization statistics.
struct Checkpoint {
  std::string architecture;
  std::uint64_t seed = 0;
  Shape input_shape;
  std::vector<LayerSpec> layers;
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  std::vector<double> parameters;

  /// Rebuilds the graph and loads the parameters.
  Sequential build() const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

Checkpoint make_checkpoint(const Sequential& graph, std::string architecture,
                           std::uint64_t seed, std::vector<double> feature_mean = {},
                           std::vector<double> feature_std = {});

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
/// Throws FormatError on a malformed image.
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);
/// Also throws FormatError when the stored architecture differs.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::string& expected_architecture);

}  // namespace woodpest::nn
