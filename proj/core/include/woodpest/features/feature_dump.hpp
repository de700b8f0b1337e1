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

#include <filesystem>
#include <string>
#include <vector>

#include "woodpest/audio/clip.hpp"
#include "woodpest/features/mfcc.hpp"

namespace woodpest::features {

/// Labeled MFCC frames for a set of clips.
struct FeatureDataset {
  std::vector<std::string> ids;
  std::vector<audio::ClipLabel> labels;
  std::vector<MfccMatrix> matrices;

  std::size_t size() const { return matrices.size(); }
  void add(std::string id, audio::ClipLabel label, MfccMatrix matrix);
};

/// JSON container:
/// {"format":"woodpest-features","version":1,"records":[
///   {"id":..,"label":"clean"|"infested","frames":T,"coeffs":40,"values":[..]}]}
/// Values are row-major float64, written with round-trip precision.
std::string features_to_json(const FeatureDataset& dataset);
FeatureDataset features_from_json(const std::string& text);

void save_features(const FeatureDataset& dataset, const std::filesystem::path& path);
FeatureDataset load_features(const std::filesystem::path& path);

}  // namespace woodpest::features
