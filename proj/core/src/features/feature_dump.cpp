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

#include "woodpest/features/feature_dump.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "woodpest/error.hpp"

namespace woodpest::features {

using nlohmann::json;

void FeatureDataset::add(std::string id, audio::ClipLabel label, MfccMatrix matrix) {
  ids.push_back(std::move(id));
  labels.push_back(label);
  matrices.push_back(std::move(matrix));
}

std::string features_to_json(const FeatureDataset& dataset) {
  json records = json::array();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& m = dataset.matrices[i];
    records.push_back({{"id", dataset.ids[i]},
                       {"label", audio::to_string(dataset.labels[i])},
                       {"frames", m.frames()},
                       {"coeffs", m.coeffs()},
                       {"values", std::vector<double>(m.values().begin(), m.values().end())}});
  }
  json doc = {{"format", "woodpest-features"}, {"version", 1}, {"records", std::move(records)}};
  return doc.dump();
}

FeatureDataset features_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("feature dump: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "woodpest-features") {
    throw FormatError("feature dump: missing format tag 'woodpest-features'");
  }
  if (doc.value("version", 0) != 1) throw FormatError("feature dump: unsupported version");

  FeatureDataset dataset;
  try {
    for (const auto& rec : doc.at("records")) {
      const auto frames = rec.at("frames").get<std::size_t>();
      const auto coeffs = rec.at("coeffs").get<std::size_t>();
      auto values = rec.at("values").get<std::vector<double>>();
      dataset.add(rec.at("id").get<std::string>(),
                  audio::parse_label(rec.at("label").get<std::string>()),
                  MfccMatrix(frames, coeffs, std::move(values)));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("feature dump: ") + e.what());
  } catch (const ShapeError& e) {
    throw FormatError(std::string("feature dump: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("feature dump: ") + e.what());
  }
  return dataset;
}

void save_features(const FeatureDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << features_to_json(dataset) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

FeatureDataset load_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return features_from_json(buf.str());
}

}  // namespace woodpest::features
