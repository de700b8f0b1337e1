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

#include <algorithm>
#include <filesystem>
#include <memory>
#include <vector>

#include "cli_common.hpp"
#include "woodpest/audio/transform.hpp"
#include "woodpest/audio/wav.hpp"
#include "woodpest/features/feature_dump.hpp"
#include "woodpest/features/mfcc.hpp"
#include "woodpest/synth/synth.hpp"

namespace woodpest::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SynthFlags {
  synth::SynthConfig cfg;
  double decay_ms = 5.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--sample-rate", cfg.sample_rate, "Sample rate in Hz")->capture_default_str();
    cmd->add_option("--duration", cfg.duration_s, "Clip length in seconds")->capture_default_str();
    cmd->add_option("--click-rate", cfg.click_rate, "Mean clicks per second")
        ->capture_default_str();
    cmd->add_option("--band-low", cfg.band_low_hz, "Click band lower edge in Hz")
        ->capture_default_str();
    cmd->add_option("--band-high", cfg.band_high_hz, "Click band upper edge in Hz")
        ->capture_default_str();
    cmd->add_option("--decay-ms", decay_ms, "Click decay time constant in ms")
        ->capture_default_str();
    cmd->add_option("--snr-db", cfg.snr_db, "Click-to-noise energy ratio in dB")
        ->capture_default_str();
  }

  synth::SynthConfig resolve(std::uint64_t seed) const {
    synth::SynthConfig out = cfg;
    out.decay_s = decay_ms / 1000.0;
    out.seed = seed;
    out.validate();
    return out;
  }
};

json synth_json(const synth::SynthConfig& c) { return json::parse(c.to_json()); }

struct GenSynthOptions {
  std::string out;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  SynthFlags synth;
};

void run_gen_synth(const GenSynthOptions& o) {
  const auto cfg = o.synth.resolve(o.seed);
  echo_config("gen-synth", {{"out", o.out}, {"n", o.n}, {"seed", o.seed}, {"synth", synth_json(cfg)}});
  const auto manifest = synth::gen_dataset(o.out, o.n, cfg, o.seed);
  print_summary({{"out", o.out},
                 {"clips", manifest.entries.size()},
                 {"manifest", (fs::path(o.out) / "manifest.json").string()}});
}

struct ExtractOptions {
  std::string input;
  std::string out;
  std::uint64_t seed = 0;
};

std::vector<fs::path> wav_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void run_extract(const ExtractOptions& o) {
  echo_config("extract", {{"input", o.input},
                          {"out", o.out},
                          {"seed", o.seed},
                          {"sample_rate", audio::kCanonicalSampleRate},
                          {"clip_seconds", audio::kCanonicalClipSeconds}});
  const fs::path root(o.input);
  features::FeatureDataset dataset;
  const features::MfccExtractor extractor;
  std::size_t files = 0;
  for (auto label : {audio::ClipLabel::Clean, audio::ClipLabel::Infested}) {
    const std::string name(audio::to_string(label));
    const fs::path dir = root / name;
    if (!fs::is_directory(dir)) {
      throw InvalidDatasetError("expected a '" + name + "' directory under " + o.input);
    }
    for (const auto& path : wav_files(dir)) {
      const auto clip = audio::load_wav(path).with_source_id(name + "/" + path.stem().string());
      const auto canon = audio::resample_linear(clip, audio::kCanonicalSampleRate);
      for (const auto& window : audio::segment_clip(canon, audio::kCanonicalClipSeconds)) {
        dataset.add(window.source_id().value_or(name), label, extractor.frames(window));
      }
      ++files;
    }
  }
  if (dataset.size() == 0) throw InvalidDatasetError("no WAV files found under " + o.input);
  features::save_features(dataset, o.out);
  print_summary({{"out", o.out}, {"files", files}, {"records", dataset.size()}});
}

}  // namespace

void register_data_commands(CLI::App& app, Registry& registry) {
  auto gen = std::make_shared<GenSynthOptions>();
  auto* g = app.add_subcommand("gen-synth", "Generate a labeled synthetic WAV dataset");
  g->add_option("--out", gen->out, "Output dataset directory")->required();
  g->add_option("--n", gen->n, "Clips per class")->capture_default_str()->check(
      CLI::PositiveNumber);
  g->add_option("--seed", gen->seed, "Master seed")->capture_default_str();
  gen->synth.add_to(g);
  g->callback([gen, &registry] { registry.action = [gen] { run_gen_synth(*gen); }; });

  auto ext = std::make_shared<ExtractOptions>();
  auto* e = app.add_subcommand("extract", "Compute MFCC features for a clean/infested WAV tree");
  e->add_option("--input", ext->input, "Dataset directory with clean/ and infested/")
      ->required();
  e->add_option("--out", ext->out, "Feature dump (JSON)")->required();
  e->add_option("--seed", ext->seed, "Seed (recorded only; extraction is deterministic)")
      ->capture_default_str();
  e->callback([ext, &registry] { registry.action = [ext] { run_extract(*ext); }; });
}

}  // namespace woodpest::cli
