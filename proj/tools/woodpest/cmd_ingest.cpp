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

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include "cli_common.hpp"
#include "woodpest/audio/wav.hpp"
#include "woodpest/ingest/server.hpp"
#include "woodpest/ingest/simulator.hpp"
#include "woodpest/ingest/store.hpp"
#include "woodpest/nn/checkpoint.hpp"
#include "woodpest/synth/synth.hpp"

namespace woodpest::cli {

using nlohmann::json;

namespace {

std::atomic<bool> g_stop_requested{false};

extern "C" void on_stop_signal(int) { g_stop_requested = true; }

json stats_json(const ingest::ServerStats& s) {
  return {{"connections", s.connections},
          {"frames_accepted", s.frames_accepted},
          {"duplicate_frames", s.duplicate_frames},
          {"integrity_errors", s.integrity_errors},
          {"protocol_errors", s.protocol_errors},
          {"truncation_errors", s.truncation_errors},
          {"gaps", s.gaps},
          {"gap_samples", s.gap_samples},
          {"rate_changes", s.rate_changes},
          {"clips_classified", s.clips_classified},
          {"processing_errors", s.processing_errors},
          {"records_written", s.records_written}};
}

struct ServeOptions {
  std::uint16_t port = 7878;
  std::string bind = "127.0.0.1";
  std::string checkpoint;
  std::string store;
  std::string archive_dir;
  double clip_seconds = audio::kCanonicalClipSeconds;
  double duration = 0.0;
  std::uint64_t seed = 0;
};

void run_serve(const ServeOptions& o) {
  echo_config("serve", {{"bind", o.bind},
                        {"port", o.port},
                        {"checkpoint", o.checkpoint},
                        {"store", o.store},
                        {"archive_dir", o.archive_dir},
                        {"clip_seconds", o.clip_seconds},
                        {"duration", o.duration},
                        {"seed", o.seed}});
  // A bad checkpoint is a data error; everything after it is a startup failure.
  (void)nn::load_checkpoint(o.checkpoint);
  ingest::ServerConfig cfg;
  cfg.bind_address = o.bind;
  cfg.port = o.port;
  cfg.checkpoint_path = o.checkpoint;
  cfg.store_path = o.store;
  if (!o.archive_dir.empty()) cfg.archive_dir = o.archive_dir;
  cfg.clip_seconds = o.clip_seconds;

  std::optional<ingest::IngestServer> server;
  try {
    server.emplace(cfg, [](const ingest::ClipEvent& ev) {
      std::cerr << "[device " << ev.record.device_id << "] clip @" << ev.record.clip_start << " "
                << audio::to_string(ev.record.label) << " p=" << ev.record.p_infested
                << std::endl;
    });
    server->start();
  } catch (const IoError& e) {
    throw RuntimeFailure(std::string("startup failed: ") + e.what());
  }
  std::cerr << "listening on " << o.bind << ":" << server->port() << " (model "
            << server->model_id() << ")" << std::endl;

  std::signal(SIGINT, on_stop_signal);
  std::signal(SIGTERM, on_stop_signal);
  const auto start = std::chrono::steady_clock::now();
  while (!g_stop_requested) {
    if (o.duration > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >=
            o.duration) {
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  server->stop();
  json summary = stats_json(server->stats());
  summary["port"] = server->port();
  summary["model_id"] = server->model_id();
  print_summary(summary);
}

struct SimulateOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7878;
  std::uint64_t device_id = 1;
  std::size_t frame_samples = 2500;
  bool realtime = false;
  std::string wav;
  std::string label = "infested";
  std::uint64_t seed = 0;
  std::string local_dump;
  synth::SynthConfig synth;
  double decay_ms = 5.0;
};

void run_simulate(const SimulateOptions& o) {
  json config{{"host", o.host},
              {"port", o.port},
              {"device_id", o.device_id},
              {"frame_samples", o.frame_samples},
              {"realtime", o.realtime},
              {"seed", o.seed},
              {"local_dump", o.local_dump}};
  audio::AudioClip source;
  if (!o.wav.empty()) {
    config["wav"] = o.wav;
    echo_config("simulate-device", config);
    source = audio::load_wav(o.wav);
  } else {
    synth::SynthConfig cfg = o.synth;
    cfg.decay_s = o.decay_ms / 1000.0;
    cfg.seed = o.seed;
    cfg.validate();
    const auto label = audio::parse_label(o.label);
    config["label"] = audio::to_string(label);
    config["synth"] = json::parse(cfg.to_json());
    echo_config("simulate-device", config);
    source = label == audio::ClipLabel::Clean ? synth::gen_clean_clip(cfg, o.seed)
                                              : synth::gen_infested_clip(cfg, o.seed);
  }
  ingest::SimulatorConfig sim;
  sim.host = o.host;
  sim.port = o.port;
  sim.device_id = o.device_id;
  sim.frame_samples = o.frame_samples;
  sim.realtime = o.realtime;
  if (!o.local_dump.empty()) sim.local_dump = o.local_dump;
  const std::size_t sent = ingest::simulate_device(sim, source);
  print_summary({{"frames_sent", sent}, {"samples", source.size()},
                 {"sample_rate", source.sample_rate()}});
}

struct ReportOptions {
  std::string store;
  std::optional<std::uint64_t> device;
  std::string from;
  std::string to;
  std::string label;
  std::string out;
  std::uint64_t seed = 0;
};

void run_report(const ReportOptions& o) {
  ingest::StoreQuery q;
  q.device_id = o.device;
  if (!o.from.empty()) q.from = o.from;
  if (!o.to.empty()) q.to = o.to;
  if (!o.label.empty()) q.label = audio::parse_label(o.label);
  echo_config("report", {{"store", o.store},
                         {"device", o.device ? json(*o.device) : json(nullptr)},
                         {"from", o.from},
                         {"to", o.to},
                         {"label", o.label},
                         {"out", o.out},
                         {"seed", o.seed}});
  const auto result = ingest::query_store(o.store, q);
  json records = json::array();
  std::string lines;
  std::size_t infested = 0;
  for (const auto& r : result.records) {
    records.push_back(json::parse(r.to_json_line()));
    lines += r.to_json_line() + "\n";
    if (r.label == audio::ClipLabel::Infested) ++infested;
  }
  if (!o.out.empty()) write_text_file(o.out, lines);
  if (result.skipped_lines > 0) {
    std::cerr << "warning: skipped " << result.skipped_lines << " corrupt line(s)" << std::endl;
  }
  print_summary({{"count", result.records.size()},
                 {"infested", infested},
                 {"skipped_lines", result.skipped_lines},
                 {"records", std::move(records)}});
}

}  // namespace

void register_ingest_commands(CLI::App& app, Registry& registry) {
  auto sv = std::make_shared<ServeOptions>();
  auto* s = app.add_subcommand("serve", "Run the TCP ingestion server");
  s->add_option("--port", sv->port, "TCP port (0 picks a free port)")->capture_default_str();
  s->add_option("--bind", sv->bind, "Bind address")->capture_default_str();
  s->add_option("--checkpoint", sv->checkpoint, "Model checkpoint")->required();
  s->add_option("--store", sv->store, "Detection store (JSON lines)")->required();
  s->add_option("--archive-dir", sv->archive_dir, "Archive each assembled clip as WAV here");
  s->add_option("--clip-seconds", sv->clip_seconds, "Window length per detection")
      ->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--duration", sv->duration, "Stop after this many seconds (0 runs until signalled)")
      ->capture_default_str();
  s->add_option("--seed", sv->seed, "Seed (recorded only)")->capture_default_str();
  s->callback([sv, &registry] { registry.action = [sv] { run_serve(*sv); }; });

  auto sim = std::make_shared<SimulateOptions>();
  auto* d = app.add_subcommand("simulate-device", "Stream a WAV or synthetic clip to a server");
  d->add_option("--host", sim->host, "Server host")->capture_default_str();
  d->add_option("--port", sim->port, "Server port")->capture_default_str();
  d->add_option("--device-id", sim->device_id, "Device identifier")->capture_default_str();
  d->add_option("--frame-samples", sim->frame_samples, "Samples per frame")
      ->capture_default_str()->check(CLI::PositiveNumber);
  d->add_flag("--realtime", sim->realtime, "Pace frames at the sample rate");
  d->add_option("--wav", sim->wav, "Source WAV (otherwise a synthetic clip)");
  d->add_option("--label", sim->label, "Synthetic clip class: clean | infested")
      ->capture_default_str();
  d->add_option("--seed", sim->seed, "Synthetic clip seed")->capture_default_str();
  d->add_option("--local-dump", sim->local_dump, "Keep a device-side WAV copy here");
  d->add_option("--snr-db", sim->synth.snr_db, "Synthetic click SNR in dB")->capture_default_str();
  d->add_option("--click-rate", sim->synth.click_rate, "Synthetic clicks per second")
      ->capture_default_str();
  d->add_option("--decay-ms", sim->decay_ms, "Synthetic click decay in ms")->capture_default_str();
  d->add_option("--duration", sim->synth.duration_s, "Synthetic clip seconds")
      ->capture_default_str();
  d->callback([sim, &registry] { registry.action = [sim] { run_simulate(*sim); }; });

  auto rp = std::make_shared<ReportOptions>();
  auto* r = app.add_subcommand("report", "Query the detection store");
  r->add_option("--store", rp->store, "Detection store (JSON lines)")->required();
  r->add_option("--device", rp->device, "Only this device id");
  r->add_option("--from", rp->from, "Earliest timestamp (inclusive, ISO-8601)");
  r->add_option("--to", rp->to, "Latest timestamp (inclusive, ISO-8601)");
  r->add_option("--label", rp->label, "Only clean or infested records");
  r->add_option("--out", rp->out, "Write matching records as JSON lines");
  r->add_option("--seed", rp->seed, "Seed (recorded only)")->capture_default_str();
  r->callback([rp, &registry] { registry.action = [rp] { run_report(*rp); }; });
}

}  // namespace woodpest::cli
