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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "woodpest/audio/clip.hpp"
#include "woodpest/ingest/store.hpp"
#include "woodpest/nn/checkpoint.hpp"

namespace woodpest::ingest {

struct ServerConfig {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  std::filesystem::path checkpoint_path;
  std::filesystem::path store_path;
  std::optional<std::filesystem::path> archive_dir;
  double clip_seconds = audio::kCanonicalClipSeconds;
};

struct ServerStats {
  std::uint64_t connections = 0;
  std::uint64_t frames_accepted = 0;
  std::uint64_t duplicate_frames = 0;
  std::uint64_t integrity_errors = 0;
  std::uint64_t protocol_errors = 0;
  std::uint64_t truncation_errors = 0;
  std::uint64_t gaps = 0;          // sequence discontinuities
  std::uint64_t gap_samples = 0;   // zero samples inserted for them
  std::uint64_t rate_changes = 0;  // partial windows dropped on a rate switch
  std::uint64_t clips_classified = 0;
  std::uint64_t processing_errors = 0;
  std::uint64_t records_written = 0;
};

/// A completed window at the device's own rate, with its stored record.
struct ClipEvent {
  audio::AudioClip clip;
  DetectionRecord record;
};
using ClipObserver = std::function<void(const ClipEvent&)>;

/// Hex CRC-32 of the checkpoint file bytes.
std::string checkpoint_id(const std::filesystem::path& checkpoint_path);

/// TCP ingestion server: one thread per device connection, a shared
/// read-only model and a single store writer.
class IngestServer {
 public:
  /// Loads the model and opens the store. Throws on an unreadable
  /// checkpoint or an unwritable store.
  explicit IngestServer(ServerConfig config, ClipObserver observer = {});
  ~IngestServer();
  IngestServer(const IngestServer&) = delete;
  IngestServer& operator=(const IngestServer&) = delete;

  /// Binds and starts accepting. Throws IoError if the port is unavailable.
  void start();
  /// Stops accepting, disconnects clients, joins all threads and flushes
  /// the store.
  void stop();

  std::uint16_t port() const;
  ServerStats stats() const;
  const std::string& model_id() const;

  /// Polls stats until pred holds or the timeout passes.
  bool wait_for(const std::function<bool(const ServerStats&)>& pred,
                std::chrono::milliseconds timeout) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace woodpest::ingest
