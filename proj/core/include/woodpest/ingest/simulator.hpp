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
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "woodpest/audio/clip.hpp"
#include "woodpest/error.hpp"
#include "woodpest/ingest/frame.hpp"

namespace woodpest::ingest {

/// Connection refused or dropped; carries the frames sent before failure.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::size_t frames_sent)
      : Error(what), frames_sent_(frames_sent) {}
  std::size_t frames_sent() const { return frames_sent_; }

 private:
  std::size_t frames_sent_;
};

/// Blocking TCP client for raw frame images.
class FrameSender {
 public:
  /// Throws TransportError(0) if the connection fails.
  FrameSender(const std::string& host, std::uint16_t port);
  ~FrameSender();
  FrameSender(const FrameSender&) = delete;
  FrameSender& operator=(const FrameSender&) = delete;

  /// Throws TransportError with the number of frames sent so far.
  void send(std::span<const std::uint8_t> bytes);
  void send(const DeviceFrame& frame);
  std::size_t frames_sent() const { return sent_; }
  void close();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t sent_ = 0;
};

struct SimulatorConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::uint64_t device_id = 1;
  std::size_t frame_samples = 2500;
  bool realtime = false;
  std::uint32_t first_seq = 0;
  /// Optional copy of the streamed audio kept on the "device".
  std::optional<std::filesystem::path> local_dump;
};

/// Number of frames a source of n samples is split into.
std::size_t frame_count(std::size_t n_samples, std::size_t frame_samples);

/// Streams the clip as PCM16 frames at its own rate. Realtime mode sleeps so
/// frame k finishes no earlier than (k + 1) frame durations after the start.
/// Returns frames sent; throws TransportError on connection failure.
std::size_t simulate_device(const SimulatorConfig& cfg, const audio::AudioClip& source);

}  // namespace woodpest::ingest
