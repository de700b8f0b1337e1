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
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "woodpest/audio/clip.hpp"

namespace woodpest::ingest {

struct DetectionRecord {
  std::string timestamp;  // ISO-8601 UTC, e.g. 2026-01-02T03:04:05.678Z
  std::uint64_t device_id = 0;
  std::uint64_t clip_start = 0;  // device-rate samples since stream start
  std::uint64_t clip_length = 0;
  audio::ClipLabel label = audio::ClipLabel::Clean;
  double p_infested = 0.0;
  std::string checkpoint_id;

  std::string to_json_line() const;
  /// Throws FormatError on malformed or out-of-range fields.
  static DetectionRecord from_json_line(std::string_view line);

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

/// Current UTC time with millisecond precision.
std::string utc_timestamp_now();

/// Append-only JSON-lines file with a single writer thread. append() is safe
/// from any thread and returns immediately.
class DetectionStore {
 public:
  /// Throws IoError if the file cannot be opened for appending.
  explicit DetectionStore(const std::filesystem::path& path);
  ~DetectionStore();
  DetectionStore(const DetectionStore&) = delete;
  DetectionStore& operator=(const DetectionStore&) = delete;

  void append(DetectionRecord record);
  /// Blocks until every queued record is on disk.
  void flush();
  /// Drains the queue and stops the writer; later appends are dropped.
  void close();

  std::uint64_t written() const { return written_.load(); }
  std::uint64_t write_failures() const { return failures_.load(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  void writer_loop();

  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable drained_cv_;
  std::deque<DetectionRecord> queue_;
  bool stopping_ = false;
  bool busy_ = false;
  std::atomic<std::uint64_t> written_{0};
  std::atomic<std::uint64_t> failures_{0};
  std::thread writer_;
};

struct StoreQuery {
  std::optional<std::uint64_t> device_id;
  std::optional<std::string> from;  // inclusive timestamp bound
  std::optional<std::string> to;    // inclusive timestamp bound
  std::optional<audio::ClipLabel> label;

  bool matches(const DetectionRecord& r) const;
};

struct QueryResult {
  std::vector<DetectionRecord> records;  // timestamp order
  std::size_t skipped_lines = 0;
};

/// Reads the store and filters it. Corrupt lines are skipped and counted.
/// Throws IoError if the file does not exist.
QueryResult query_store(const std::filesystem::path& path, const StoreQuery& query = {});

}  // namespace woodpest::ingest
