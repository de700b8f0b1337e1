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

#include "woodpest/ingest/store.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "woodpest/error.hpp"

namespace woodpest::ingest {

using nlohmann::json;

std::string DetectionRecord::to_json_line() const {
  return json{{"timestamp", timestamp},
              {"device_id", device_id},
              {"clip_start", clip_start},
              {"clip_length", clip_length},
              {"label", audio::to_string(label)},
              {"p_infested", p_infested},
              {"checkpoint_id", checkpoint_id}}
      .dump();
}

DetectionRecord DetectionRecord::from_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    DetectionRecord r;
    r.timestamp = j.at("timestamp").get<std::string>();
    r.device_id = j.at("device_id").get<std::uint64_t>();
    r.clip_start = j.at("clip_start").get<std::uint64_t>();
    r.clip_length = j.at("clip_length").get<std::uint64_t>();
    r.label = audio::parse_label(j.at("label").get<std::string>());
    r.p_infested = j.at("p_infested").get<double>();
    r.checkpoint_id = j.at("checkpoint_id").get<std::string>();
    if (!(r.p_infested >= 0.0 && r.p_infested <= 1.0)) {
      throw FormatError("p_infested outside [0, 1]");
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad detection record: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("bad detection record: ") + e.what());
  }
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms % 1000));
  return buf;
}

DetectionStore::DetectionStore(const std::filesystem::path& path) : path_(path) {
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw IoError("cannot open store " + path.string() + " for appending");
  writer_ = std::thread([this] { writer_loop(); });
}

DetectionStore::~DetectionStore() { close(); }

void DetectionStore::append(DetectionRecord record) {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return;
    queue_.push_back(std::move(record));
  }
  cv_.notify_one();
}

void DetectionStore::flush() {
  std::unique_lock lock(mu_);
  drained_cv_.wait(lock, [this] { return queue_.empty() && !busy_; });
}

void DetectionStore::close() {
  {
    std::lock_guard lock(mu_);
    if (stopping_ && !writer_.joinable()) return;
    stopping_ = true;
  }
  cv_.notify_one();
  if (writer_.joinable()) writer_.join();
}

void DetectionStore::writer_loop() {
  std::unique_lock lock(mu_);
  while (true) {
    cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
    if (queue_.empty()) break;
    std::deque<DetectionRecord> batch;
    batch.swap(queue_);
    busy_ = true;
    lock.unlock();
    for (const auto& r : batch) out_ << r.to_json_line() << '\n';
    out_.flush();
    if (out_) {
      written_ += batch.size();
    } else {
      failures_ += batch.size();
      out_.clear();
    }
    lock.lock();
    busy_ = false;
    drained_cv_.notify_all();
  }
  drained_cv_.notify_all();
}

bool StoreQuery::matches(const DetectionRecord& r) const {
  if (device_id && r.device_id != *device_id) return false;
  if (label && r.label != *label) return false;
  if (from && r.timestamp < *from) return false;
  if (to && r.timestamp > *to) return false;
  return true;
}

QueryResult query_store(const std::filesystem::path& path, const StoreQuery& query) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open store " + path.string());
  QueryResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      auto r = DetectionRecord::from_json_line(line);
      if (query.matches(r)) result.records.push_back(std::move(r));
    } catch (const FormatError&) {
      ++result.skipped_lines;
    }
  }
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const DetectionRecord& a, const DetectionRecord& b) {
                     return a.timestamp < b.timestamp;
                   });
  return result;
}

}  // namespace woodpest::ingest
