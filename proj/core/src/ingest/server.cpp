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

#include "woodpest/ingest/server.hpp"

#include <sys/socket.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <list>
#include <map>
#include <mutex>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/read.hpp>

#include "woodpest/audio/wav.hpp"
#include "woodpest/error.hpp"
#include "woodpest/ingest/crc32.hpp"
#include "woodpest/ingest/frame.hpp"
#include "woodpest/models/classifier.hpp"

namespace woodpest::ingest {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Counters {
  std::atomic<std::uint64_t> connections{0};
  std::atomic<std::uint64_t> frames_accepted{0};
  std::atomic<std::uint64_t> duplicate_frames{0};
  std::atomic<std::uint64_t> integrity_errors{0};
  std::atomic<std::uint64_t> protocol_errors{0};
  std::atomic<std::uint64_t> truncation_errors{0};
  std::atomic<std::uint64_t> gaps{0};
  std::atomic<std::uint64_t> gap_samples{0};
  std::atomic<std::uint64_t> rate_changes{0};
  std::atomic<std::uint64_t> clips_classified{0};
  std::atomic<std::uint64_t> processing_errors{0};
};

struct DeviceState {
  std::mutex mu;
  bool started = false;
  std::uint32_t last_seq = 0;
  std::uint32_t rate = 0;
  std::vector<std::int16_t> buffer;
  std::uint64_t buffer_start = 0;  // stream position of buffer[0]
};

struct Connection {
  std::shared_ptr<tcp::socket> socket;
  std::shared_ptr<std::atomic<bool>> done;
  std::thread thread;
};

}  // namespace

std::string checkpoint_id(const std::filesystem::path& checkpoint_path) {
  const auto bytes = read_file(checkpoint_path);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", crc32(bytes));
  return buf;
}

struct IngestServer::Impl {
  Impl(ServerConfig c, ClipObserver obs, const nn::Checkpoint& ckpt, std::string id)
      : cfg(std::move(c)),
        observer(std::move(obs)),
        classifier(ckpt),
        model_id(std::move(id)),
        store(cfg.store_path) {}

  ServerConfig cfg;
  ClipObserver observer;
  models::Classifier classifier;
  std::string model_id;
  DetectionStore store;
  Counters counters;

  asio::io_context io;
  std::optional<tcp::acceptor> acceptor;
  std::uint16_t bound_port = 0;
  std::atomic<bool> running{false};
  std::thread accept_thread;

  std::mutex conn_mu;
  std::list<Connection> connections;

  std::mutex dev_mu;
  std::map<std::uint64_t, std::unique_ptr<DeviceState>> devices;

  DeviceState& device(std::uint64_t id) {
    std::lock_guard lock(dev_mu);
    auto& slot = devices[id];
    if (!slot) slot = std::make_unique<DeviceState>();
    return *slot;
  }

  std::size_t window_for(std::uint32_t rate) const {
    return static_cast<std::size_t>(std::llround(cfg.clip_seconds * rate));
  }

  void emit(std::uint64_t device_id, std::uint32_t rate, std::uint64_t start,
            std::span<const std::int16_t> samples) {
    const std::string name = "device" + std::to_string(device_id) + "_" + std::to_string(start);
    audio::AudioClip clip(audio::from_pcm16(samples), static_cast<int>(rate), name);
    const auto result = classifier.classify(clip);
    DetectionRecord rec;
    rec.timestamp = utc_timestamp_now();
    rec.device_id = device_id;
    rec.clip_start = start;
    rec.clip_length = samples.size();
    rec.label = result.label;
    rec.p_infested = std::clamp(result.p_infested, 0.0, 1.0);
    rec.checkpoint_id = model_id;
    store.append(rec);
    if (cfg.archive_dir) audio::save_wav(clip, *cfg.archive_dir / (name + ".wav"));
    ++counters.clips_classified;
    if (observer) observer(ClipEvent{std::move(clip), std::move(rec)});
  }

  void handle_frame(const DeviceFrame& frame) {
    if (frame.sample_rate == 0) {
      ++counters.protocol_errors;
      return;
    }
    DeviceState& st = device(frame.device_id);
    std::lock_guard lock(st.mu);
    if (st.started && frame.sample_rate != st.rate) {
      ++counters.rate_changes;
      st.buffer_start += st.buffer.size();
      st.buffer.clear();
      st.started = false;
    }
    const std::size_t window = std::max<std::size_t>(1, window_for(frame.sample_rate));
    if (st.started) {
      if (frame.seq <= st.last_seq) {
        ++counters.duplicate_frames;
        return;
      }
      if (frame.seq > st.last_seq + 1) {
        const std::uint64_t missing = frame.seq - st.last_seq - 1;
        // Capped at one window so a wild sequence jump cannot exhaust memory.
        const std::size_t fill = static_cast<std::size_t>(
            std::min<std::uint64_t>(missing * frame.sample_count(), window));
        ++counters.gaps;
        counters.gap_samples += fill;
        st.buffer.insert(st.buffer.end(), fill, 0);
      }
    }
    st.started = true;
    st.rate = frame.sample_rate;
    st.last_seq = frame.seq;
    const auto samples = payload_samples(frame.payload);
    st.buffer.insert(st.buffer.end(), samples.begin(), samples.end());
    ++counters.frames_accepted;

    std::size_t consumed = 0;
    while (st.buffer.size() - consumed >= window) {
      const std::span<const std::int16_t> clip(st.buffer.data() + consumed, window);
      try {
        emit(frame.device_id, st.rate, st.buffer_start + consumed, clip);
      } catch (const std::exception&) {
        ++counters.processing_errors;
      }
      consumed += window;
    }
    if (consumed > 0) {
      st.buffer.erase(st.buffer.begin(), st.buffer.begin() + static_cast<std::ptrdiff_t>(consumed));
      st.buffer_start += consumed;
    }
  }

  void serve_connection(tcp::socket& sock) {
    std::array<std::uint8_t, kFrameHeaderSize> header{};
    std::vector<std::uint8_t> image;
    while (running) {
      boost::system::error_code ec;
      const std::size_t got = asio::read(sock, asio::buffer(header), ec);
      if (ec) {
        if (got > 0) ++counters.truncation_errors;
        return;
      }
      FrameHeader h;
      try {
        h = parse_frame_header(header);
      } catch (const ProtocolError&) {
        ++counters.protocol_errors;
        return;  // stream cannot be resynchronized
      }
      image.resize(kFrameHeaderSize + h.payload_length + kFrameTrailerSize);
      std::copy(header.begin(), header.end(), image.begin());
      asio::read(sock, asio::buffer(image.data() + kFrameHeaderSize, image.size() - kFrameHeaderSize),
                 ec);
      if (ec) {
        ++counters.truncation_errors;
        return;
      }
      DeviceFrame frame;
      try {
        frame = decode_frame(image);
      } catch (const IntegrityError&) {
        ++counters.integrity_errors;
        continue;
      } catch (const FormatError&) {
        ++counters.protocol_errors;
        return;
      }
      try {
        handle_frame(frame);
      } catch (const std::exception&) {
        ++counters.processing_errors;
      }
    }
  }

  void reap_finished() {
    std::lock_guard lock(conn_mu);
    for (auto it = connections.begin(); it != connections.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }

  void accept_loop() {
    while (running) {
      auto sock = std::make_shared<tcp::socket>(io);
      boost::system::error_code ec;
      acceptor->accept(*sock, ec);
      if (!running) break;
      if (ec) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        continue;
      }
      reap_finished();
      ++counters.connections;
      auto done = std::make_shared<std::atomic<bool>>(false);
      std::lock_guard lock(conn_mu);
      connections.push_back(Connection{sock, done, std::thread([this, sock, done] {
                                         serve_connection(*sock);
                                         boost::system::error_code ignored;
                                         sock->shutdown(tcp::socket::shutdown_both, ignored);
                                         done->store(true);
                                       })});
    }
  }
};

IngestServer::IngestServer(ServerConfig config, ClipObserver observer) {
  if (!(config.clip_seconds > 0.0)) throw InvalidArgument("clip_seconds must be positive");
  const auto bytes = read_file(config.checkpoint_path);
  const auto ckpt = nn::decode_checkpoint(bytes);
  char id[16];
  std::snprintf(id, sizeof id, "%08x", crc32(bytes));
  if (config.archive_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*config.archive_dir, ec);
    if (ec) throw IoError("cannot create archive dir " + config.archive_dir->string());
  }
  impl_ = std::make_unique<Impl>(std::move(config), std::move(observer), ckpt, id);
}

IngestServer::~IngestServer() { stop(); }

void IngestServer::start() {
  auto& s = *impl_;
  if (s.running) return;
  boost::system::error_code ec;
  const auto address = asio::ip::make_address(s.cfg.bind_address, ec);
  if (ec) throw InvalidArgument("bad bind address " + s.cfg.bind_address);
  const tcp::endpoint endpoint(address, s.cfg.port);
  s.acceptor.emplace(s.io);
  s.acceptor->open(endpoint.protocol(), ec);
  if (!ec) s.acceptor->set_option(tcp::acceptor::reuse_address(true), ec);
  if (!ec) s.acceptor->bind(endpoint, ec);
  if (!ec) s.acceptor->listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    s.acceptor.reset();
    throw IoError("cannot listen on " + s.cfg.bind_address + ":" + std::to_string(s.cfg.port) +
                  ": " + ec.message());
  }
  s.bound_port = s.acceptor->local_endpoint().port();
  s.running = true;
  s.accept_thread = std::thread([&s] { s.accept_loop(); });
}

void IngestServer::stop() {
  if (!impl_) return;
  auto& s = *impl_;
  if (s.running.exchange(false)) {
    // shutdown() wakes a thread blocked in accept() or read().
    ::shutdown(s.acceptor->native_handle(), SHUT_RDWR);
    s.accept_thread.join();
    {
      std::lock_guard lock(s.conn_mu);
      for (auto& c : s.connections) ::shutdown(c.socket->native_handle(), SHUT_RDWR);
    }
    for (auto& c : s.connections) c.thread.join();
    s.connections.clear();
    boost::system::error_code ignored;
    s.acceptor->close(ignored);
  }
  s.store.close();
}

std::uint16_t IngestServer::port() const { return impl_->bound_port; }

const std::string& IngestServer::model_id() const { return impl_->model_id; }

ServerStats IngestServer::stats() const {
  const auto& c = impl_->counters;
  ServerStats s;
  s.connections = c.connections;
  s.frames_accepted = c.frames_accepted;
  s.duplicate_frames = c.duplicate_frames;
  s.integrity_errors = c.integrity_errors;
  s.protocol_errors = c.protocol_errors;
  s.truncation_errors = c.truncation_errors;
  s.gaps = c.gaps;
  s.gap_samples = c.gap_samples;
  s.rate_changes = c.rate_changes;
  s.clips_classified = c.clips_classified;
  s.processing_errors = c.processing_errors;
  s.records_written = impl_->store.written();
  return s;
}

bool IngestServer::wait_for(const std::function<bool(const ServerStats&)>& pred,
                            std::chrono::milliseconds timeout) const {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    if (pred(stats())) return true;
    if (std::chrono::steady_clock::now() >= deadline) return false;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

}  // namespace woodpest::ingest
