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

#include "woodpest/ingest/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/write.hpp>

#include "woodpest/audio/wav.hpp"

namespace woodpest::ingest {

namespace asio = boost::asio;
using asio::ip::tcp;

struct FrameSender::Impl {
  asio::io_context io;
  tcp::socket socket{io};
};

FrameSender::FrameSender(const std::string& host, std::uint16_t port)
    : impl_(std::make_unique<Impl>()) {
  boost::system::error_code ec;
  tcp::resolver resolver(impl_->io);
  const auto endpoints = resolver.resolve(host, std::to_string(port), ec);
  if (!ec) asio::connect(impl_->socket, endpoints, ec);
  if (ec) throw TransportError("cannot connect to " + host + ":" + std::to_string(port) +
                               ": " + ec.message(), 0);
}

FrameSender::~FrameSender() { close(); }

void FrameSender::send(std::span<const std::uint8_t> bytes) {
  boost::system::error_code ec;
  asio::write(impl_->socket, asio::buffer(bytes.data(), bytes.size()), ec);
  if (ec) throw TransportError("send failed: " + ec.message(), sent_);
  ++sent_;
}

void FrameSender::send(const DeviceFrame& frame) { send(encode_frame(frame)); }

void FrameSender::close() {
  if (!impl_ || !impl_->socket.is_open()) return;
  boost::system::error_code ignored;
  impl_->socket.shutdown(tcp::socket::shutdown_both, ignored);
  impl_->socket.close(ignored);
}

std::size_t frame_count(std::size_t n_samples, std::size_t frame_samples) {
  if (frame_samples == 0) throw InvalidArgument("frame_samples must be positive");
  return (n_samples + frame_samples - 1) / frame_samples;
}

std::size_t simulate_device(const SimulatorConfig& cfg, const audio::AudioClip& source) {
  const std::size_t frames = frame_count(source.size(), cfg.frame_samples);
  if (cfg.local_dump) audio::save_wav(source, *cfg.local_dump);
  const auto pcm = audio::to_pcm16(source.samples());

  FrameSender sender(cfg.host, cfg.port);
  const auto start = std::chrono::steady_clock::now();
  const std::chrono::duration<double> frame_time(static_cast<double>(cfg.frame_samples) /
                                                 source.sample_rate());
  for (std::size_t k = 0; k < frames; ++k) {
    const std::size_t begin = k * cfg.frame_samples;
    const std::size_t end = std::min(pcm.size(), begin + cfg.frame_samples);
    DeviceFrame frame;
    frame.device_id = cfg.device_id;
    frame.seq = cfg.first_seq + static_cast<std::uint32_t>(k);
    frame.sample_rate = static_cast<std::uint32_t>(source.sample_rate());
    frame.payload = pcm16_payload(std::span(pcm).subspan(begin, end - begin));
    sender.send(frame);
    if (cfg.realtime) {
      std::this_thread::sleep_until(
          start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      frame_time * static_cast<double>(k + 1)));
    }
  }
  sender.close();
  return sender.frames_sent();
}

}  // namespace woodpest::ingest
