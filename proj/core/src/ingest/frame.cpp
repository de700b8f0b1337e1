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

#include "woodpest/ingest/frame.hpp"

#include <algorithm>
#include <string>

#include "woodpest/ingest/crc32.hpp"

namespace woodpest::ingest {

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
  }
}

template <typename T>
void set_le(std::span<std::uint8_t> out, std::size_t offset, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out[offset + i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(bytes[offset + i]) << (8 * i);
  }
  return static_cast<T>(v);
}

FrameHeader read_header(std::span<const std::uint8_t> bytes) {
  if (!std::equal(kFrameMagic.begin(), kFrameMagic.end(), bytes.begin())) {
    throw ProtocolError("bad frame magic");
  }
  FrameHeader h;
  h.device_id = get_le<std::uint64_t>(bytes, 4);
  h.seq = get_le<std::uint32_t>(bytes, 12);
  h.sample_rate = get_le<std::uint32_t>(bytes, 16);
  h.payload_length = get_le<std::uint32_t>(bytes, 20);
  if (h.payload_length % 2 != 0) throw ProtocolError("odd payload length");
  return h;
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const DeviceFrame& frame) {
  if (frame.payload.size() % 2 != 0) throw InvalidArgument("payload length must be even");
  if (frame.payload.size() > 0xFFFFFFFFu) throw InvalidArgument("payload too large");
  std::vector<std::uint8_t> out(frame.encoded_size());
  std::copy(kFrameMagic.begin(), kFrameMagic.end(), out.begin());
  set_le(out, 4, frame.device_id);
  set_le(out, 12, frame.seq);
  set_le(out, 16, frame.sample_rate);
  set_le(out, 20, static_cast<std::uint32_t>(frame.payload.size()));
  std::copy(frame.payload.begin(), frame.payload.end(), out.begin() + kFrameHeaderSize);
  const std::size_t body = kFrameHeaderSize + frame.payload.size();
  set_le(out, body, crc32(std::span(out).first(body)));
  return out;
}

DeviceFrame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize + kFrameTrailerSize) {
    throw TruncationError("frame shorter than header and checksum");
  }
  const FrameHeader h = read_header(bytes);
  const std::size_t expected =
      kFrameHeaderSize + static_cast<std::size_t>(h.payload_length) + kFrameTrailerSize;
  if (bytes.size() != expected) {
    throw TruncationError("frame declares " + std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()));
  }
  const std::size_t body = expected - kFrameTrailerSize;
  const auto stored = get_le<std::uint32_t>(bytes, body);
  if (crc32(bytes.first(body)) != stored) throw IntegrityError("frame checksum mismatch");
  DeviceFrame f;
  f.device_id = h.device_id;
  f.seq = h.seq;
  f.sample_rate = h.sample_rate;
  f.payload.assign(bytes.begin() + kFrameHeaderSize, bytes.begin() + body);
  return f;
}

FrameHeader parse_frame_header(std::span<const std::uint8_t, kFrameHeaderSize> bytes) {
  const FrameHeader h = read_header(bytes);
  if (h.payload_length > kMaxFramePayload) throw ProtocolError("frame payload exceeds limit");
  return h;
}

std::vector<std::uint8_t> pcm16_payload(std::span<const std::int16_t> samples) {
  std::vector<std::uint8_t> out;
  out.reserve(samples.size() * 2);
  for (std::int16_t s : samples) put_le(out, static_cast<std::uint16_t>(s));
  return out;
}

std::vector<std::int16_t> payload_samples(std::span<const std::uint8_t> payload) {
  if (payload.size() % 2 != 0) throw InvalidArgument("payload length must be even");
  std::vector<std::int16_t> out(payload.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::int16_t>(get_le<std::uint16_t>(payload, 2 * i));
  }
  return out;
}

}  // namespace woodpest::ingest
