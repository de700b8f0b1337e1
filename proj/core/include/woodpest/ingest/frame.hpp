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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "woodpest/error.hpp"

namespace woodpest::ingest {

/// Bad magic, odd payload length or an implausible header field.
class ProtocolError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Byte count disagrees with the declared payload length.
class TruncationError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Checksum mismatch.
class IntegrityError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Wire layout, integers little-endian:
///   "WBF1" | u64 device_id | u32 seq | u32 sample_rate | u32 payload length |
///   payload (PCM16 LE) | u32 crc32 of all preceding bytes
inline constexpr std::array<std::uint8_t, 4> kFrameMagic = {'W', 'B', 'F', '1'};
inline constexpr std::size_t kFrameHeaderSize = 24;
inline constexpr std::size_t kFrameTrailerSize = 4;
/// Largest payload a stream reader accepts.
inline constexpr std::uint32_t kMaxFramePayload = 1u << 20;

struct DeviceFrame {
  std::uint64_t device_id = 0;
  std::uint32_t seq = 0;
  std::uint32_t sample_rate = 0;
  std::vector<std::uint8_t> payload;

  std::size_t sample_count() const { return payload.size() / 2; }
  std::size_t encoded_size() const {
    return kFrameHeaderSize + payload.size() + kFrameTrailerSize;
  }

  friend bool operator==(const DeviceFrame&, const DeviceFrame&) = default;
};

struct FrameHeader {
  std::uint64_t device_id = 0;
  std::uint32_t seq = 0;
  std::uint32_t sample_rate = 0;
  std::uint32_t payload_length = 0;
};

/// Throws InvalidArgument on an odd payload length.
std::vector<std::uint8_t> encode_frame(const DeviceFrame& frame);

/// Exact inverse of encode_frame over a complete frame image.
DeviceFrame decode_frame(std::span<const std::uint8_t> bytes);

/// Validates magic, payload parity and the payload cap of a stream header.
FrameHeader parse_frame_header(std::span<const std::uint8_t, kFrameHeaderSize> bytes);

std::vector<std::uint8_t> pcm16_payload(std::span<const std::int16_t> samples);
std::vector<std::int16_t> payload_samples(std::span<const std::uint8_t> payload);

}  // namespace woodpest::ingest
