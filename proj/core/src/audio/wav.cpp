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

#include "woodpest/audio/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "woodpest/error.hpp"

namespace woodpest::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

FmtChunk parse_fmt(std::span<const std::uint8_t> body) {
  if (body.size() < 16) throw FormatError("wav: fmt chunk shorter than 16 bytes");
  FmtChunk fmt;
  fmt.format = read_u16(body, 0);
  fmt.channels = read_u16(body, 2);
  fmt.sample_rate = read_u32(body, 4);
  fmt.bits = read_u16(body, 14);
  if (fmt.format == kFormatExtensible) {
    // WAVEFORMATEXTENSIBLE: the real format tag leads the sub-format GUID.
    if (body.size() < 40) throw FormatError("wav: truncated extensible fmt chunk");
    fmt.format = read_u16(body, 24);
  }
  return fmt;
}

}  // namespace

std::int16_t to_pcm16(double amplitude) {
  const double scaled = std::round(amplitude * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

std::vector<std::int16_t> to_pcm16(std::span<const double> samples) {
  std::vector<std::int16_t> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(),
                 [](double s) { return to_pcm16(s); });
  return out;
}

std::vector<double> from_pcm16(std::span<const std::int16_t> samples) {
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(),
                 [](std::int16_t s) { return from_pcm16(s); });
  return out;
}

AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string source_id) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw FormatError("wav: missing RIFF/WAVE header");
  }
  std::optional<FmtChunk> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (chunk_size > bytes.size() - body) {
      throw FormatError("wav: chunk extends past end of file");
    }
    if (tag_is(bytes, pos, "fmt ")) {
      fmt = parse_fmt(bytes.subspan(body, chunk_size));
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, chunk_size);
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1u);  // chunks are word aligned
  }
  if (!fmt) throw FormatError("wav: no fmt chunk");
  if (!have_data) throw FormatError("wav: no data chunk");

  if (fmt->format == kFormatFloat) {
    throw UnsupportedFormatError("wav: IEEE float samples are not supported");
  }
  if (fmt->format != kFormatPcm) {
    throw UnsupportedFormatError("wav: compressed format tag " +
                                 std::to_string(fmt->format) + " is not supported");
  }
  if (fmt->bits != 16) {
    throw UnsupportedFormatError("wav: " + std::to_string(fmt->bits) +
                                 "-bit PCM is not supported");
  }
  if (fmt->channels != 1 && fmt->channels != 2) {
    throw UnsupportedFormatError("wav: " + std::to_string(fmt->channels) +
                                 " channels; only mono and stereo are supported");
  }
  if (fmt->sample_rate == 0) throw FormatError("wav: zero sample rate");

  const std::size_t frame_bytes = 2u * fmt->channels;
  if (data.size() % frame_bytes != 0) {
    throw FormatError("wav: data chunk is not a whole number of frames");
  }
  const std::size_t frames = data.size() / frame_bytes;
  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < fmt->channels; ++ch) {
      const auto raw = static_cast<std::int16_t>(read_u16(data, i * frame_bytes + 2 * ch));
      acc += from_pcm16(raw);
    }
    samples[i] = acc / fmt->channels;
  }
  std::optional<std::string> id;
  if (!source_id.empty()) id = std::move(source_id);
  return AudioClip(std::move(samples), static_cast<int>(fmt->sample_rate), std::move(id));
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  const auto data_bytes = static_cast<std::uint32_t>(clip.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate()) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : clip.samples()) put_u16(out, static_cast<std::uint16_t>(to_pcm16(s)));
  return out;
}

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes, path.stem().string());
}

void save_wav(const AudioClip& clip, const std::filesystem::path& path) {
  const auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace woodpest::audio
