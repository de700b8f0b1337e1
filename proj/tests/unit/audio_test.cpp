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

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "woodpest/audio/clip.hpp"
#include "woodpest/audio/transform.hpp"
#include "woodpest/audio/wav.hpp"
#include "woodpest/error.hpp"

namespace woodpest::audio {
namespace {

using testsupport::TempDir;
using testsupport::uniform_values;

// Minimal RIFF writer for hand-built fixtures.
std::vector<std::uint8_t> riff(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                               std::uint16_t bits, const std::vector<std::uint8_t>& data) {
  std::vector<std::uint8_t> out;
  auto u16 = [&](std::uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back(v >> 8);
  };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
  };
  auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  tag("RIFF");
  u32(static_cast<std::uint32_t>(36 + data.size()));
  tag("WAVE");
  tag("fmt ");
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  tag("data");
  u32(static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

std::vector<std::uint8_t> pcm_bytes(const std::vector<std::int16_t>& s) {
  std::vector<std::uint8_t> out;
  for (auto v : s) {
    const auto u = static_cast<std::uint16_t>(v);
    out.push_back(u & 0xFF);
    out.push_back(u >> 8);
  }
  return out;
}

TEST(AudioClip, ClampsSamplesIntoUnitRange) {
  AudioClip clip({-2.0, -0.5, 0.25, 3.0}, 8000);
  EXPECT_EQ(std::vector<double>(clip.samples().begin(), clip.samples().end()),
            (std::vector<double>{-1.0, -0.5, 0.25, 1.0}));
  EXPECT_EQ(clip.sample_rate(), 8000);
  EXPECT_DOUBLE_EQ(clip.duration(), 4.0 / 8000.0);
}

TEST(AudioClip, RejectsInvalidRateAndNan) {
  EXPECT_THROW(AudioClip({0.0}, 0), InvalidArgument);
  EXPECT_THROW(AudioClip({0.0}, -16000), InvalidArgument);
  EXPECT_THROW(AudioClip({std::nan("")}, 16000), InvalidArgument);
}

TEST(ClipLabel, StableCodesAndParsing) {
  EXPECT_EQ(static_cast<int>(ClipLabel::Clean), 0);
  EXPECT_EQ(static_cast<int>(ClipLabel::Infested), 1);
  EXPECT_EQ(parse_label("clean"), ClipLabel::Clean);
  EXPECT_EQ(parse_label("infested"), ClipLabel::Infested);
  EXPECT_EQ(parse_label("1"), ClipLabel::Infested);
  EXPECT_EQ(to_string(ClipLabel::Infested), "infested");
  EXPECT_THROW(parse_label("termite"), InvalidArgument);
}

TEST(Wav, DecodesFixedPointMapping) {
  const auto bytes = riff(1, 1, 16000, 16, pcm_bytes({0, 16384, -32768}));
  const auto clip = decode_wav(bytes);
  EXPECT_EQ(clip.sample_rate(), 16000);
  ASSERT_EQ(clip.size(), 3u);
  EXPECT_EQ(clip.samples()[0], 0.0);
  EXPECT_EQ(clip.samples()[1], 0.5);
  EXPECT_EQ(clip.samples()[2], -1.0);
}

TEST(Wav, AveragesStereoToMono) {
  // Channels [1.0, 0.0] where 1.0 is the largest code 32767.
  const auto bytes = riff(1, 2, 16000, 16, pcm_bytes({32767, 0, -32768, -32768}));
  const auto clip = decode_wav(bytes);
  ASSERT_EQ(clip.size(), 2u);
  EXPECT_NEAR(clip.samples()[0], 0.5, 1.0 / 32768);
  EXPECT_EQ(clip.samples()[1], -1.0);
}

TEST(Wav, RejectsUnsupportedEncodings) {
  const std::vector<std::uint8_t> four(4, 0);
  EXPECT_THROW(decode_wav(riff(3, 1, 16000, 32, four)), UnsupportedFormatError);   // float
  EXPECT_THROW(decode_wav(riff(1, 1, 16000, 24, {0, 0, 0})), UnsupportedFormatError);
  EXPECT_THROW(decode_wav(riff(2, 1, 16000, 4, four)), UnsupportedFormatError);    // ADPCM
  EXPECT_THROW(decode_wav(riff(1, 3, 16000, 16, std::vector<std::uint8_t>(6, 0))),
               UnsupportedFormatError);
}

TEST(Wav, RejectsMalformedHeaders) {
  auto good = riff(1, 1, 16000, 16, pcm_bytes({1, 2, 3}));
  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_wav(bad_magic), FormatError);
  const std::vector<std::uint8_t> truncated(good.begin(), good.begin() + 20);
  EXPECT_THROW(decode_wav(truncated), FormatError);
  EXPECT_THROW(decode_wav(std::vector<std::uint8_t>{}), FormatError);
  // Format errors must not be reported as unsupported encodings.
  try {
    decode_wav(bad_magic);
  } catch (const UnsupportedFormatError&) {
    FAIL() << "bad magic classified as unsupported format";
  } catch (const FormatError&) {
  }
}

TEST(Wav, ZeroClipWritesZeroDataBytes) {
  const auto bytes = encode_wav(AudioClip(std::vector<double>(50, 0.0), 16000));
  ASSERT_EQ(bytes.size(), 44u + 100u);
  for (std::size_t i = 44; i < bytes.size(); ++i) EXPECT_EQ(bytes[i], 0) << i;
}

TEST(Wav, FullScaleSaturatesAt32767) {
  const auto bytes = encode_wav(AudioClip({1.0, -1.0}, 16000));
  EXPECT_EQ(bytes[44], 0xFF);
  EXPECT_EQ(bytes[45], 0x7F);
  EXPECT_EQ(bytes[46], 0x00);
  EXPECT_EQ(bytes[47], 0x80);
  EXPECT_EQ(to_pcm16(1.0), 32767);
  EXPECT_EQ(to_pcm16(-1.0), -32768);
}

TEST(Wav, RandomRoundTripWithinOneQuantum) {
  TempDir dir;
  const AudioClip clip(uniform_values(100, 11), 22050);
  save_wav(clip, dir / "r.wav");
  const auto back = load_wav(dir / "r.wav");
  EXPECT_EQ(back.sample_rate(), 22050);
  ASSERT_EQ(back.size(), clip.size());
  for (std::size_t i = 0; i < clip.size(); ++i) {
    EXPECT_LE(std::abs(back.samples()[i] - clip.samples()[i]), 1.0 / 32768) << i;
  }
  EXPECT_EQ(back.source_id(), std::optional<std::string>("r"));
}

TEST(Wav, UnwritablePathIsIoError) {
  EXPECT_THROW(save_wav(AudioClip({0.0}, 16000), "/nonexistent_dir/x/y.wav"), IoError);
  EXPECT_THROW(load_wav("/nonexistent_dir/x/y.wav"), IoError);
}

TEST(Resample, SameRateIsIdentity) {
  const AudioClip clip(uniform_values(333, 3), 16000);
  EXPECT_EQ(resample_linear(clip, 16000), clip);
}

TEST(Resample, UpsampleHoldsFinalValue) {
  const auto out = resample_linear(AudioClip({0.0, 1.0}, 2), 4);
  EXPECT_EQ(out.sample_rate(), 4);
  EXPECT_EQ(std::vector<double>(out.samples().begin(), out.samples().end()),
            (std::vector<double>{0.0, 0.5, 1.0, 1.0}));
}

TEST(Resample, SineDownsampleMatchesAnalyticSamples) {
  std::vector<double> hi(16000);
  for (std::size_t i = 0; i < hi.size(); ++i) {
    hi[i] = 0.5 * std::sin(2.0 * std::numbers::pi * 440.0 * i / 16000.0);
  }
  const auto out = resample_linear(AudioClip(hi, 16000), 8000);
  ASSERT_EQ(out.size(), 8000u);
  double sq = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double ref = 0.5 * std::sin(2.0 * std::numbers::pi * 440.0 * i / 8000.0);
    sq += (out.samples()[i] - ref) * (out.samples()[i] - ref);
  }
  EXPECT_LT(std::sqrt(sq / out.size()), 0.01);
}

TEST(Resample, OutputLengthRounds) {
  const auto out = resample_linear(AudioClip(std::vector<double>(441, 0.1), 44100), 16000);
  EXPECT_EQ(out.size(), 160u);
  EXPECT_THROW(resample_linear(AudioClip({0.0}, 100), 0), InvalidArgument);
}

TEST(Segment, TwelveSecondsGivesThreeWindows) {
  const int rate = 100;
  const auto samples = uniform_values(12 * rate, 5);
  const auto segs = segment_clip(AudioClip(samples, rate, "src"), 5.0);
  ASSERT_EQ(segs.size(), 3u);
  for (const auto& s : segs) EXPECT_EQ(s.size(), 500u);
  for (std::size_t i = 0; i < 200; ++i) EXPECT_EQ(segs[2].samples()[i], samples[1000 + i]);
  for (std::size_t i = 200; i < 500; ++i) EXPECT_EQ(segs[2].samples()[i], 0.0);
  EXPECT_EQ(segs[1].source_id(), std::optional<std::string>("src#1"));
}

TEST(Segment, ExactLengthIsTheClip) {
  const AudioClip clip(uniform_values(500, 9), 100, "x");
  const auto segs = segment_clip(clip, 5.0);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(std::vector<double>(segs[0].samples().begin(), segs[0].samples().end()),
            std::vector<double>(clip.samples().begin(), clip.samples().end()));
}

TEST(Segment, EmptyClipGivesOneZeroWindow) {
  const auto segs = segment_clip(AudioClip({}, 100), 5.0);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].size(), 500u);
  for (double v : segs[0].samples()) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(segment_clip(AudioClip({0.0}, 100), 0.0), InvalidArgument);
}

TEST(Segment, ReassemblyReproducesInput) {
  const int rate = 1000;
  const auto samples = uniform_values(13700, 21);
  const auto segs = segment_clip(AudioClip(samples, rate), 5.0);
  ASSERT_EQ(segs.size(), 3u);
  std::vector<double> joined;
  for (const auto& s : segs) {
    EXPECT_EQ(s.size(), 5000u);
    joined.insert(joined.end(), s.samples().begin(), s.samples().end());
  }
  for (std::size_t i = samples.size(); i < joined.size(); ++i) EXPECT_EQ(joined[i], 0.0);
  joined.resize(samples.size());
  EXPECT_EQ(joined, samples);
}

}  // namespace
}  // namespace woodpest::audio
