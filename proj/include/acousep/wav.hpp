// acousep/wav.hpp
//
// Copyright 2026 The acousep authors
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

#ifndef ACOUSEP_WAV_HPP_
#define ACOUSEP_WAV_HPP_

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "acousep/error.hpp"
#include "acousep/signal.hpp"

namespace acousep {

// Samples from a RIFF/WAVE file; rows are channels, values in [-1, 1] for
// PCM, as stored for floatData.
struct WavData {
  Eigen::MatrixXd channels;
  int sample_rate = 0;
};

namespace detail {

inline std::uint16_t rd_u16(const std::vector<unsigned char>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

inline std::uint32_t rd_u32(const std::vector<unsigned char>& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

inline void wr_u16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(static_cast<unsigned char>(v & 0xFF));
  b.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

inline void wr_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  b.push_back(static_cast<unsigned char>(v & 0xFF));
  b.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  b.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  b.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

inline void wr_tag(std::vector<unsigned char>& b, const char tag[5]) {
  b.insert(b.end(), tag, tag + 4);
}

inline std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

inline void write_file(const std::filesystem::path& path,
                       const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to '" + path.string() + "'");
}

}  // namespace detail

// Parses a RIFF/WAVE file containing 16-bit PCM or 32-bit IEEE float
// samples, any channel count.  Chunks other than fmt/data are skipped.
// Malformed input raises FormatError carrying the byte offset of the
// first inconsistency.
inline WavData load_wav(const std::filesystem::path& path) {
  using detail::rd_u16;
  using detail::rd_u32;
  const std::vector<unsigned char> b = detail::read_file(path);

  if (b.size() < 12) throw FormatError("truncated RIFF header", b.size());
  if (std::memcmp(b.data(), "RIFF", 4) != 0)
    throw FormatError("missing RIFF magic", 0);
  if (std::memcmp(b.data() + 8, "WAVE", 4) != 0)
    throw FormatError("missing WAVE form type", 8);

  bool have_fmt = false;
  std::uint16_t format = 0, num_channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_at = 0, data_len = 0;

  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const std::size_t header_at = at;
    const std::uint32_t chunk_len = rd_u32(b, at + 4);
    const std::size_t body = at + 8;
    if (body + chunk_len > b.size())
      throw FormatError("chunk overruns file", header_at + 4);
    if (std::memcmp(b.data() + at, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw FormatError("fmt chunk too short", header_at + 4);
      format = rd_u16(b, body + 0);
      num_channels = rd_u16(b, body + 2);
      rate = rd_u32(b, body + 4);
      bits = rd_u16(b, body + 14);
      have_fmt = true;
    } else if (std::memcmp(b.data() + at, "data", 4) == 0) {
      data_at = body;
      data_len = chunk_len;
    }
    at = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw FormatError("no fmt chunk", b.size());
  if (data_at == 0) throw FormatError("no data chunk", b.size());
  if (num_channels == 0) throw FormatError("zero channels", data_at);
  if (rate == 0) throw FormatError("zero sample rate", data_at);

  const bool pcm16 = (format == 1 && bits == 16);
  const bool f32 = (format == 3 && bits == 32);
  if (!pcm16 && !f32)
    throw FormatError("unsupported sample format (want PCM16 or float32)",
                      data_at);

  const std::size_t bytes_per = pcm16 ? 2 : 4;
  const std::size_t frame = bytes_per * num_channels;
  if (data_len % frame != 0)
    throw FormatError("data chunk is not a whole number of frames",
                      data_at + data_len - data_len % frame);
  const std::size_t frames = data_len / frame;
  if (frames == 0) throw FormatError("empty data chunk", data_at);

  WavData out;
  out.sample_rate = static_cast<int>(rate);
  out.channels.resize(num_channels, static_cast<Eigen::Index>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::uint16_t c = 0; c < num_channels; ++c) {
      const std::size_t p = data_at + (i * num_channels + c) * bytes_per;
      if (pcm16) {
        const auto raw = static_cast<std::int16_t>(rd_u16(b, p));
        out.channels(c, static_cast<Eigen::Index>(i)) = raw / 32767.0;
      } else {
        std::uint32_t u = rd_u32(b, p);
        float f;
        std::memcpy(&f, &u, sizeof(f));
        if (!std::isfinite(f))
          throw FormatError("non-finite float sample", p);
        out.channels(c, static_cast<Eigen::Index>(i)) = static_cast<double>(f);
      }
    }
  }
  return out;
}

// Loads a file that must be mono; the result keeps the stored sample rate.
inline Signal load_wav_mono(const std::filesystem::path& path) {
  WavData w = load_wav(path);
  if (w.channels.rows() != 1)
    throw FormatError("expected a mono file, got " +
                      std::to_string(w.channels.rows()) + " channels in '" +
                      path.string() + "'");
  Signal s;
  s.sample_rate = w.sample_rate;
  s.samples.assign(w.channels.row(0).begin(), w.channels.row(0).end());
  return s;
}

namespace detail {

inline std::vector<unsigned char> wav_header(std::uint16_t format,
                                             std::uint16_t channels,
                                             std::uint32_t rate,
                                             std::uint16_t bits,
                                             std::uint32_t data_len) {
  std::vector<unsigned char> b;
  b.reserve(44 + data_len);
  wr_tag(b, "RIFF");
  wr_u32(b, 36 + data_len);
  wr_tag(b, "WAVE");
  wr_tag(b, "fmt ");
  wr_u32(b, 16);
  wr_u16(b, format);
  wr_u16(b, channels);
  wr_u32(b, rate);
  const std::uint32_t block = channels * (bits / 8u);
  wr_u32(b, rate * block);
  wr_u16(b, static_cast<std::uint16_t>(block));
  wr_u16(b, bits);
  wr_tag(b, "data");
  wr_u32(b, data_len);
  return b;
}

}  // namespace detail

// Mono 16-bit PCM.  Samples are clamped to [-1, 1] and quantized with
// round(x * 32767), so a decode after encode is within 1/32768 of the
// original for in-range input.
inline void store_wav_pcm16(const std::filesystem::path& path,
                            std::span<const double> samples, int sample_rate) {
  if (sample_rate <= 0)
    throw ParameterError("store_wav_pcm16: sample rate must be positive");
  if (samples.empty()) throw ParameterError("store_wav_pcm16: empty signal");
  const auto data_len = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<unsigned char> b = detail::wav_header(
      1, 1, static_cast<std::uint32_t>(sample_rate), 16, data_len);
  for (double v : samples) {
    if (!std::isfinite(v))
      throw DegeneracyError("store_wav_pcm16: non-finite sample");
    const double clamped = std::clamp(v, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
    detail::wr_u16(b, static_cast<std::uint16_t>(q));
  }
  detail::write_file(path, b);
}

inline void store_wav_pcm16(const std::filesystem::path& path, const Signal& s) {
  require_valid(s, "store_wav_pcm16");
  store_wav_pcm16(path, s.samples, s.sample_rate);
}

// Multichannel 32-bit IEEE float (rows of `channels` are channels).  Used
// for mixtures and separated outputs, where quantization would silently
// erode the algebraic identities tests rely on.
inline void store_wav_float32(const std::filesystem::path& path,
                              const Eigen::MatrixXd& channels,
                              int sample_rate) {
  if (sample_rate <= 0)
    throw ParameterError("store_wav_float32: sample rate must be positive");
  if (channels.rows() == 0 || channels.cols() == 0)
    throw ParameterError("store_wav_float32: empty channel matrix");
  const auto frames = static_cast<std::size_t>(channels.cols());
  const auto nch = static_cast<std::uint16_t>(channels.rows());
  const auto data_len = static_cast<std::uint32_t>(frames * nch * 4);
  std::vector<unsigned char> b = detail::wav_header(
      3, nch, static_cast<std::uint32_t>(sample_rate), 32, data_len);
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::uint16_t c = 0; c < nch; ++c) {
      const double v = channels(c, static_cast<Eigen::Index>(i));
      if (!std::isfinite(v))
        throw DegeneracyError("store_wav_float32: non-finite sample");
      const auto f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, sizeof(u));
      detail::wr_u32(b, u);
    }
  }
  detail::write_file(path, b);
}

}  // namespace acousep

#endif  // ACOUSEP_WAV_HPP_
