// Copyright 2026 The banding-detector Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "banding/error.hpp"
#include "banding/image.hpp"

namespace banding {

enum class Subsampling { k420, k422, k444, kMono };

inline std::string to_string(Subsampling s) {
  switch (s) {
    case Subsampling::k420: return "420";
    case Subsampling::k422: return "422";
    case Subsampling::k444: return "444";
    case Subsampling::kMono: return "mono";
  }
  return "?";
}

inline Subsampling parse_subsampling(std::string_view text) {
  if (text == "420") return Subsampling::k420;
  if (text == "422") return Subsampling::k422;
  if (text == "444") return Subsampling::k444;
  if (text == "mono" || text == "400") return Subsampling::kMono;
  throw ConfigError("unknown subsampling '" + std::string(text) + "'");
}

// Total chroma samples (both planes) accompanying a luma plane.
inline std::size_t chroma_samples(Subsampling s, int width, int height) {
  const std::size_t cw = (static_cast<std::size_t>(width) + 1) / 2;
  const std::size_t ch = (static_cast<std::size_t>(height) + 1) / 2;
  switch (s) {
    case Subsampling::k420: return 2 * cw * ch;
    case Subsampling::k422: return 2 * cw * static_cast<std::size_t>(height);
    case Subsampling::k444: return 2 * static_cast<std::size_t>(width) * height;
    case Subsampling::kMono: return 0;
  }
  return 0;
}

struct Y4mOptions {
  // Accept >8-bit input by right-shifting samples down to 8 bits.
  bool rescale_high_bit_depth = false;
};

struct Y4mHeader {
  int width = 0;
  int height = 0;
  double frame_rate = 0.0;
  Subsampling subsampling = Subsampling::k420;
  int bit_depth = 8;
};

namespace detail {

inline int parse_positive(std::string_view token, std::string_view digits) {
  if (digits.empty() || digits.size() > 9) {
    throw ParseError("malformed Y4M header token '" + std::string(token) + "'");
  }
  int v = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw ParseError("malformed Y4M header token '" + std::string(token) + "'");
    }
    v = v * 10 + (c - '0');
  }
  if (v <= 0) throw ParseError("malformed Y4M header token '" + std::string(token) + "'");
  return v;
}

inline void parse_colorspace(std::string_view token, Y4mHeader& h) {
  std::string_view cs = token.substr(1);
  auto take_depth = [&](std::string_view rest) {
    if (rest.empty() || rest == "jpeg" || rest == "paldv" || rest == "mpeg2") return 8;
    if (rest.front() == 'p') rest.remove_prefix(1);
    return parse_positive(token, rest);
  };
  if (cs.starts_with("420")) {
    h.subsampling = Subsampling::k420;
    h.bit_depth = take_depth(cs.substr(3));
  } else if (cs.starts_with("422")) {
    h.subsampling = Subsampling::k422;
    h.bit_depth = take_depth(cs.substr(3));
  } else if (cs.starts_with("444") && cs != "444alpha") {
    h.subsampling = Subsampling::k444;
    h.bit_depth = take_depth(cs.substr(3));
  } else if (cs.starts_with("mono")) {
    h.subsampling = Subsampling::kMono;
    h.bit_depth = take_depth(cs.substr(4));
  } else {
    throw ParseError("unsupported Y4M colorspace token '" + std::string(token) + "'");
  }
  if (h.bit_depth < 8 || h.bit_depth > 16) {
    throw ParseError("unsupported Y4M bit depth in token '" + std::string(token) + "'");
  }
}

}  // namespace detail

inline Y4mHeader parse_y4m_header(std::string_view line) {
  constexpr std::string_view kMagic = "YUV4MPEG2";
  std::istringstream in{std::string(line)};
  std::string token;
  if (!(in >> token) || token != kMagic) {
    throw ParseError("not a YUV4MPEG2 stream (first token '" + token + "')");
  }
  Y4mHeader h;
  while (in >> token) {
    std::string_view t = token;
    switch (t.front()) {
      case 'W': h.width = detail::parse_positive(t, t.substr(1)); break;
      case 'H': h.height = detail::parse_positive(t, t.substr(1)); break;
      case 'F': {
        auto colon = t.find(':');
        if (colon == std::string_view::npos) {
          throw ParseError("malformed Y4M header token '" + token + "'");
        }
        const int num = detail::parse_positive(t, t.substr(1, colon - 1));
        const int den = detail::parse_positive(t, t.substr(colon + 1));
        h.frame_rate = static_cast<double>(num) / den;
        break;
      }
      case 'C': detail::parse_colorspace(t, h); break;
      case 'I':
      case 'A':
      case 'X':
        break;
      default:
        throw ParseError("unknown Y4M header token '" + token + "'");
    }
  }
  if (h.width == 0) throw ParseError("Y4M header lacks a W token");
  if (h.height == 0) throw ParseError("Y4M header lacks an H token");
  return h;
}

inline VideoStream read_y4m(std::istream& in, const Y4mOptions& options = {}) {
  std::string header_line;
  if (!std::getline(in, header_line)) throw ParseError("empty Y4M stream");
  if (in.eof()) throw ParseError("Y4M header is not newline-terminated");
  const Y4mHeader h = parse_y4m_header(header_line);
  if (h.bit_depth > 8 && !options.rescale_high_bit_depth) {
    throw ParseError("Y4M bit depth " + std::to_string(h.bit_depth) +
                     " is unsupported without rescaling to 8 bits");
  }

  const std::size_t bytes_per_sample = h.bit_depth > 8 ? 2 : 1;
  const std::size_t luma_samples = static_cast<std::size_t>(h.width) * h.height;
  const std::size_t luma_bytes = luma_samples * bytes_per_sample;
  const std::size_t chroma_bytes = chroma_samples(h.subsampling, h.width, h.height) * bytes_per_sample;
  const int shift = h.bit_depth - 8;

  VideoStream stream;
  stream.frame_rate = h.frame_rate;
  std::vector<char> buffer(luma_bytes);
  for (std::int64_t index = 0;; ++index) {
    char marker[5];
    in.read(marker, 5);
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != 5 || std::string_view(marker, 5) != "FRAME") {
      throw ParseError("missing FRAME marker at frame " + std::to_string(index));
    }
    std::string params;
    if (!std::getline(in, params)) {
      throw ParseError("truncated FRAME header at frame " + std::to_string(index));
    }

    in.read(buffer.data(), static_cast<std::streamsize>(luma_bytes));
    if (static_cast<std::size_t>(in.gcount()) != luma_bytes) {
      throw ParseError("truncated frame payload at frame " + std::to_string(index));
    }
    std::vector<std::uint8_t> luma(luma_samples);
    if (bytes_per_sample == 1) {
      std::copy(buffer.begin(), buffer.end(), luma.begin());
    } else {
      for (std::size_t i = 0; i < luma_samples; ++i) {
        const unsigned lo = static_cast<unsigned char>(buffer[2 * i]);
        const unsigned hi = static_cast<unsigned char>(buffer[2 * i + 1]);
        const unsigned v = ((hi << 8) | lo) >> shift;
        luma[i] = static_cast<std::uint8_t>(std::min(v, 255u));
      }
    }
    in.ignore(static_cast<std::streamsize>(chroma_bytes));
    if (static_cast<std::size_t>(in.gcount()) != chroma_bytes) {
      throw ParseError("truncated frame payload at frame " + std::to_string(index));
    }
    stream.frames.push_back({Plane<std::uint8_t>(h.width, h.height, std::move(luma)), index});
  }
  if (stream.frames.empty()) throw ParseError("Y4M stream contains no frames");
  return stream;
}

inline VideoStream read_raw_yuv(std::istream& in, int width, int height,
                                Subsampling subsampling) {
  if (width < 1 || height < 1) {
    throw ConfigError("raw YUV geometry must be positive");
  }
  const std::vector<char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const std::size_t luma = static_cast<std::size_t>(width) * height;
  const std::size_t frame_bytes = luma + chroma_samples(subsampling, width, height);
  if (bytes.empty()) throw ParseError("raw YUV stream is empty");
  if (bytes.size() % frame_bytes != 0) {
    throw ParseError("raw YUV length " + std::to_string(bytes.size()) +
                     " is not a multiple of the frame size " + std::to_string(frame_bytes) +
                     " (residue " + std::to_string(bytes.size() % frame_bytes) + ")");
  }
  VideoStream stream;
  const std::size_t n = bytes.size() / frame_bytes;
  for (std::size_t i = 0; i < n; ++i) {
    const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(i * frame_bytes);
    std::vector<std::uint8_t> plane(first, first + static_cast<std::ptrdiff_t>(luma));
    stream.frames.push_back({Plane<std::uint8_t>(width, height, std::move(plane)),
                             static_cast<std::int64_t>(i)});
  }
  return stream;
}

/// Writes 8-bit Y4M with neutral (128) chroma planes.
inline void write_y4m(std::ostream& out, const VideoStream& stream,
                      Subsampling subsampling = Subsampling::k420) {
  stream.validate();
  const int w = stream.width();
  const int h = stream.height();
  long rate_num = 25;
  long rate_den = 1;
  if (stream.frame_rate > 0.0) {
    rate_num = std::lround(stream.frame_rate * 1000.0);
    rate_den = 1000;
  }
  out << "YUV4MPEG2 W" << w << " H" << h << " F" << rate_num << ':' << rate_den
      << " Ip A1:1 C" << (subsampling == Subsampling::k420 ? std::string("420jpeg") : to_string(subsampling))
      << '\n';
  const std::string chroma(chroma_samples(subsampling, w, h), static_cast<char>(128));
  for (const auto& f : stream.frames) {
    out << "FRAME\n";
    auto px = f.plane.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) throw IoError("failed writing Y4M stream");
}

inline VideoStream read_y4m_file(const std::filesystem::path& path, const Y4mOptions& options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_y4m(in, options);
}

inline VideoStream read_raw_yuv_file(const std::filesystem::path& path, int width, int height,
                                     Subsampling subsampling) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_raw_yuv(in, width, height, subsampling);
}

inline void write_y4m_file(const std::filesystem::path& path, const VideoStream& stream,
                           Subsampling subsampling = Subsampling::k420) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  write_y4m(out, stream, subsampling);
}

}  // namespace banding
