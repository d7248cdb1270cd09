#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <zlib.h>

#include "paretothresh/errors.hpp"

namespace paretothresh {

enum class Channel : int { R = 0, G = 1, B = 2 };

inline char channel_letter(Channel c) { return "rgb"[static_cast<int>(c)]; }

/// 8-bit RGB raster, row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::array<std::uint8_t, 3>> pixels;

  std::int64_t pixel_count() const { return static_cast<std::int64_t>(width) * height; }

  const std::array<std::uint8_t, 3>& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::array<std::uint8_t, 3>& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || ec)
    throw FileNotFound("file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open file: " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

inline void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

inline int paeth_predictor(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

inline std::vector<std::uint8_t> zlib_inflate(const std::vector<std::uint8_t>& in,
                                              std::size_t expected_size,
                                              const std::string& context) {
  std::vector<std::uint8_t> out(expected_size);
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw CorruptImage(context + ": inflate init failed");
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const bool complete = (rc == Z_STREAM_END) && zs.avail_out == 0;
  inflateEnd(&zs);
  if (!complete) throw CorruptImage(context + ": compressed pixel data is damaged or truncated");
  return out;
}

inline std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& in) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  std::vector<std::uint8_t> out(bound);
  if (compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()), 6) != Z_OK)
    throw Error("deflate failed");
  out.resize(bound);
  return out;
}

inline RgbImage load_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  std::size_t pos = kPngSignature.size();
  bool seen_ihdr = false;
  bool seen_iend = false;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int channels = 0;
  std::vector<std::uint8_t> idat;

  while (pos + 8 <= bytes.size() && !seen_iend) {
    const std::uint32_t length = read_be32(&bytes[pos]);
    if (pos + 12 + static_cast<std::size_t>(length) > bytes.size())
      throw CorruptImage(name + ": truncated chunk");
    const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
    const std::uint8_t* data = &bytes[pos + 8];
    const std::uint32_t stored_crc = read_be32(&bytes[pos + 8 + length]);
    std::uint32_t crc = static_cast<std::uint32_t>(crc32(0, &bytes[pos + 4], length + 4));
    if (crc != stored_crc) throw CorruptImage(name + ": chunk CRC mismatch");

    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (length != 13) throw CorruptImage(name + ": bad IHDR");
      width = read_be32(data);
      height = read_be32(data + 4);
      const int bit_depth = data[8];
      const int color_type = data[9];
      const int interlace = data[12];
      if (width == 0 || height == 0) throw CorruptImage(name + ": zero dimension");
      if (bit_depth != 8)
        throw UnsupportedFormat(name + ": only 8-bit PNG supported (got bit depth " +
                                std::to_string(bit_depth) + ")");
      if (color_type == 2) {
        channels = 3;
      } else if (color_type == 6) {
        channels = 4;
        std::cerr << "warning: " << name << ": alpha channel ignored\n";
      } else {
        throw UnsupportedFormat(name + ": PNG color type " + std::to_string(color_type) +
                                " is not 8-bit RGB");
      }
      if (interlace != 0) throw UnsupportedFormat(name + ": interlaced PNG not supported");
      seen_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      if (!seen_ihdr) throw CorruptImage(name + ": IDAT before IHDR");
      idat.insert(idat.end(), data, data + length);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      seen_iend = true;
    }
    pos += 12 + length;
  }
  if (!seen_ihdr || !seen_iend || idat.empty())
    throw CorruptImage(name + ": missing PNG chunks");

  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  const std::size_t raw_size = (stride + 1) * height;
  std::vector<std::uint8_t> raw = zlib_inflate(idat, raw_size, name);

  RgbImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.pixels.resize(static_cast<std::size_t>(width) * height);

  std::vector<std::uint8_t> prev(stride, 0);
  std::vector<std::uint8_t> row(stride, 0);
  for (std::uint32_t y = 0; y < height; ++y) {
    const std::uint8_t* src = &raw[(stride + 1) * y];
    const int filter = src[0];
    ++src;
    for (std::size_t i = 0; i < stride; ++i) {
      const int x = src[i];
      const int a = i >= static_cast<std::size_t>(channels) ? row[i - channels] : 0;
      const int b = prev[i];
      const int c = i >= static_cast<std::size_t>(channels) ? prev[i - channels] : 0;
      int v = 0;
      switch (filter) {
        case 0: v = x; break;
        case 1: v = x + a; break;
        case 2: v = x + b; break;
        case 3: v = x + (a + b) / 2; break;
        case 4: v = x + paeth_predictor(a, b, c); break;
        default: throw CorruptImage(name + ": unknown PNG filter type");
      }
      row[i] = static_cast<std::uint8_t>(v & 0xFF);
    }
    for (std::uint32_t x = 0; x < width; ++x) {
      auto& px = img.pixels[static_cast<std::size_t>(y) * width + x];
      px = {row[x * channels], row[x * channels + 1], row[x * channels + 2]};
    }
    std::swap(prev, row);
  }
  return img;
}

inline RgbImage load_ppm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  // Binary PPM: "P6" <ws> width <ws> height <ws> maxval <single ws> data.
  // '#' starts a comment running to end of line.
  std::size_t pos = 2;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      const char c = static_cast<char>(bytes[pos]);
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
           bytes[pos] != '#')
      tok.push_back(static_cast<char>(bytes[pos++]));
    if (tok.empty()) throw CorruptImage(name + ": truncated PPM header");
    return tok;
  };
  auto parse_int = [&](const std::string& tok) -> long {
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) throw CorruptImage(name + ": bad PPM header token '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      throw CorruptImage(name + ": bad PPM header token '" + tok + "'");
    }
  };

  const long width = parse_int(next_token());
  const long height = parse_int(next_token());
  const long maxval = parse_int(next_token());
  if (width < 1 || height < 1) throw CorruptImage(name + ": bad PPM dimensions");
  if (maxval != 255)
    throw UnsupportedFormat(name + ": PPM maxval " + std::to_string(maxval) +
                            " is not 8-bit (expected 255)");
  if (pos >= bytes.size()) throw CorruptImage(name + ": truncated PPM");
  ++pos;  // exactly one whitespace byte after maxval

  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - pos < need) throw CorruptImage(name + ": truncated PPM pixel data");

  RgbImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.pixels.resize(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = {bytes[pos + 3 * i], bytes[pos + 3 * i + 1], bytes[pos + 3 * i + 2]};
  return img;
}

}  // namespace detail

/// Loads an 8-bit RGB image. Formats are detected by magic bytes: PNG
/// (color types 2 and 6, alpha ignored with a warning) and binary PPM (P6,
/// maxval 255). Anything else is rejected rather than converted.
inline RgbImage load_rgb_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file_bytes(path);
  const std::string name = path.string();
  if (bytes.size() >= 8 &&
      std::memcmp(bytes.data(), detail::kPngSignature.data(), detail::kPngSignature.size()) == 0)
    return detail::load_png(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6')
    return detail::load_ppm(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '7')
    throw UnsupportedFormat(name + ": only binary P6 PPM is supported");
  throw UnsupportedFormat(name + ": not a PNG or binary PPM file");
}

inline std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                       "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + img.pixels.size() * 3);
  for (const auto& px : img.pixels) out.insert(out.end(), px.begin(), px.end());
  return out;
}

inline std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
  std::vector<std::uint8_t> raw;
  raw.reserve((stride + 1) * img.height);
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);  // filter: none
    for (int x = 0; x < img.width; ++x) {
      const auto& px = img.at(x, y);
      raw.insert(raw.end(), px.begin(), px.end());
    }
  }
  const std::vector<std::uint8_t> compressed = detail::zlib_deflate(raw);

  std::vector<std::uint8_t> out(detail::kPngSignature.begin(), detail::kPngSignature.end());
  auto chunk = [&out](const char* type, const std::vector<std::uint8_t>& data) {
    detail::write_be32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_pos = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, &out[type_pos], static_cast<uInt>(4 + data.size())));
    detail::write_be32(out, crc);
  };

  std::vector<std::uint8_t> ihdr;
  detail::write_be32(ihdr, static_cast<std::uint32_t>(img.width));
  detail::write_be32(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type: RGB
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter method
  ihdr.push_back(0);   // no interlace
  chunk("IHDR", ihdr);
  chunk("IDAT", compressed);
  chunk("IEND", {});
  return out;
}

inline void save_image(const RgbImage& img, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes =
      path.extension() == ".ppm" ? encode_ppm(img) : encode_png(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace paretothresh
