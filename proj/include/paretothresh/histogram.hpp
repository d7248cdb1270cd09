#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>

#include "paretothresh/image.hpp"

namespace paretothresh {

/// Normalized 256-bin intensity distribution of one channel. Probabilities
/// are stored together with the pixel count so exact counts stay
/// recoverable.
struct Histogram256 {
  std::array<double, 256> p{};
  std::int64_t pixel_count = 0;

  static Histogram256 from_counts(const std::array<std::int64_t, 256>& counts) {
    Histogram256 h;
    for (const auto c : counts) h.pixel_count += c;
    for (int i = 0; i < 256; ++i)
      h.p[i] = h.pixel_count > 0 ? static_cast<double>(counts[i]) / h.pixel_count : 0.0;
    return h;
  }

  std::int64_t count(int i) const { return std::llround(p[i] * static_cast<double>(pixel_count)); }
};

inline Histogram256 channel_histogram(const RgbImage& img, Channel channel) {
  std::array<std::int64_t, 256> counts{};
  const int c = static_cast<int>(channel);
  for (const auto& px : img.pixels) ++counts[px[c]];
  return Histogram256::from_counts(counts);
}

inline std::array<Histogram256, 3> channel_histograms(const RgbImage& img) {
  return {channel_histogram(img, Channel::R), channel_histogram(img, Channel::G),
          channel_histogram(img, Channel::B)};
}

/// Occurrence counts of distinct (r,g,b) triples; zero-count entries are
/// never stored.
struct Sparse3DHistogram {
  std::map<std::array<std::uint8_t, 3>, std::int64_t> entries;

  std::int64_t total() const {
    std::int64_t sum = 0;
    for (const auto& [rgb, count] : entries) sum += count;
    return sum;
  }
};

inline Sparse3DHistogram histogram_3d(const RgbImage& img) {
  Sparse3DHistogram h;
  for (const auto& px : img.pixels) ++h.entries[px];
  return h;
}

/// CSV rows sorted lexicographically by (r,g,b); the map order already is.
inline void write_histogram3d_csv(const Sparse3DHistogram& h, std::ostream& out) {
  out << "r,g,b,count\n";
  for (const auto& [rgb, count] : h.entries)
    out << int(rgb[0]) << ',' << int(rgb[1]) << ',' << int(rgb[2]) << ',' << count << '\n';
}

}  // namespace paretothresh
