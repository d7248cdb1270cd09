#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <vector>

#include "paretothresh/histogram.hpp"
#include "paretothresh/image.hpp"

namespace paretothresh::fixtures {

/// 64x64 RGB image whose channels carry two-spike histograms on disjoint
/// intensity ranges (R on {30,80}, G on {110,170}, B on {200,245}) with
/// unequal masses. No single threshold is good for two channels at once, so
/// even single-threshold searches have genuinely multi-point Pareto fronts.
inline RgbImage synthetic_rgb_64() {
  RgbImage img;
  img.width = 64;
  img.height = 64;
  img.pixels.resize(64 * 64);
  for (int i = 0; i < 64 * 64; ++i) {
    const std::uint8_t r = i < 2458 ? 30 : 80;   // 60% / 40%
    const std::uint8_t g = i < 2048 ? 110 : 170; // 50% / 50%
    const std::uint8_t b = i < 1229 ? 200 : 245; // 30% / 70%
    img.pixels[i] = {r, g, b};
  }
  return img;
}

/// 64x64 RGB image with three-value channels laid out in spatial bands;
/// useful where the 2D structure matters (masks, quantized output).
inline RgbImage banded_rgb_64() {
  RgbImage img;
  img.width = 64;
  img.height = 64;
  img.pixels.resize(64 * 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const std::uint8_t r = x < 28 ? 30 : x < 50 ? 120 : 210;
      const std::uint8_t g = y < 18 ? 60 : y < 46 ? 150 : 230;
      const int s = x + y;
      const std::uint8_t b = s < 32 ? 20 : s < 80 ? 100 : 180;
      img.at(x, y) = {r, g, b};
    }
  }
  return img;
}

/// 64x64 grayscale image (R = G = B) whose intensity histogram is three
/// flat, equal-width blocks separated by empty gaps:
///   [34..65] x48   [112..143] x50   [190..221] x30   (32 bins each, 4096 px)
/// Cuts anywhere inside a gap score identically, so the optimal regions of
/// the one- and two-threshold Otsu/Kapur searches are wide plateaus rather
/// than single lattice points.
inline RgbImage gray_trimodal_64() {
  std::array<int, 256> counts{};
  for (int v = 34; v <= 65; ++v) counts[v] = 48;
  for (int v = 112; v <= 143; ++v) counts[v] = 50;
  for (int v = 190; v <= 221; ++v) counts[v] = 30;

  RgbImage img;
  img.width = 64;
  img.height = 64;
  img.pixels.reserve(64 * 64);
  for (int v = 0; v < 256; ++v)
    for (int c = 0; c < counts[v]; ++c)
      img.pixels.push_back({static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v),
                            static_cast<std::uint8_t>(v)});
  return img;
}

/// 64x64 grayscale ramp: every intensity appears exactly 16 times, so each
/// channel histogram is uniform.
inline RgbImage gray_uniform_ramp_64() {
  RgbImage img;
  img.width = 64;
  img.height = 64;
  img.pixels.resize(64 * 64);
  for (int i = 0; i < 64 * 64; ++i) {
    const std::uint8_t v = static_cast<std::uint8_t>(i / 16);
    img.pixels[i] = {v, v, v};
  }
  return img;
}

inline Histogram256 uniform_hist() {
  std::array<std::int64_t, 256> counts;
  counts.fill(1);
  return Histogram256::from_counts(counts);
}

inline Histogram256 two_spike_hist(int a, int b) {
  std::array<std::int64_t, 256> counts{};
  counts[a] = 1;
  counts[b] = 1;
  return Histogram256::from_counts(counts);
}

inline Histogram256 single_spike_hist(int v) {
  std::array<std::int64_t, 256> counts{};
  counts[v] = 1;
  return Histogram256::from_counts(counts);
}

inline std::filesystem::path fixture_dir() {
#ifdef PT_FIXTURE_DIR
  return std::filesystem::path(PT_FIXTURE_DIR);
#else
  return std::filesystem::current_path();
#endif
}

}  // namespace paretothresh::fixtures
