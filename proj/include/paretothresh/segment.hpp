#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "paretothresh/histogram.hpp"
#include "paretothresh/image.hpp"
#include "paretothresh/objectives.hpp"
#include "paretothresh/thresholds.hpp"

namespace paretothresh {

/// Per-channel class labels under the relaxed segmentation: one threshold
/// vector cuts all three channels, so a pixel's R, G and B components may
/// land in different classes.
struct LabelMaps {
  int width = 0;
  int height = 0;
  int class_count = 1;
  std::array<std::vector<std::uint16_t>, 3> labels;  // row-major per channel
};

inline LabelMaps apply_thresholds(const RgbImage& img, const ThresholdVector& t) {
  LabelMaps maps;
  maps.width = img.width;
  maps.height = img.height;
  maps.class_count = t.class_count();
  std::array<std::uint16_t, 256> lut;
  for (int v = 0; v < 256; ++v) lut[v] = static_cast<std::uint16_t>(t.class_of(v));
  for (int c = 0; c < 3; ++c) {
    maps.labels[c].resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) maps.labels[c][i] = lut[img.pixels[i][c]];
  }
  return maps;
}

/// Replaces every channel value with the rounded mean of its class, taken
/// from that channel's own histogram. Classes that are empty in the
/// histogram are never observed in the image, so their representative is
/// irrelevant.
inline RgbImage quantize(const RgbImage& img, const ThresholdVector& t) {
  RgbImage out = img;
  for (int c = 0; c < 3; ++c) {
    const Histogram256 hist = channel_histogram(img, static_cast<Channel>(c));
    const ClassStats stats = class_stats(hist, t);
    std::array<std::uint8_t, 256> lut;
    for (int v = 0; v < 256; ++v) {
      const int j = t.class_of(v);
      lut[v] = static_cast<std::uint8_t>(std::llround(stats.mu[j]));
    }
    for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i][c] = lut[img.pixels[i][c]];
  }
  return out;
}

/// White where the channel's label equals the requested class, black
/// elsewhere.
inline RgbImage class_mask(const LabelMaps& maps, Channel channel, int class_index) {
  if (class_index < 0 || class_index >= maps.class_count)
    throw ClassOutOfRange("class " + std::to_string(class_index) + " outside [0, " +
                          std::to_string(maps.class_count - 1) + "]");
  RgbImage mask;
  mask.width = maps.width;
  mask.height = maps.height;
  mask.pixels.resize(static_cast<std::size_t>(maps.width) * maps.height);
  const auto& labels = maps.labels[static_cast<int>(channel)];
  for (std::size_t i = 0; i < mask.pixels.size(); ++i) {
    const std::uint8_t v = labels[i] == class_index ? 255 : 0;
    mask.pixels[i] = {v, v, v};
  }
  return mask;
}

/// Histogram of segments: per channel, the count of each intensity together
/// with the class it falls in. Zero-count rows are omitted.
inline void write_segment_histogram_csv(const RgbImage& img, const ThresholdVector& t,
                                        std::ostream& out) {
  out << "channel,intensity,class,count\n";
  for (int c = 0; c < 3; ++c) {
    const Histogram256 hist = channel_histogram(img, static_cast<Channel>(c));
    for (int v = 0; v < 256; ++v) {
      const std::int64_t count = hist.count(v);
      if (count == 0) continue;
      out << channel_letter(static_cast<Channel>(c)) << ',' << v << ',' << t.class_of(v) << ','
          << count << '\n';
    }
  }
}

}  // namespace paretothresh
