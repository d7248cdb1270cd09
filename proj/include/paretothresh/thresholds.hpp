#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paretothresh/errors.hpp"

namespace paretothresh {

/// Sorted integer thresholds t_1 <= ... <= t_m, each in [0,255], shared by
/// all three channels. The outer sentinels 0 and 256 are implicit and never
/// stored. An empty vector means a single class covering [0,255].
class ThresholdVector {
 public:
  ThresholdVector() = default;

  explicit ThresholdVector(std::vector<int> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] < 0 || values_[i] > 255)
        throw ConfigInvalid("threshold " + std::to_string(values_[i]) + " out of [0,255]");
      if (i > 0 && values_[i] < values_[i - 1])
        throw ConfigInvalid("thresholds must be sorted non-decreasing");
    }
  }

  static ThresholdVector from_unsorted(std::vector<int> values) {
    std::sort(values.begin(), values.end());
    return ThresholdVector(std::move(values));
  }

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  int operator[](std::size_t i) const { return values_[i]; }
  const std::vector<int>& values() const { return values_; }

  /// Number of classes, m + 1.
  int class_count() const { return static_cast<int>(values_.size()) + 1; }

  /// Class of intensity v: the j with t_{j-1} <= v <= t_j - 1, i.e. the
  /// number of thresholds <= v.
  int class_of(int v) const {
    return static_cast<int>(std::upper_bound(values_.begin(), values_.end(), v) -
                            values_.begin());
  }

  /// Half-open intensity range [lo, hi) of class j, using sentinels 0 and 256.
  std::pair<int, int> class_range(int j) const {
    const int lo = j == 0 ? 0 : values_[j - 1];
    const int hi = j == static_cast<int>(values_.size()) ? 256 : values_[j];
    return {lo, hi};
  }

  bool operator==(const ThresholdVector&) const = default;
  bool operator<(const ThresholdVector& other) const { return values_ < other.values_; }

 private:
  std::vector<int> values_;
};

/// Maps a continuous optimizer position to a valid threshold vector: each
/// component is clamped to [0,255], rounded half-away-from-zero, then the
/// result is sorted. Duplicates are kept; the empty classes they create
/// score zero in both objectives.
inline ThresholdVector decode_position(std::span<const double> position) {
  std::vector<int> t;
  t.reserve(position.size());
  for (const double x : position)
    t.push_back(static_cast<int>(std::llround(std::clamp(x, 0.0, 255.0))));
  std::sort(t.begin(), t.end());
  return ThresholdVector(std::move(t));
}

struct ThresholdVectorHash {
  std::size_t operator()(const ThresholdVector& t) const {
    std::size_t h = 0x9E3779B97F4A7C15ull;
    for (const int v : t.values()) h = h * 1099511628211ull + static_cast<std::size_t>(v + 1);
    return h;
  }
};

}  // namespace paretothresh
