#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include "paretothresh/pareto.hpp"

namespace paretothresh {

/// Mean of whole repository: componentwise mean of the members' objective
/// vectors (minimization domain).
inline std::vector<double> mwr(const ParetoArchive& archive) {
  if (archive.empty()) throw EmptyArchive("MWR of an empty archive");
  std::vector<double> mean(archive.members().front().objective.values.size(), 0.0);
  for (const Solution& m : archive.members())
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += m.objective.values[d];
  for (double& v : mean) v /= static_cast<double>(archive.size());
  return mean;
}

/// Same mean taken over the raw maximization-domain scores.
inline std::vector<double> mwr_raw(const ParetoArchive& archive) {
  if (archive.empty()) throw EmptyArchive("MWR of an empty archive");
  std::vector<double> mean(archive.members().front().raw.size(), 0.0);
  for (const Solution& m : archive.members())
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += m.raw[d];
  for (double& v : mean) v /= static_cast<double>(archive.size());
  return mean;
}

inline double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

/// Mean of the MWR components.
inline double mmwr(const ParetoArchive& archive) { return mean_of(mwr(archive)); }

/// Monotonic wall-clock of a callable, in seconds.
template <typename F>
double time_run(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  std::forward<F>(f)();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

/// Reports carry millisecond resolution.
inline double round_to_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

}  // namespace paretothresh
