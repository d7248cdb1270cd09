#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "paretothresh/objectives.hpp"
#include "paretothresh/rng.hpp"

namespace paretothresh {

/// One candidate: the continuous position the optimizer produced, its
/// decoded thresholds, and the evaluated objective (plus raw scores).
struct Solution {
  std::vector<double> position;
  ThresholdVector thresholds;
  ObjectiveVector objective;
  std::vector<double> raw;
};

/// Minimization Pareto dominance: a is no worse everywhere and strictly
/// better somewhere.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.kind != b.kind || a.values.size() != b.values.size())
    throw DimensionMismatch("objective vectors have different kinds or dimensions");
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] > b.values[i]) return false;
    if (a.values[i] < b.values[i]) strictly_better = true;
  }
  return strictly_better;
}

enum class InsertOutcome { Accepted, RejectedDominated, AcceptedWithEviction };

/// Bounded repository of mutually non-dominated solutions with an adaptive
/// hypergrid over objective space. The grid drives both leader selection
/// (sparse cells preferred) and eviction (crowded cells trimmed first).
///
/// Randomized steps (eviction, leader roulette) draw from the caller's
/// generator so whole runs stay reproducible.
class ParetoArchive {
 public:
  static constexpr int kGridDivisions = 7;
  static constexpr double kBoundsInflation = 0.10;  // total widening of [min,max]

  explicit ParetoArchive(ObjectiveKind kind, std::size_t capacity = 100)
      : kind_(kind), capacity_(capacity) {}

  ObjectiveKind kind() const { return kind_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Solution>& members() const { return members_; }

  /// Offers a solution. Dominated or duplicate-objective candidates are
  /// rejected; otherwise the candidate enters, members it dominates leave,
  /// and if the repository then exceeds capacity one member of the most
  /// crowded grid cell is evicted uniformly at random.
  InsertOutcome insert(Solution s, Rng& rng) {
    if (s.objective.kind != kind_ ||
        s.objective.values.size() != static_cast<std::size_t>(objective_dimension(kind_)))
      throw DimensionMismatch("solution objective does not match archive");

    for (const Solution& m : members_) {
      if (m.objective.values == s.objective.values) return InsertOutcome::RejectedDominated;
      if (dominates(m.objective, s.objective)) return InsertOutcome::RejectedDominated;
    }
    std::erase_if(members_,
                  [&](const Solution& m) { return dominates(s.objective, m.objective); });

    const bool rebuild_bounds = lo_.empty() || !within_bounds(s.objective.values);
    members_.push_back(std::move(s));
    if (rebuild_bounds)
      recompute_bounds();
    reassign_cells();

    bool evicted = false;
    if (members_.size() > capacity_) {
      evict_from_most_crowded(rng);
      reassign_cells();
      evicted = true;
    }
    return evicted ? InsertOutcome::AcceptedWithEviction : InsertOutcome::Accepted;
  }

  /// Roulette-wheel over occupied grid cells with weight 10/(cell size),
  /// then uniform within the chosen cell. Consumes exactly two draws.
  const Solution& select_leader(Rng& rng) const {
    if (members_.empty()) throw EmptyArchive("cannot select a leader from an empty archive");
    const auto cells = occupied_cells();
    double total = 0.0;
    for (const auto& [key, indices] : cells) total += 10.0 / indices.size();
    const double pick = rng.uniform01() * total;
    double acc = 0.0;
    const std::vector<int>* chosen = &cells.rbegin()->second;
    for (const auto& [key, indices] : cells) {
      acc += 10.0 / indices.size();
      if (pick < acc) {
        chosen = &indices;
        break;
      }
    }
    const std::size_t within = rng.uniform_index(chosen->size());
    return members_[(*chosen)[within]];
  }

  /// Occupied grid cells, keyed by packed cell coordinates, in key order.
  std::map<std::uint32_t, std::vector<int>> occupied_cells() const {
    std::map<std::uint32_t, std::vector<int>> cells;
    for (std::size_t i = 0; i < members_.size(); ++i)
      cells[cell_of_[i]].push_back(static_cast<int>(i));
    return cells;
  }

 private:
  bool within_bounds(const std::vector<double>& values) const {
    for (std::size_t d = 0; d < values.size(); ++d)
      if (values[d] < lo_[d] || values[d] > hi_[d]) return false;
    return true;
  }

  void recompute_bounds() {
    const std::size_t dims = members_.front().objective.values.size();
    lo_.assign(dims, std::numeric_limits<double>::infinity());
    hi_.assign(dims, -std::numeric_limits<double>::infinity());
    for (const Solution& m : members_) {
      for (std::size_t d = 0; d < dims; ++d) {
        lo_[d] = std::min(lo_[d], m.objective.values[d]);
        hi_[d] = std::max(hi_[d], m.objective.values[d]);
      }
    }
    for (std::size_t d = 0; d < dims; ++d) {
      const double pad = (hi_[d] - lo_[d]) * (kBoundsInflation / 2.0);
      lo_[d] -= pad;
      hi_[d] += pad;
    }
  }

  std::uint32_t cell_key(const std::vector<double>& values) const {
    std::uint32_t key = 0;
    for (std::size_t d = 0; d < values.size(); ++d) {
      const double range = hi_[d] - lo_[d];
      int idx = 0;
      if (range > 0.0) {
        idx = static_cast<int>((values[d] - lo_[d]) / range * kGridDivisions);
        idx = std::clamp(idx, 0, kGridDivisions - 1);
      }
      key |= static_cast<std::uint32_t>(idx) << (3 * d);
    }
    return key;
  }

  void reassign_cells() {
    cell_of_.resize(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i)
      cell_of_[i] = cell_key(members_[i].objective.values);
  }

  void evict_from_most_crowded(Rng& rng) {
    const auto cells = occupied_cells();
    std::size_t max_count = 0;
    for (const auto& [key, indices] : cells) max_count = std::max(max_count, indices.size());
    std::vector<const std::vector<int>*> crowded;
    for (const auto& [key, indices] : cells)
      if (indices.size() == max_count) crowded.push_back(&indices);
    const std::vector<int>& cell = *crowded[rng.uniform_index(crowded.size())];
    const int victim = cell[rng.uniform_index(cell.size())];
    members_.erase(members_.begin() + victim);
  }

  ObjectiveKind kind_;
  std::size_t capacity_;
  std::vector<Solution> members_;
  std::vector<double> lo_, hi_;          // inflated grid bounds per objective
  std::vector<std::uint32_t> cell_of_;   // packed cell key per member
};

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// CSV dump shared by archives and exhaustive fronts: thresholds, transformed
/// objective, raw scores, and a source tag. Rows sorted lexicographically by
/// threshold vector.
inline void write_front_csv(std::span<const Solution> solutions, std::ostream& out,
                            const std::string& source = "archive") {
  std::vector<const Solution*> rows;
  rows.reserve(solutions.size());
  for (const Solution& s : solutions) rows.push_back(&s);
  std::sort(rows.begin(), rows.end(),
            [](const Solution* a, const Solution* b) { return a->thresholds < b->thresholds; });

  const std::size_t m = rows.empty() ? 0 : rows.front()->thresholds.size();
  const std::size_t d = rows.empty() ? 0 : rows.front()->objective.values.size();
  for (std::size_t i = 1; i <= m; ++i) out << "t_" << i << ',';
  for (std::size_t i = 1; i <= d; ++i) out << "obj_" << i << ',';
  for (std::size_t i = 1; i <= d; ++i) out << "raw_" << i << ',';
  out << "source\n";
  for (const Solution* s : rows) {
    for (const int t : s->thresholds.values()) out << t << ',';
    for (const double v : s->objective.values) out << detail::format_double(v) << ',';
    for (const double v : s->raw) out << detail::format_double(v) << ',';
    out << source << '\n';
  }
}

inline void write_archive_csv(const ParetoArchive& archive, std::ostream& out) {
  write_front_csv(archive.members(), out, "archive");
}

}  // namespace paretothresh
