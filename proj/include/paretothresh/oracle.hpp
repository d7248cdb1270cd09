#pragma once

#include <array>
#include <string>
#include <vector>

#include "paretothresh/objectives.hpp"
#include "paretothresh/pareto.hpp"

namespace paretothresh {

enum class Method { Otsu, Kapur };

struct ScalarOptimum {
  ThresholdVector thresholds;
  double score = 0.0;
};

namespace detail {

/// Visits all strictly increasing T-subsets of [0,255] in lexicographic
/// order. T = 0 visits the single empty vector.
template <typename Visit>
void for_each_combination(int T, Visit&& visit) {
  std::vector<int> combo(T);
  for (int i = 0; i < T; ++i) combo[i] = i;
  if (T == 0) {
    visit(combo);
    return;
  }
  while (true) {
    visit(combo);
    int i = T - 1;
    while (i >= 0 && combo[i] == 256 - (T - i)) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < T; ++j) combo[j] = combo[j - 1] + 1;
  }
}

}  // namespace detail

/// Ground truth by enumeration: the maximizing threshold vector over all
/// sorted T-subsets of [0,255], ties broken toward the lexicographically
/// smallest vector. Duplicate thresholds are skipped; they only replicate
/// scores of smaller vectors. T above 3 is refused (the search space grows
/// combinatorially — that regime belongs to the swarms).
inline ScalarOptimum exhaustive_scalar_optimum(const Histogram256& hist, int T, Method method) {
  if (T < 0 || T > 3)
    throw TooManyThresholds("exhaustive scalar search supports T in [0,3], got " +
                            std::to_string(T));
  const ChannelScorer scorer(hist);
  ScalarOptimum best;
  bool first = true;
  detail::for_each_combination(T, [&](const std::vector<int>& combo) {
    ThresholdVector t{std::vector<int>(combo)};
    const double score = method == Method::Otsu ? scorer.otsu(t) : scorer.kapur(t);
    if (first || score > best.score) {
      best.thresholds = std::move(t);
      best.score = score;
      first = false;
    }
  });
  return best;
}

/// Exact Pareto front by full enumeration, no capacity cap. Candidates whose
/// objective vectors are exactly equal are all kept; equality comparisons use
/// exact floating equality since every candidate runs through the same code
/// path. Returned sorted lexicographically by thresholds.
inline std::vector<Solution> exhaustive_pareto_front(const std::array<Histogram256, 3>& hists,
                                                     int T, ObjectiveKind kind) {
  if (T < 1 || T > 2)
    throw TooManyThresholds("exhaustive front supports T in [1,2], got " + std::to_string(T));
  const ObjectiveEvaluator evaluator(hists, kind);

  // Candidates sharing one objective vector are grouped; dominance checks
  // then run over groups, which stays fast on the plateau-heavy landscapes
  // integer thresholds produce.
  struct Group {
    std::vector<double> objective;
    std::vector<Solution> solutions;
  };
  std::vector<Group> groups;

  auto strictly_dominates = [](const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > b[i]) return false;
      if (a[i] < b[i]) strict = true;
    }
    return strict;
  };

  detail::for_each_combination(T, [&](const std::vector<int>& combo) {
    ThresholdVector t{std::vector<int>(combo)};
    Evaluation e = evaluator.evaluate_uncached(t);
    std::vector<double> position(combo.begin(), combo.end());
    Solution candidate{std::move(position), std::move(t), std::move(e.objective),
                       std::move(e.raw)};
    for (Group& g : groups) {
      if (g.objective == candidate.objective.values) {
        g.solutions.push_back(std::move(candidate));
        return;
      }
      if (strictly_dominates(g.objective, candidate.objective.values)) return;
    }
    std::erase_if(groups, [&](const Group& g) {
      return strictly_dominates(candidate.objective.values, g.objective);
    });
    Group g;
    g.objective = candidate.objective.values;
    g.solutions.push_back(std::move(candidate));
    groups.push_back(std::move(g));
  });

  std::vector<Solution> front;
  for (Group& g : groups)
    for (Solution& s : g.solutions) front.push_back(std::move(s));
  std::sort(front.begin(), front.end(),
            [](const Solution& a, const Solution& b) { return a.thresholds < b.thresholds; });
  return front;
}

/// Fraction of exact-front points that some archive member weakly dominates
/// or equals within a componentwise tolerance.
inline double front_coverage(const ParetoArchive& archive, std::span<const Solution> exact_front,
                             double tolerance = 1e-9) {
  if (exact_front.empty()) return 1.0;
  if (exact_front.front().objective.kind != archive.kind())
    throw KindMismatch("archive and exact front have different objective kinds");
  std::size_t covered = 0;
  for (const Solution& e : exact_front) {
    for (const Solution& a : archive.members()) {
      bool weak = true;
      for (std::size_t i = 0; i < e.objective.values.size(); ++i) {
        if (a.objective.values[i] > e.objective.values[i] + tolerance) {
          weak = false;
          break;
        }
      }
      if (weak) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(exact_front.size());
}

}  // namespace paretothresh
