#pragma once

#include <array>
#include <cmath>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "paretothresh/histogram.hpp"
#include "paretothresh/thresholds.hpp"

namespace paretothresh {

/// The four vector objectives, all minimized. Components are the per-channel
/// (or norm-aggregated) Otsu/Kapur scores mapped through x -> 1/(1+x):
///   J1: Kapur entropy per channel                    (3 components)
///   J2: Otsu between-class variance per channel      (3 components)
///   J3: both stacked, Otsu R,G,B then Kapur R,G,B    (6 components)
///   J4: Euclidean norms of the Otsu and Kapur 3-vectors (2 components)
enum class ObjectiveKind { J1, J2, J3, J4 };

inline int objective_dimension(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::J1:
    case ObjectiveKind::J2: return 3;
    case ObjectiveKind::J3: return 6;
    case ObjectiveKind::J4: return 2;
  }
  return 0;
}

inline const char* objective_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::J1: return "j1";
    case ObjectiveKind::J2: return "j2";
    case ObjectiveKind::J3: return "j3";
    case ObjectiveKind::J4: return "j4";
  }
  return "?";
}

inline ObjectiveKind parse_objective(const std::string& name) {
  if (name == "j1" || name == "J1") return ObjectiveKind::J1;
  if (name == "j2" || name == "J2") return ObjectiveKind::J2;
  if (name == "j3" || name == "J3") return ObjectiveKind::J3;
  if (name == "j4" || name == "J4") return ObjectiveKind::J4;
  throw ConfigInvalid("unknown objective '" + name + "' (expected j1, j2, j3 or j4)");
}

/// Minimization objective values; every component lies in (0, 1].
struct ObjectiveVector {
  ObjectiveKind kind = ObjectiveKind::J1;
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }
  bool operator==(const ObjectiveVector&) const = default;
};

/// Per-class probability mass and mean. omega_j is the summed bin
/// probability of class j, mu_j its mean intensity (0 for empty classes).
struct ClassStats {
  std::vector<double> omega;
  std::vector<double> mu;
};

inline ClassStats class_stats(const Histogram256& hist, const ThresholdVector& t) {
  const int classes = t.class_count();
  ClassStats s;
  s.omega.resize(classes);
  s.mu.resize(classes);
  for (int j = 0; j < classes; ++j) {
    const auto [lo, hi] = t.class_range(j);
    double omega = 0.0;
    double weighted = 0.0;
    for (int i = lo; i < hi; ++i) {
      omega += hist.p[i];
      weighted += i * hist.p[i];
    }
    s.omega[j] = omega;
    s.mu[j] = omega > 0.0 ? weighted / omega : 0.0;
  }
  return s;
}

inline double total_mean(const Histogram256& hist) {
  double mu = 0.0;
  for (int i = 0; i < 256; ++i) mu += i * hist.p[i];
  return mu;
}

/// Between-class variance: sum_j omega_j (mu_j - mu_T)^2. Empty classes
/// contribute nothing, so the score is total over all threshold vectors.
inline double otsu_score(const Histogram256& hist, const ThresholdVector& t) {
  const ClassStats s = class_stats(hist, t);
  const double mu_t = total_mean(hist);
  double score = 0.0;
  for (std::size_t j = 0; j < s.omega.size(); ++j) {
    if (s.omega[j] <= 0.0) continue;
    const double d = s.mu[j] - mu_t;
    score += s.omega[j] * d * d;
  }
  return score;
}

/// Summed class entropies: sum_j -sum_i (p_i/omega_j) ln(p_i/omega_j), with
/// the 0 ln 0 = 0 convention and empty classes contributing zero.
inline double kapur_score(const Histogram256& hist, const ThresholdVector& t) {
  const int classes = t.class_count();
  double score = 0.0;
  for (int j = 0; j < classes; ++j) {
    const auto [lo, hi] = t.class_range(j);
    double omega = 0.0;
    for (int i = lo; i < hi; ++i) omega += hist.p[i];
    if (omega <= 0.0) continue;
    double h = 0.0;
    for (int i = lo; i < hi; ++i) {
      if (hist.p[i] <= 0.0) continue;
      const double q = hist.p[i] / omega;
      h -= q * std::log(q);
    }
    score += std::max(h, 0.0);
  }
  return score;
}

inline std::array<double, 3> otsu_vector(const std::array<Histogram256, 3>& hists,
                                         const ThresholdVector& t) {
  return {otsu_score(hists[0], t), otsu_score(hists[1], t), otsu_score(hists[2], t)};
}

inline std::array<double, 3> kapur_vector(const std::array<Histogram256, 3>& hists,
                                          const ThresholdVector& t) {
  return {kapur_score(hists[0], t), kapur_score(hists[1], t), kapur_score(hists[2], t)};
}

/// Maps a maximization score into the minimization domain.
inline double to_minimization(double score) { return 1.0 / (1.0 + score); }

inline double norm3(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

inline ObjectiveVector eval_j1(const std::array<Histogram256, 3>& hists,
                               const ThresholdVector& t) {
  const auto k = kapur_vector(hists, t);
  return {ObjectiveKind::J1, {to_minimization(k[0]), to_minimization(k[1]), to_minimization(k[2])}};
}

inline ObjectiveVector eval_j2(const std::array<Histogram256, 3>& hists,
                               const ThresholdVector& t) {
  const auto o = otsu_vector(hists, t);
  return {ObjectiveKind::J2, {to_minimization(o[0]), to_minimization(o[1]), to_minimization(o[2])}};
}

inline ObjectiveVector eval_j3(const std::array<Histogram256, 3>& hists,
                               const ThresholdVector& t) {
  const auto o = otsu_vector(hists, t);
  const auto k = kapur_vector(hists, t);
  return {ObjectiveKind::J3,
          {to_minimization(o[0]), to_minimization(o[1]), to_minimization(o[2]),
           to_minimization(k[0]), to_minimization(k[1]), to_minimization(k[2])}};
}

inline ObjectiveVector eval_j4(const std::array<Histogram256, 3>& hists,
                               const ThresholdVector& t) {
  const auto o = otsu_vector(hists, t);
  const auto k = kapur_vector(hists, t);
  return {ObjectiveKind::J4, {to_minimization(norm3(o)), to_minimization(norm3(k))}};
}

inline ObjectiveVector eval_objective(ObjectiveKind kind, const std::array<Histogram256, 3>& hists,
                                      const ThresholdVector& t) {
  switch (kind) {
    case ObjectiveKind::J1: return eval_j1(hists, t);
    case ObjectiveKind::J2: return eval_j2(hists, t);
    case ObjectiveKind::J3: return eval_j3(hists, t);
    case ObjectiveKind::J4: return eval_j4(hists, t);
  }
  throw ConfigInvalid("bad objective kind");
}

/// O(1)-per-class scorer built from prefix sums over one histogram. Used on
/// the optimizer and enumeration hot paths; agrees with the direct-summation
/// functions above to floating-point accuracy.
class ChannelScorer {
 public:
  explicit ChannelScorer(const Histogram256& hist) {
    double cp = 0.0, cip = 0.0, cplogp = 0.0;
    cum_p_[0] = cum_ip_[0] = cum_plogp_[0] = 0.0;
    for (int i = 0; i < 256; ++i) {
      cp += hist.p[i];
      cip += i * hist.p[i];
      if (hist.p[i] > 0.0) cplogp += hist.p[i] * std::log(hist.p[i]);
      cum_p_[i + 1] = cp;
      cum_ip_[i + 1] = cip;
      cum_plogp_[i + 1] = cplogp;
    }
    mu_total_ = cip;
  }

  double total_mean() const { return mu_total_; }

  double otsu(const ThresholdVector& t) const {
    double score = 0.0;
    const int classes = t.class_count();
    for (int j = 0; j < classes; ++j) {
      const auto [lo, hi] = t.class_range(j);
      const double omega = cum_p_[hi] - cum_p_[lo];
      if (omega <= 0.0) continue;
      const double mu = (cum_ip_[hi] - cum_ip_[lo]) / omega;
      const double d = mu - mu_total_;
      score += omega * d * d;
    }
    return score;
  }

  double kapur(const ThresholdVector& t) const {
    double score = 0.0;
    const int classes = t.class_count();
    for (int j = 0; j < classes; ++j) {
      const auto [lo, hi] = t.class_range(j);
      const double omega = cum_p_[hi] - cum_p_[lo];
      if (omega <= 0.0) continue;
      const double plogp = cum_plogp_[hi] - cum_plogp_[lo];
      // H = -sum (p/w) ln(p/w) = ln w - (1/w) sum p ln p
      score += std::max(std::log(omega) - plogp / omega, 0.0);
    }
    return score;
  }

 private:
  std::array<double, 257> cum_p_{};
  std::array<double, 257> cum_ip_{};
  std::array<double, 257> cum_plogp_{};
  double mu_total_ = 0.0;
};

/// One fully evaluated threshold vector: the minimization objective plus the
/// raw maximization-domain scores it was derived from (same component
/// order), kept because reports list both.
struct Evaluation {
  ObjectiveVector objective;
  std::vector<double> raw;
};

/// Evaluates the configured vector objective over a fixed image. Results are
/// memoized per decoded threshold vector: rounding collapses many positions
/// onto the same integers, so optimizer runs mostly hit the cache. Evaluation
/// is reentrant; the cache is guarded so one evaluator may serve concurrent
/// callers.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const std::array<Histogram256, 3>& hists, ObjectiveKind kind)
      : kind_(kind), scorers_{ChannelScorer(hists[0]), ChannelScorer(hists[1]),
                              ChannelScorer(hists[2])} {}

  ObjectiveKind kind() const { return kind_; }

  Evaluation evaluate_uncached(const ThresholdVector& t) const {
    std::array<double, 3> otsu{};
    std::array<double, 3> kapur{};
    const bool need_otsu = kind_ != ObjectiveKind::J1;
    const bool need_kapur = kind_ != ObjectiveKind::J2;
    for (int c = 0; c < 3; ++c) {
      if (need_otsu) otsu[c] = scorers_[c].otsu(t);
      if (need_kapur) kapur[c] = scorers_[c].kapur(t);
    }
    Evaluation e;
    e.objective.kind = kind_;
    switch (kind_) {
      case ObjectiveKind::J1:
        e.raw = {kapur[0], kapur[1], kapur[2]};
        break;
      case ObjectiveKind::J2:
        e.raw = {otsu[0], otsu[1], otsu[2]};
        break;
      case ObjectiveKind::J3:
        e.raw = {otsu[0], otsu[1], otsu[2], kapur[0], kapur[1], kapur[2]};
        break;
      case ObjectiveKind::J4:
        e.raw = {norm3(otsu), norm3(kapur)};
        break;
    }
    e.objective.values.reserve(e.raw.size());
    for (const double r : e.raw) e.objective.values.push_back(to_minimization(r));
    return e;
  }

  // references stay valid across rehashing, so handing them out is safe
  const Evaluation& evaluate(const ThresholdVector& t) const {
    {
      std::lock_guard<std::mutex> lock(cache_mutex_);
      auto it = cache_.find(t);
      if (it != cache_.end()) return it->second;
    }
    Evaluation fresh = evaluate_uncached(t);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return cache_.emplace(t, std::move(fresh)).first->second;
  }

  std::size_t cache_size() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return cache_.size();
  }

 private:
  ObjectiveKind kind_;
  std::array<ChannelScorer, 3> scorers_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<ThresholdVector, Evaluation, ThresholdVectorHash> cache_;
};

}  // namespace paretothresh
