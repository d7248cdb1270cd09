#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "paretothresh/metrics.hpp"
#include "paretothresh/objectives.hpp"
#include "paretothresh/pareto.hpp"
#include "paretothresh/rng.hpp"

namespace paretothresh {

enum class Algorithm { MOPSO, MSSA };

inline const char* algorithm_name(Algorithm a) {
  return a == Algorithm::MOPSO ? "mopso" : "mssa";
}

/// Parses an algorithm name. The multi-objective grey wolf and ant lion
/// optimizers are recognized but not implemented here.
inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "mopso") return Algorithm::MOPSO;
  if (name == "mssa") return Algorithm::MSSA;
  if (name == "mogwo" || name == "moalo")
    throw NotImplemented("algorithm '" + name + "' is not implemented; supported: mopso, mssa");
  throw ConfigInvalid("unknown algorithm '" + name + "'; supported: mopso, mssa");
}

struct SwarmConfig {
  int population = 30;
  int iterations = 500;
  int repeats = 30;
  int dims = 1;  // number of thresholds
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::MOPSO;
  ObjectiveKind objective = ObjectiveKind::J4;
  std::size_t archive_capacity = 100;
  double lower_bound = 0.0;
  double upper_bound = 255.0;

  void validate() const {
    if (population < 2) throw ConfigInvalid("population must be >= 2");
    if (iterations < 1) throw ConfigInvalid("iterations must be >= 1");
    if (repeats < 1) throw ConfigInvalid("repeats must be >= 1");
    if (dims < 1) throw ConfigInvalid("threshold count must be >= 1");
    if (dims > 255) throw ConfigInvalid("threshold count must be <= 255");
    if (archive_capacity < 1) throw ConfigInvalid("archive capacity must be >= 1");
    if (!(lower_bound < upper_bound)) throw ConfigInvalid("bounds must satisfy lower < upper");
  }
};

/// Handed to the per-iteration observer; iteration 0 is the initialized
/// population before any update.
struct IterationSnapshot {
  int iteration;
  const std::vector<std::vector<double>>& positions;
  const ParetoArchive& archive;
};
using IterationObserver = std::function<void(const IterationSnapshot&)>;

struct RunReport {
  SwarmConfig config;  // echo, with this run's seed
  std::uint64_t seed = 0;
  ParetoArchive archive{ObjectiveKind::J4};
  std::vector<double> mwr;
  std::vector<double> raw_mwr;
  double mmwr = 0.0;
  double wall_clock_s = 0.0;
  std::int64_t evaluations = 0;
};

/// Leader step size of the salp chain: 2 exp(-(4 l / L)^2) with the
/// iteration index l counted from zero.
inline double salp_c1(int iteration, int total_iterations) {
  const double r = 4.0 * iteration / total_iterations;
  return 2.0 * std::exp(-(r * r));
}

namespace detail {

inline void check_run_inputs(const ObjectiveEvaluator& objective, const SwarmConfig& cfg) {
  cfg.validate();
  if (objective.kind() != cfg.objective)
    throw ConfigInvalid("evaluator objective kind does not match the configured one");
}

struct RunState {
  explicit RunState(const SwarmConfig& cfg)
      : archive(cfg.objective, cfg.archive_capacity),
        archive_rng(make_stream(cfg.seed, static_cast<std::uint64_t>(cfg.population))),
        run_rng(make_stream(cfg.seed, static_cast<std::uint64_t>(cfg.population) + 1)) {
    particle_rng.reserve(cfg.population);
    for (int k = 0; k < cfg.population; ++k)
      particle_rng.push_back(make_stream(cfg.seed, static_cast<std::uint64_t>(k)));
    positions.assign(cfg.population, std::vector<double>(cfg.dims, 0.0));
  }

  ParetoArchive archive;
  Rng archive_rng;
  Rng run_rng;
  std::vector<Rng> particle_rng;
  std::vector<std::vector<double>> positions;
  std::vector<Solution> evaluated;
  std::int64_t evaluations = 0;

  void init_positions(const SwarmConfig& cfg) {
    for (int k = 0; k < cfg.population; ++k)
      for (int d = 0; d < cfg.dims; ++d)
        positions[k][d] =
            cfg.lower_bound + (cfg.upper_bound - cfg.lower_bound) * particle_rng[k].uniform01();
  }

  void evaluate_all(const ObjectiveEvaluator& objective) {
    evaluated.resize(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
      ThresholdVector t = decode_position(positions[k]);
      const Evaluation& e = objective.evaluate(t);
      evaluated[k] = Solution{positions[k], std::move(t), e.objective, e.raw};
      ++evaluations;
    }
  }

  void offer_all_to_archive() {
    for (Solution& s : evaluated) archive.insert(s, archive_rng);
  }
};

inline RunReport finalize_report(const SwarmConfig& cfg, RunState&& state, double seconds) {
  RunReport report;
  report.config = cfg;
  report.seed = cfg.seed;
  report.archive = std::move(state.archive);
  report.mwr = mwr(report.archive);
  report.raw_mwr = mwr_raw(report.archive);
  report.mmwr = mean_of(report.mwr);
  report.wall_clock_s = seconds;
  report.evaluations = state.evaluations;
  return report;
}

}  // namespace detail

/// Canonical MOPSO over threshold-position space: inertia 0.4, both
/// acceleration coefficients 2.0, archive leader via grid roulette, personal
/// best replaced on dominance (coin flip when incomparable). Velocity is
/// zeroed on dimensions that hit the bounds.
inline RunReport run_mopso(const ObjectiveEvaluator& objective, const SwarmConfig& cfg,
                           const IterationObserver& observer = {}) {
  detail::check_run_inputs(objective, cfg);
  constexpr double kInertia = 0.4;
  constexpr double kCognitive = 2.0;
  constexpr double kSocial = 2.0;

  detail::RunState state(cfg);
  std::vector<std::vector<double>> velocity(cfg.population, std::vector<double>(cfg.dims, 0.0));
  std::vector<Solution> pbest;
  double seconds = time_run([&] {
    state.init_positions(cfg);
    state.evaluate_all(objective);
    pbest = state.evaluated;
    state.offer_all_to_archive();
    if (observer) observer({0, state.positions, state.archive});

    for (int iter = 0; iter < cfg.iterations; ++iter) {
      for (int k = 0; k < cfg.population; ++k) {
        Rng& rng = state.particle_rng[k];
        const Solution& leader = state.archive.select_leader(rng);
        for (int d = 0; d < cfg.dims; ++d) {
          const double r1 = rng.uniform01();
          const double r2 = rng.uniform01();
          double& x = state.positions[k][d];
          double& v = velocity[k][d];
          v = kInertia * v + kCognitive * r1 * (pbest[k].position[d] - x) +
              kSocial * r2 * (leader.position[d] - x);
          x += v;
          if (x < cfg.lower_bound) {
            x = cfg.lower_bound;
            v = 0.0;
          } else if (x > cfg.upper_bound) {
            x = cfg.upper_bound;
            v = 0.0;
          }
        }
      }
      state.evaluate_all(objective);
      state.offer_all_to_archive();
      for (int k = 0; k < cfg.population; ++k) {
        const Solution& candidate = state.evaluated[k];
        if (dominates(candidate.objective, pbest[k].objective)) {
          pbest[k] = candidate;
        } else if (!dominates(pbest[k].objective, candidate.objective)) {
          if (state.particle_rng[k].uniform01() < 0.5) pbest[k] = candidate;
        }
      }
      if (observer) observer({iter + 1, state.positions, state.archive});
    }
  });
  return detail::finalize_report(cfg, std::move(state), seconds);
}

/// Multi-objective salp swarm: the front half of the chain jumps around the
/// food source (an archive leader re-drawn every iteration) with a step that
/// decays over iterations; the back half follows by averaging with its
/// predecessor, updated in chain order.
inline RunReport run_mssa(const ObjectiveEvaluator& objective, const SwarmConfig& cfg,
                          const IterationObserver& observer = {}) {
  detail::check_run_inputs(objective, cfg);
  detail::RunState state(cfg);
  double seconds = time_run([&] {
    state.init_positions(cfg);
    state.evaluate_all(objective);
    state.offer_all_to_archive();
    if (observer) observer({0, state.positions, state.archive});

    const int leaders = cfg.population / 2;
    for (int iter = 0; iter < cfg.iterations; ++iter) {
      const Solution food = state.archive.select_leader(state.run_rng);
      const double c1 = salp_c1(iter, cfg.iterations);
      for (int k = 0; k < cfg.population; ++k) {
        for (int d = 0; d < cfg.dims; ++d) {
          double& x = state.positions[k][d];
          if (k < leaders) {
            Rng& rng = state.particle_rng[k];
            const double c2 = rng.uniform01();
            const double c3 = rng.uniform01();
            const double step =
                c1 * ((cfg.upper_bound - cfg.lower_bound) * c2 + cfg.lower_bound);
            x = c3 >= 0.5 ? food.position[d] + step : food.position[d] - step;
          } else {
            x = (x + state.positions[k - 1][d]) / 2.0;
          }
          x = std::clamp(x, cfg.lower_bound, cfg.upper_bound);
        }
      }
      state.evaluate_all(objective);
      state.offer_all_to_archive();
      if (observer) observer({iter + 1, state.positions, state.archive});
    }
  });
  return detail::finalize_report(cfg, std::move(state), seconds);
}

inline RunReport run_single(const ObjectiveEvaluator& objective, const SwarmConfig& cfg,
                            const IterationObserver& observer = {}) {
  return cfg.algorithm == Algorithm::MOPSO ? run_mopso(objective, cfg, observer)
                                           : run_mssa(objective, cfg, observer);
}

struct BatchReport {
  SwarmConfig config;  // base config; per-run seeds are seed + offset
  std::vector<RunReport> runs;
  std::vector<double> mean_mwr;
  std::vector<double> mean_raw_mwr;
  double mean_mmwr = 0.0;
  double mean_wall_clock_s = 0.0;
};

/// Runs `cfg.repeats` independent single-threaded runs with seeds
/// seed+0 .. seed+repeats-1, optionally in parallel. Each run owns its
/// evaluator (and thus its memo cache), so results do not depend on the
/// worker count; the report lists runs by seed offset.
inline BatchReport run_batch(const std::array<Histogram256, 3>& hists, const SwarmConfig& cfg,
                             int threads = 1) {
  cfg.validate();
  BatchReport batch;
  batch.config = cfg;
  batch.runs.resize(cfg.repeats, RunReport{});

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next.fetch_add(1); r < cfg.repeats; r = next.fetch_add(1)) {
      SwarmConfig run_cfg = cfg;
      run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(r);
      ObjectiveEvaluator evaluator(hists, cfg.objective);
      batch.runs[r] = run_single(evaluator, run_cfg);
    }
  };

  const int workers = std::max(1, std::min(threads, cfg.repeats));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const int d = objective_dimension(cfg.objective);
  batch.mean_mwr.assign(d, 0.0);
  batch.mean_raw_mwr.assign(d, 0.0);
  for (const RunReport& run : batch.runs) {
    for (int i = 0; i < d; ++i) {
      batch.mean_mwr[i] += run.mwr[i];
      batch.mean_raw_mwr[i] += run.raw_mwr[i];
    }
    batch.mean_mmwr += run.mmwr;
    batch.mean_wall_clock_s += run.wall_clock_s;
  }
  for (int i = 0; i < d; ++i) {
    batch.mean_mwr[i] /= cfg.repeats;
    batch.mean_raw_mwr[i] /= cfg.repeats;
  }
  batch.mean_mmwr /= cfg.repeats;
  batch.mean_wall_clock_s /= cfg.repeats;
  return batch;
}

}  // namespace paretothresh
