#include <doctest.h>

#include <cmath>

#include "paretothresh/optimizers.hpp"
#include "paretothresh/oracle.hpp"
#include "support/fixtures.hpp"

using namespace paretothresh;

namespace {

bool reports_equal_modulo_time(const RunReport& a, const RunReport& b) {
  if (a.seed != b.seed || a.evaluations != b.evaluations) return false;
  if (a.mwr != b.mwr || a.raw_mwr != b.raw_mwr || a.mmwr != b.mmwr) return false;
  if (a.archive.size() != b.archive.size()) return false;
  for (std::size_t i = 0; i < a.archive.size(); ++i) {
    const Solution& x = a.archive.members()[i];
    const Solution& y = b.archive.members()[i];
    if (x.position != y.position || !(x.thresholds == y.thresholds) ||
        x.objective.values != y.objective.values || x.raw != y.raw)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bookkeeping: evaluations = population x (iterations + 1)") {
  const auto hists = channel_histograms(fixtures::synthetic_rgb_64());
  SwarmConfig cfg;
  cfg.population = 2;
  cfg.iterations = 1;
  cfg.dims = 1;
  cfg.objective = ObjectiveKind::J4;
  for (const Algorithm alg : {Algorithm::MOPSO, Algorithm::MSSA}) {
    cfg.algorithm = alg;
    ObjectiveEvaluator ev(hists, cfg.objective);
    const RunReport report = run_single(ev, cfg);
    CHECK(report.evaluations == 4);
    CHECK_FALSE(report.archive.empty());
  }
}

TEST_CASE("same seed, same report, bit for bit") {
  const auto hists = channel_histograms(fixtures::synthetic_rgb_64());
  for (const Algorithm alg : {Algorithm::MOPSO, Algorithm::MSSA}) {
    SwarmConfig cfg;
    cfg.population = 12;
    cfg.iterations = 40;
    cfg.dims = 3;
    cfg.seed = 777;
    cfg.algorithm = alg;
    cfg.objective = ObjectiveKind::J3;
    ObjectiveEvaluator ev1(hists, cfg.objective);
    ObjectiveEvaluator ev2(hists, cfg.objective);
    const RunReport a = run_single(ev1, cfg);
    const RunReport b = run_single(ev2, cfg);
    CHECK(reports_equal_modulo_time(a, b));
  }
}

TEST_CASE("different seeds usually differ") {
  const auto hists = channel_histograms(fixtures::synthetic_rgb_64());
  SwarmConfig cfg;
  cfg.population = 8;
  cfg.iterations = 10;
  cfg.dims = 4;
  cfg.objective = ObjectiveKind::J3;
  ObjectiveEvaluator ev(hists, cfg.objective);
  cfg.seed = 1;
  const RunReport a = run_single(ev, cfg);
  cfg.seed = 2;
  const RunReport b = run_single(ev, cfg);
  CHECK_FALSE(reports_equal_modulo_time(a, b));
}

TEST_CASE("positions stay inside bounds at every iteration") {
  const auto hists = channel_histograms(fixtures::gray_trimodal_64());
  for (const Algorithm alg : {Algorithm::MOPSO, Algorithm::MSSA}) {
    SwarmConfig cfg;
    cfg.population = 10;
    cfg.iterations = 60;
    cfg.dims = 2;
    cfg.seed = 5;
    cfg.algorithm = alg;
    cfg.objective = ObjectiveKind::J2;
    ObjectiveEvaluator ev(hists, cfg.objective);
    int snapshots = 0;
    run_single(ev, cfg, [&](const IterationSnapshot& snap) {
      ++snapshots;
      for (const auto& pos : snap.positions)
        for (const double x : pos) {
          CHECK(x >= 0.0);
          CHECK(x <= 255.0);
        }
    });
    CHECK(snapshots == cfg.iterations + 1);
  }
}

TEST_CASE("archive mmwr is non-increasing on a totally ordered landscape") {
  // equal channels collapse dominance to a total order, so the archive holds
  // exactly one member and replacements only ever improve it
  const auto hists = channel_histograms(fixtures::gray_trimodal_64());
  SwarmConfig cfg;
  cfg.population = 10;
  cfg.iterations = 80;
  cfg.dims = 2;
  cfg.seed = 9;
  cfg.objective = ObjectiveKind::J2;
  ObjectiveEvaluator ev(hists, cfg.objective);
  double prev = 1.0;
  run_single(ev, cfg, [&](const IterationSnapshot& snap) {
    CHECK(snap.archive.size() == 1);
    const double current = mmwr(snap.archive);
    CHECK(current <= prev + 1e-15);
    prev = current;
  });
}

TEST_CASE("constant objective keeps a single archive point") {
  // single-intensity channels: every threshold vector scores identically
  const std::array<Histogram256, 3> hists = {fixtures::single_spike_hist(7),
                                             fixtures::single_spike_hist(7),
                                             fixtures::single_spike_hist(7)};
  for (const Algorithm alg : {Algorithm::MOPSO, Algorithm::MSSA}) {
    SwarmConfig cfg;
    cfg.population = 8;
    cfg.iterations = 25;
    cfg.dims = 3;
    cfg.algorithm = alg;
    cfg.objective = ObjectiveKind::J1;
    ObjectiveEvaluator ev(hists, cfg.objective);
    const RunReport report = run_single(ev, cfg);
    CHECK(report.archive.size() == 1);
    for (const double v : report.archive.members()[0].objective.values) CHECK(v == 1.0);
  }
}

TEST_CASE("mopso converges to the exhaustive otsu optimum on a grayscale image") {
  const auto hists = channel_histograms(fixtures::gray_trimodal_64());
  const ScalarOptimum opt = exhaustive_scalar_optimum(hists[0], 1, Method::Otsu);
  SwarmConfig cfg;
  cfg.dims = 1;
  cfg.iterations = 150;
  cfg.seed = 3;
  cfg.objective = ObjectiveKind::J2;
  ObjectiveEvaluator ev(hists, cfg.objective);
  const RunReport report = run_mopso(ev, cfg);
  REQUIRE(report.archive.size() == 1);
  for (const double v : report.archive.members()[0].objective.values)
    CHECK(std::abs(v - to_minimization(opt.score)) <= 1e-9);
}

TEST_CASE("mssa converges to the exhaustive kapur optimum on the uniform ramp") {
  const auto hists = channel_histograms(fixtures::gray_uniform_ramp_64());
  const ScalarOptimum opt = exhaustive_scalar_optimum(hists[0], 1, Method::Kapur);
  CHECK(opt.thresholds.values() == std::vector<int>{128});
  SwarmConfig cfg;
  cfg.dims = 1;
  cfg.iterations = 150;
  cfg.seed = 4;
  cfg.algorithm = Algorithm::MSSA;
  cfg.objective = ObjectiveKind::J1;
  ObjectiveEvaluator ev(hists, cfg.objective);
  const RunReport report = run_mssa(ev, cfg);
  REQUIRE(report.archive.size() == 1);
  for (const double v : report.archive.members()[0].objective.values)
    CHECK(std::abs(v - to_minimization(opt.score)) <= 1e-9);
}

TEST_CASE("salp leader step starts at exactly 2") {
  CHECK(salp_c1(0, 500) == 2.0);
  CHECK(salp_c1(500, 500) == doctest::Approx(2.0 * std::exp(-16.0)));
  CHECK(salp_c1(1, 500) < 2.0);
}

TEST_CASE("config validation") {
  SwarmConfig cfg;
  cfg.population = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigInvalid);
  cfg.population = 30;
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigInvalid);
  cfg.iterations = 10;
  cfg.dims = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigInvalid);
  cfg.dims = 1;
  CHECK_NOTHROW(cfg.validate());

  const auto hists = channel_histograms(fixtures::synthetic_rgb_64());
  ObjectiveEvaluator ev(hists, ObjectiveKind::J1);
  cfg.objective = ObjectiveKind::J2;  // evaluator disagrees
  CHECK_THROWS_AS(run_mopso(ev, cfg), ConfigInvalid);
}

TEST_CASE("batch: aggregation and determinism across worker counts") {
  const auto hists = channel_histograms(fixtures::synthetic_rgb_64());
  SwarmConfig cfg;
  cfg.population = 8;
  cfg.iterations = 15;
  cfg.dims = 2;
  cfg.repeats = 6;
  cfg.seed = 42;
  cfg.objective = ObjectiveKind::J4;

  const BatchReport serial = run_batch(hists, cfg, 1);
  const BatchReport parallel = run_batch(hists, cfg, 4);
  REQUIRE(serial.runs.size() == 6);
  REQUIRE(parallel.runs.size() == 6);
  for (int r = 0; r < 6; ++r) {
    CHECK(serial.runs[r].seed == cfg.seed + r);
    CHECK(reports_equal_modulo_time(serial.runs[r], parallel.runs[r]));
  }
  CHECK(serial.mean_mwr == parallel.mean_mwr);
  CHECK(serial.mean_mmwr == parallel.mean_mmwr);

  // componentwise mean oracle
  for (std::size_t d = 0; d < serial.mean_mwr.size(); ++d) {
    double sum = 0.0;
    for (const RunReport& run : serial.runs) sum += run.mwr[d];
    CHECK(serial.mean_mwr[d] == doctest::Approx(sum / 6).epsilon(1e-15));
  }
}

TEST_CASE("batch with one repeat echoes the single run") {
  const auto hists = channel_histograms(fixtures::synthetic_rgb_64());
  SwarmConfig cfg;
  cfg.population = 6;
  cfg.iterations = 10;
  cfg.dims = 1;
  cfg.repeats = 1;
  cfg.objective = ObjectiveKind::J1;
  const BatchReport batch = run_batch(hists, cfg, 2);
  CHECK(batch.mean_mwr == batch.runs[0].mwr);
  CHECK(batch.mean_mmwr == batch.runs[0].mmwr);
}
