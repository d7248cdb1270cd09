#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "paretothresh/optimizers.hpp"

namespace paretothresh {

/// Batch serialization used by the benchmark command. Wall clocks are
/// rounded to millisecond resolution; everything else is reproduced exactly,
/// so two runs with the same seed produce byte-identical documents once the
/// timing fields are masked. The worker-thread count is deliberately not
/// echoed.
inline nlohmann::json batch_report_json(const BatchReport& batch, std::string_view image_name) {
  nlohmann::json j;
  j["image"] = std::string(image_name);
  j["T"] = batch.config.dims;
  j["algorithm"] = algorithm_name(batch.config.algorithm);
  j["objective"] = objective_name(batch.config.objective);
  j["config"] = {{"population", batch.config.population},
                 {"iterations", batch.config.iterations},
                 {"repeats", batch.config.repeats},
                 {"base_seed", batch.config.seed},
                 {"archive_capacity", batch.config.archive_capacity}};
  j["per_run"] = nlohmann::json::array();
  for (const RunReport& run : batch.runs) {
    j["per_run"].push_back({{"seed", run.seed},
                            {"mwr", run.mwr},
                            {"raw_mwr", run.raw_mwr},
                            {"mmwr", run.mmwr},
                            {"archive_size", run.archive.size()},
                            {"evaluations", run.evaluations},
                            {"wall_clock_s", round_to_ms(run.wall_clock_s)}});
  }
  j["mean_mwr"] = batch.mean_mwr;
  j["mean_raw_mwr"] = batch.mean_raw_mwr;
  j["mean_mmwr"] = batch.mean_mmwr;
  j["mean_wall_clock_s"] = round_to_ms(batch.mean_wall_clock_s);
  return j;
}

}  // namespace paretothresh
