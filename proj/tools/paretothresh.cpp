// paretothresh: multi-level color-image thresholding with a shared threshold
// vector, searched by archive-based multi-objective swarm optimizers and
// checked against exhaustive enumeration.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paretothresh/histogram.hpp"
#include "paretothresh/image.hpp"
#include "paretothresh/metrics.hpp"
#include "paretothresh/optimizers.hpp"
#include "paretothresh/oracle.hpp"
#include "paretothresh/pareto.hpp"
#include "paretothresh/report_json.hpp"
#include "paretothresh/segment.hpp"

namespace fs = std::filesystem;
using namespace paretothresh;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitAcceptance = 4;

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string run_tag(int dims, Algorithm alg, ObjectiveKind kind) {
  return "T" + std::to_string(dims) + "_" + algorithm_name(alg) + "_" + objective_name(kind);
}

fs::path prepare_out_dir(const std::string& out_dir) {
  fs::path dir(out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read back file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Written artifacts are reloaded and sanity-checked before the process
// exits, so a truncated or malformed file fails the command.
void validate_png(const fs::path& path, int width, int height) {
  const RgbImage img = load_rgb_image(path);
  if (img.width != width || img.height != height)
    throw Error("output validation failed: " + path.string() + " has unexpected size");
}

void validate_csv(const fs::path& path, const std::string& expected_header,
                  std::size_t expected_rows) {
  std::istringstream in(read_text_file(path));
  std::string header;
  std::getline(in, header);
  if (header != expected_header)
    throw Error("output validation failed: " + path.string() + " header mismatch");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  if (rows != expected_rows)
    throw Error("output validation failed: " + path.string() + " row count mismatch");
}

std::string front_csv_header(std::size_t m, std::size_t d) {
  std::string h;
  for (std::size_t i = 1; i <= m; ++i) h += "t_" + std::to_string(i) + ",";
  for (std::size_t i = 1; i <= d; ++i) h += "obj_" + std::to_string(i) + ",";
  for (std::size_t i = 1; i <= d; ++i) h += "raw_" + std::to_string(i) + ",";
  return h + "source";
}

std::string format_vector(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += detail::format_double(v[i]);
  }
  return s + "]";
}

std::string format_vector(const std::array<double, 3>& v) {
  return format_vector(std::vector<double>(v.begin(), v.end()));
}

void print_scores(const std::array<Histogram256, 3>& hists, const ThresholdVector& t) {
  const auto otsu = otsu_vector(hists, t);
  const auto kapur = kapur_vector(hists, t);
  std::cout << "thresholds: ";
  for (std::size_t i = 0; i < t.size(); ++i) std::cout << (i ? "," : "") << t[i];
  std::cout << "\notsu raw (r,g,b):  " << format_vector(otsu)
            << "\nkapur raw (r,g,b): " << format_vector(kapur)
            << "\nj1: " << format_vector(eval_j1(hists, t).values)
            << "\nj2: " << format_vector(eval_j2(hists, t).values)
            << "\nj3: " << format_vector(eval_j3(hists, t).values)
            << "\nj4: " << format_vector(eval_j4(hists, t).values) << "\n";
}

struct SearchFlags {
  int T = 1;
  std::string alg = "mssa";
  std::string objective = "j4";
  int pop = 30;
  int iters = 500;
  std::uint64_t seed = 1;
  std::size_t archive_cap = 100;
};

void add_search_flags(CLI::App* cmd, SearchFlags& f, bool with_t = true) {
  if (with_t) cmd->add_option("--T", f.T, "number of thresholds");
  cmd->add_option("--alg", f.alg, "optimizer: mopso or mssa");
  cmd->add_option("--objective", f.objective, "vector objective: j1, j2, j3 or j4");
  cmd->add_option("--pop", f.pop, "population size");
  cmd->add_option("--iters", f.iters, "iterations");
  cmd->add_option("--seed", f.seed, "base RNG seed");
  cmd->add_option("--archive-cap", f.archive_cap, "Pareto archive capacity");
}

SwarmConfig make_config(const SearchFlags& f) {
  SwarmConfig cfg;
  cfg.dims = f.T;
  cfg.algorithm = parse_algorithm(f.alg);
  cfg.objective = parse_objective(f.objective);
  cfg.population = f.pop;
  cfg.iterations = f.iters;
  cfg.seed = f.seed;
  cfg.archive_capacity = f.archive_cap;
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// segment
// ---------------------------------------------------------------------------

int cmd_segment(const std::string& image_path, const std::vector<int>& thresholds_flag,
                const SearchFlags& search, bool searched, const std::vector<int>& masks,
                bool hist3d, const std::string& out_dir) {
  const RgbImage img = load_rgb_image(image_path);
  const auto hists = channel_histograms(img);
  const fs::path dir = prepare_out_dir(out_dir);
  const std::string stem = fs::path(image_path).stem().string();

  ThresholdVector t;
  std::string tag;
  if (!thresholds_flag.empty()) {
    t = ThresholdVector::from_unsorted(thresholds_flag);
    tag = "T" + std::to_string(t.size()) + "_manual";
  } else if (searched) {
    const SwarmConfig cfg = make_config(search);
    ObjectiveEvaluator evaluator(hists, cfg.objective);
    const RunReport report = run_single(evaluator, cfg);
    const Solution* best = nullptr;
    for (const Solution& s : report.archive.members()) {
      if (!best || mean_of(s.objective.values) < mean_of(best->objective.values) ||
          (mean_of(s.objective.values) == mean_of(best->objective.values) &&
           s.thresholds < best->thresholds))
        best = &s;
    }
    t = best->thresholds;
    tag = run_tag(cfg.dims, cfg.algorithm, cfg.objective);
    std::cout << "picked archive member with smallest mean objective out of "
              << report.archive.size() << "\n";
  } else {
    std::cerr << "segment: give either --thresholds or --T/--alg/--objective to search\n";
    return kExitUsage;
  }

  print_scores(hists, t);

  const fs::path quant_path = dir / (stem + "_" + tag + "_quant.png");
  const RgbImage quant = quantize(img, t);
  save_image(quant, quant_path);
  std::cout << "wrote " << quant_path.string() << "\n";
  validate_png(quant_path, img.width, img.height);

  const LabelMaps labels = apply_thresholds(img, t);
  for (const int k : masks) {
    for (const Channel c : {Channel::R, Channel::G, Channel::B}) {
      const fs::path mask_path =
          dir / (stem + "_" + tag + "_mask_c" + std::string(1, channel_letter(c)) + "_k" +
                 std::to_string(k) + ".png");
      save_image(class_mask(labels, c, k), mask_path);
      std::cout << "wrote " << mask_path.string() << "\n";
      validate_png(mask_path, img.width, img.height);
    }
  }

  const fs::path csv_path = dir / (stem + "_" + tag + "_segments.csv");
  {
    std::ostringstream csv;
    write_segment_histogram_csv(img, t, csv);
    write_text_file(csv_path, csv.str());
  }
  std::cout << "wrote " << csv_path.string() << "\n";
  std::size_t nonzero = 0;
  for (const auto& h : hists)
    for (int v = 0; v < 256; ++v)
      if (h.count(v) > 0) ++nonzero;
  validate_csv(csv_path, "channel,intensity,class,count", nonzero);

  if (hist3d) {
    const Sparse3DHistogram h3 = histogram_3d(img);
    const fs::path h3_path = dir / (stem + "_hist3d.csv");
    std::ostringstream csv;
    write_histogram3d_csv(h3, csv);
    write_text_file(h3_path, csv.str());
    std::cout << "wrote " << h3_path.string() << "\n";
    validate_csv(h3_path, "r,g,b,count", h3.entries.size());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// front
// ---------------------------------------------------------------------------

int cmd_front(const std::string& image_path, const SearchFlags& search,
              const std::string& out_dir) {
  const RgbImage img = load_rgb_image(image_path);
  const auto hists = channel_histograms(img);
  const SwarmConfig cfg = make_config(search);
  const fs::path dir = prepare_out_dir(out_dir);
  const std::string stem = fs::path(image_path).stem().string();

  ObjectiveEvaluator evaluator(hists, cfg.objective);
  const RunReport report = run_single(evaluator, cfg);

  const fs::path csv_path =
      dir / (stem + "_" + run_tag(cfg.dims, cfg.algorithm, cfg.objective) + "_front.csv");
  {
    std::ostringstream csv;
    write_archive_csv(report.archive, csv);
    write_text_file(csv_path, csv.str());
  }
  std::cout << "archive size: " << report.archive.size() << "\n"
            << "mwr:  " << format_vector(report.mwr) << "\n"
            << "mmwr: " << detail::format_double(report.mmwr) << "\n"
            << "wall clock: " << round_to_ms(report.wall_clock_s) << " s\n"
            << "wrote " << csv_path.string() << "\n";
  validate_csv(csv_path,
               front_csv_header(cfg.dims, report.archive.members().front().objective.dimension()),
               report.archive.size());
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

int cmd_benchmark(const std::vector<std::string>& images, std::vector<int> t_values,
                  std::vector<std::string> algs, std::vector<std::string> objectives,
                  const SearchFlags& search, int repeats, int threads,
                  const std::string& out_dir) {
  if (t_values.empty()) t_values = {4, 8, 12};
  if (algs.empty()) algs = {"mopso", "mssa"};
  if (objectives.empty()) objectives = {"j1", "j2", "j3", "j4"};
  const fs::path dir = prepare_out_dir(out_dir);

  nlohmann::json all = nlohmann::json::array();
  std::ostringstream csv;
  csv << "image,objective,T,algorithm,mean_mmwr,mean_wall_clock_s";
  for (int i = 1; i <= 6; ++i) csv << ",mwr_" << i;
  for (int i = 1; i <= 6; ++i) csv << ",raw_" << i;
  csv << "\n";

  for (const std::string& image_path : images) {
    const RgbImage img = load_rgb_image(image_path);
    const auto hists = channel_histograms(img);
    const std::string stem = fs::path(image_path).stem().string();
    for (const std::string& obj_name : objectives) {
      for (const int T : t_values) {
        for (const std::string& alg_name : algs) {
          SearchFlags f = search;
          f.T = T;
          f.alg = alg_name;
          f.objective = obj_name;
          SwarmConfig cfg = make_config(f);
          cfg.repeats = repeats;
          const BatchReport batch = run_batch(hists, cfg, threads);
          all.push_back(batch_report_json(batch, stem));
          csv << stem << ',' << obj_name << ',' << T << ',' << alg_name << ','
              << detail::format_double(batch.mean_mmwr) << ','
              << detail::format_double(round_to_ms(batch.mean_wall_clock_s));
          for (int i = 0; i < 6; ++i)
            csv << ','
                << (i < static_cast<int>(batch.mean_mwr.size())
                        ? detail::format_double(batch.mean_mwr[i])
                        : "");
          for (int i = 0; i < 6; ++i)
            csv << ','
                << (i < static_cast<int>(batch.mean_raw_mwr.size())
                        ? detail::format_double(batch.mean_raw_mwr[i])
                        : "");
          csv << "\n";
          std::cerr << "benchmark: " << stem << " " << obj_name << " T=" << T << " " << alg_name
                    << " done (mean " << round_to_ms(batch.mean_wall_clock_s) << " s/run)\n";
        }
      }
    }
  }

  const fs::path json_path = dir / "benchmark.json";
  write_text_file(json_path, all.dump(2) + "\n");
  std::cout << "wrote " << json_path.string() << "\n";
  const fs::path csv_path = dir / "benchmark.csv";
  write_text_file(csv_path, csv.str());
  std::cout << "wrote " << csv_path.string() << "\n";

  // schema checks on the emitted files
  const nlohmann::json parsed = nlohmann::json::parse(read_text_file(json_path));
  const std::size_t batches =
      images.size() * t_values.size() * algs.size() * objectives.size();
  if (!parsed.is_array() || parsed.size() != batches)
    throw Error("output validation failed: benchmark.json batch count");
  for (const auto& b : parsed)
    for (const char* key :
         {"image", "T", "algorithm", "objective", "per_run", "mean_mwr", "mean_mmwr",
          "mean_wall_clock_s"})
      if (!b.contains(key)) throw Error(std::string("output validation failed: missing ") + key);
  std::string csv_header = "image,objective,T,algorithm,mean_mmwr,mean_wall_clock_s";
  for (int i = 1; i <= 6; ++i) csv_header += ",mwr_" + std::to_string(i);
  for (int i = 1; i <= 6; ++i) csv_header += ",raw_" + std::to_string(i);
  validate_csv(csv_path, csv_header, batches);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

int cmd_oracle_check(const std::string& image_path, int T, std::vector<std::string> algs,
                     std::vector<std::string> objectives, const SearchFlags& search, int repeats,
                     int threads, double min_coverage, int min_pass,
                     const std::string& dump_dir) {
  if (algs.empty()) algs = {"mopso", "mssa"};
  if (objectives.empty()) objectives = {"j1", "j2", "j3", "j4"};
  const RgbImage img = load_rgb_image(image_path);
  const auto hists = channel_histograms(img);
  const std::string stem = fs::path(image_path).stem().string();

  bool all_pass = true;
  for (const std::string& obj_name : objectives) {
    const ObjectiveKind kind = parse_objective(obj_name);
    const std::vector<Solution> exact = exhaustive_pareto_front(hists, T, kind);
    if (!dump_dir.empty()) {
      const fs::path dir = prepare_out_dir(dump_dir);
      const fs::path csv_path =
          dir / (stem + "_T" + std::to_string(T) + "_" + obj_name + "_oracle_front.csv");
      std::ostringstream csv;
      write_front_csv(exact, csv, "oracle");
      write_text_file(csv_path, csv.str());
      std::cout << "wrote " << csv_path.string() << "\n";
      validate_csv(csv_path, front_csv_header(T, exact.front().objective.dimension()),
                   exact.size());
    }
    for (const std::string& alg_name : algs) {
      SearchFlags f = search;
      f.T = T;
      f.alg = alg_name;
      f.objective = obj_name;
      SwarmConfig cfg = make_config(f);
      cfg.repeats = repeats;
      const BatchReport batch = run_batch(hists, cfg, threads);
      int passed = 0;
      double mean_cov = 0.0;
      for (const RunReport& run : batch.runs) {
        const double cov = front_coverage(run.archive, exact);
        mean_cov += cov;
        if (cov >= min_coverage) ++passed;
      }
      mean_cov /= repeats;
      const bool ok = passed >= min_pass;
      all_pass = all_pass && ok;
      std::cout << "oracle-check alg=" << alg_name << " objective=" << obj_name << " T=" << T
                << " exact_front=" << exact.size() << " runs=" << repeats
                << " passed=" << passed << " mean_coverage=" << mean_cov << " -> "
                << (ok ? "PASS" : "FAIL") << "\n";
    }
  }
  return all_pass ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level color thresholding via multi-objective swarm optimization"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "read options from an INI file with per-subcommand sections; give it before "
                 "the subcommand, e.g. `paretothresh --config run.ini segment img.png`. "
                 "Command-line flags override file values");

  std::string image;
  std::vector<std::string> images;
  std::string out_dir = ".";
  int threads = default_threads();
  int repeats = 30;

  // segment
  auto* seg = app.add_subcommand("segment", "apply or search thresholds and write artifacts");
  std::vector<int> thresholds_flag;
  std::vector<int> masks;
  bool hist3d = false;
  SearchFlags seg_flags;
  seg->add_option("input", image, "input image (PNG or binary PPM)");
  seg->add_option("--image", image, "input image (PNG or binary PPM)");
  seg->add_option("--thresholds", thresholds_flag, "explicit thresholds, e.g. 13,78,200")
      ->delimiter(',');
  add_search_flags(seg, seg_flags);
  seg->add_option("--mask", masks, "emit binary masks for this class index (repeatable)")
      ->delimiter(',');
  seg->add_flag("--hist3d", hist3d, "also export the sparse 3D histogram CSV");
  seg->add_option("--out-dir", out_dir, "output directory");

  // front
  auto* front = app.add_subcommand("front", "run one optimization and dump the Pareto archive");
  SearchFlags front_flags;
  front->add_option("input", image, "input image");
  front->add_option("--image", image, "input image");
  add_search_flags(front, front_flags);
  front->add_option("--out-dir", out_dir, "output directory");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "sweep T x algorithm x objective with repeats");
  std::vector<int> t_values;
  std::vector<std::string> algs;
  std::vector<std::string> objectives;
  SearchFlags bench_flags;
  bench->add_option("inputs", images, "input images");
  bench->add_option("--image", images, "input images");
  bench->add_option("--T", t_values, "threshold counts (default 4,8,12)")->delimiter(',');
  bench->add_option("--alg", algs, "optimizers (default mopso,mssa)")->delimiter(',');
  bench->add_option("--objective", objectives, "objectives (default j1,j2,j3,j4)")
      ->delimiter(',');
  bench->add_option("--repeats", repeats, "runs per configuration");
  bench->add_option("--pop", bench_flags.pop, "population size");
  bench->add_option("--iters", bench_flags.iters, "iterations");
  bench->add_option("--seed", bench_flags.seed, "base seed; run r uses seed+r");
  bench->add_option("--archive-cap", bench_flags.archive_cap, "archive capacity");
  bench->add_option("--threads", threads, "parallel runs (default: cores)")
      ->envname("PARETO_THRESH_THREADS");
  bench->add_option("--out-dir", out_dir, "output directory");

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check",
                                    "compare seeded swarm runs against the exhaustive front");
  int oracle_t = 1;
  std::vector<std::string> oracle_algs;
  std::vector<std::string> oracle_objectives;
  SearchFlags oracle_flags;
  double min_coverage = 0.95;
  int min_pass = 28;
  oracle->add_option("input", image, "input image");
  oracle->add_option("--image", image, "input image");
  oracle->add_option("--T", oracle_t, "number of thresholds (exhaustive front needs T <= 2)");
  oracle->add_option("--alg", oracle_algs, "optimizers (default mopso,mssa)")->delimiter(',');
  oracle->add_option("--objective", oracle_objectives, "objectives (default all)")
      ->delimiter(',');
  oracle->add_option("--repeats", repeats, "seeded runs per combination");
  oracle->add_option("--pop", oracle_flags.pop, "population size");
  oracle->add_option("--iters", oracle_flags.iters, "iterations");
  oracle->add_option("--seed", oracle_flags.seed, "base seed");
  oracle->add_option("--archive-cap", oracle_flags.archive_cap, "archive capacity");
  oracle->add_option("--min-coverage", min_coverage, "per-run coverage threshold");
  oracle->add_option("--min-pass", min_pass, "required passing runs");
  oracle->add_option("--threads", threads, "parallel runs")->envname("PARETO_THRESH_THREADS");
  std::string oracle_dump_dir;
  oracle->add_option("--out-dir", oracle_dump_dir,
                     "also dump the exhaustive fronts as CSV into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (seg->parsed()) {
      if (image.empty()) {
        std::cerr << "segment: an input image is required\n";
        return kExitUsage;
      }
      const bool searched = seg->count("--T") || seg->count("--alg") ||
                            seg->count("--objective") || seg->count("--seed");
      return cmd_segment(image, thresholds_flag, seg_flags, searched, masks, hist3d, out_dir);
    }
    if (front->parsed()) {
      if (image.empty()) {
        std::cerr << "front: an input image is required\n";
        return kExitUsage;
      }
      return cmd_front(image, front_flags, out_dir);
    }
    if (bench->parsed()) {
      if (images.empty()) {
        std::cerr << "benchmark: at least one input image is required\n";
        return kExitUsage;
      }
      return cmd_benchmark(images, t_values, algs, objectives, bench_flags, repeats, threads,
                           out_dir);
    }
    if (oracle->parsed()) {
      if (image.empty()) {
        std::cerr << "oracle-check: an input image is required\n";
        return kExitUsage;
      }
      return cmd_oracle_check(image, oracle_t, oracle_algs, oracle_objectives, oracle_flags,
                              repeats, threads, min_coverage, min_pass, oracle_dump_dir);
    }
  } catch (const NotImplemented& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FileNotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const UnsupportedFormat& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const CorruptImage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const TooManyThresholds& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
