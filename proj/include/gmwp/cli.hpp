#pragma once

// Command implementations behind the gmwp executable. Each command takes a
// validated config plus output streams and returns a process exit code, so
// tests can drive them in-process.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 dataset load
// error, 3 output write error.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gmwp/data.hpp"
#include "gmwp/metrics.hpp"
#include "gmwp/plot.hpp"
#include "gmwp/report_io.hpp"
#include "gmwp/solver_adaptive.hpp"
#include "gmwp/solver_fixed.hpp"

namespace gmwp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kLoad = 2, kWrite = 3 };

enum class Mode { Fixed, Adaptive };

inline std::string_view to_string(Mode m) { return m == Mode::Fixed ? "fixed" : "adaptive"; }

struct DataSource {
  std::optional<SyntheticSpec> synthetic;  // used when csv_path is empty
  std::string csv_path;
  std::optional<LabelColumn> label_column;
  bool zscore = false;
};

struct BenchConfig {
  DataSource source;
  GaugeKind gauge = GaugeKind::L2;
  Mode mode = Mode::Fixed;
  std::size_t k_init = 10;
  std::size_t runs = 50;
  SolveParams params;
  MergeParams merge;
  std::string out;        // file (run) or path prefix (bench); empty = stdout
  unsigned threads = 0;   // 0 = hardware concurrency
  bool timing = true;     // false writes Time = 0 for byte-stable outputs

  void validate() const {
    if (runs == 0) throw ParameterError("runs must be at least 1");
    if (k_init == 0) throw ParameterError("k-init must be at least 1");
    params.validate();
    merge.validate();
  }
};

inline LabeledDataset load_source(const DataSource& src) {
  LabeledDataset ld;
  if (!src.csv_path.empty()) {
    ld = load_csv(src.csv_path, src.label_column);
    ld.name = std::filesystem::path(src.csv_path).stem().string();
  } else {
    ld = generate_synthetic(src.synthetic.value_or(SyntheticSpec{}));
  }
  if (src.zscore) ld.dataset = zscore(ld.dataset);
  return ld;
}

/// One solve from a seeded random initialization. k_init above the number
/// of points is clamped to m.
inline SolveReport run_once(const LabeledDataset& ld, const BenchConfig& cfg, std::uint64_t seed) {
  SolveParams params = cfg.params;
  params.seed = seed;
  const std::size_t k = std::min(cfg.k_init, ld.dataset.m());
  const CenterConfig init = init_centers(ld.dataset, k, seed);
  SolveReport r = cfg.mode == Mode::Fixed ? solve_fixed(cfg.gauge, ld.dataset, init, params)
                                          : solve_adaptive(cfg.gauge, ld.dataset, init, params, cfg.merge);
  if (ld.labels) r.acc = accuracy(r.assignment, *ld.labels);
  if (!cfg.timing) r.wall_time_s = 0.0;
  return r;
}

inline RunSummary summarize(const SolveReport& r, std::size_t run_id) {
  return {run_id, r.acc.value_or(std::nan("")), r.objective_raw, r.k_final, r.wall_time_s, r.seed};
}

namespace detail {

inline bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  f << content;
  f.close();
  if (!f) {
    err << "error: failed writing '" << path << "'\n";
    return false;
  }
  return true;
}

inline nlohmann::ordered_json config_json(const BenchConfig& cfg, const LabeledDataset& ld) {
  nlohmann::ordered_json j;
  j["dataset"] = ld.name;
  j["m"] = ld.dataset.m();
  j["n"] = ld.dataset.n();
  j["gauge"] = std::string(to_string(cfg.gauge));
  j["mode"] = std::string(to_string(cfg.mode));
  j["k_init"] = cfg.k_init;
  j["runs"] = cfg.runs;
  j["base_seed"] = cfg.params.seed;
  j["mu_schedule"] = cfg.params.mu_schedule;
  j["step_factor"] = cfg.params.step_factor;
  j["epsilon"] = cfg.params.epsilon;
  j["max_iters"] = cfg.params.max_total_iters;
  if (cfg.mode == Mode::Adaptive) {
    j["t_merge"] = cfg.merge.t_merge;
    j["q"] = cfg.merge.q;
    j["lambda_k"] = cfg.merge.lambda_k;
  }
  j["zscore"] = cfg.source.zscore;
  j["rng"] = kRngTag;
  return j;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const LoadError& e) {
    err << "error: " << e.what() << "\n";
    return kLoad;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kLoad;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed report: " << e.what() << "\n";
    return kLoad;
  }
}

}  // namespace detail

/// Writes the synthetic dataset as CSV: feature columns x, y (x0..x{d-1}
/// beyond two dimensions) followed by the label column.
inline int cmd_gen(const SyntheticSpec& spec, const std::string& out_path, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const LabeledDataset ld = generate_synthetic(spec);
    std::ostringstream csv;
    csv.precision(17);
    const std::size_t n = ld.dataset.n();
    for (std::size_t j = 0; j < n; ++j) csv << (n == 2 ? (j == 0 ? "x" : "y") : "x" + std::to_string(j)) << ",";
    csv << "label\n";
    for (std::size_t i = 0; i < ld.dataset.m(); ++i) {
      for (std::size_t j = 0; j < n; ++j) csv << ld.dataset[i][j] << ",";
      csv << (*ld.labels)[i] << "\n";
    }
    if (out_path.empty()) {
      out << csv.str();
      return int{kOk};
    }
    return detail::write_file(out_path, csv.str(), err) ? int{kOk} : int{kWrite};
  });
}

inline int cmd_run(const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    cfg.validate();
    const LabeledDataset ld = load_source(cfg.source);
    const SolveReport r = run_once(ld, cfg, cfg.params.seed);
    const std::string text = emit_report(r);
    if (cfg.out.empty()) {
      out << text;
      return int{kOk};
    }
    return detail::write_file(cfg.out, text, err) ? int{kOk} : int{kWrite};
  });
}

struct BenchResult {
  std::vector<SolveReport> reports;  // indexed by run_id
  std::vector<RunSummary> runs;
  RunSummary best;
  RunAggregate stats;
};

/// Runs seeds base+0 .. base+runs-1 on a worker pool. Results are stored
/// by run_id, so completion order never affects the output.
inline BenchResult run_bench(const LabeledDataset& ld, const BenchConfig& cfg) {
  cfg.validate();
  BenchResult res;
  res.reports.resize(cfg.runs);
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.runs));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t id = next++; id < cfg.runs; id = next++)
        res.reports[id] = run_once(ld, cfg, cfg.params.seed + id);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t id = 0; id < cfg.runs; ++id) res.runs.push_back(summarize(res.reports[id], id));
  res.best = best_of(res.runs);
  res.stats = aggregate(res.runs);
  return res;
}

inline nlohmann::ordered_json bench_json(const BenchConfig& cfg, const LabeledDataset& ld, const BenchResult& res) {
  nlohmann::ordered_json j;
  j["schema"] = "gmwp.bench/1";
  j["config"] = detail::config_json(cfg, ld);
  auto runs = nlohmann::ordered_json::array();
  for (const auto& r : res.runs) runs.push_back(to_json(r));
  j["runs"] = std::move(runs);
  j["best"] = to_json(res.best);
  auto ms = [](const MeanStd& s) { return nlohmann::ordered_json{{"mean", s.mean}, {"std", s.std}}; };
  j["mean_std"] = {{"ACC", ms(res.stats.acc)},
                   {"Obj", ms(res.stats.objective_raw)},
                   {"Time", ms(res.stats.wall_time_s)},
                   {"k", ms(res.stats.k_final)}};
  return j;
}

inline std::string bench_csv(const BenchResult& res) {
  std::string csv = std::string(kResultsHeader) + "\n";
  for (const auto& r : res.runs) csv += results_row(r) + "\n";
  return csv;
}

/// Writes <out>.csv (per-run rows), <out>.json (config, runs, best-of,
/// mean/std) and <out>_best.json (full report of the best run), then prints
/// the best-of row. Without --out only the summary is printed.
inline int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    cfg.validate();
    const LabeledDataset ld = load_source(cfg.source);
    const BenchResult res = run_bench(ld, cfg);

    if (!cfg.out.empty()) {
      if (!detail::write_file(cfg.out + ".csv", bench_csv(res), err)) return int{kWrite};
      if (!detail::write_file(cfg.out + ".json", bench_json(cfg, ld, res).dump(2) + "\n", err)) return int{kWrite};
      if (!detail::write_file(cfg.out + "_best.json", emit_report(res.reports[res.best.run_id]), err))
        return int{kWrite};
    }
    out << "dataset,gauge,mode," << kResultsHeader << "\n";
    out << ld.name << "," << to_string(cfg.gauge) << "," << to_string(cfg.mode) << "," << results_row(res.best)
        << "\n";
    return int{kOk};
  });
}

struct PlotConfig {
  std::string report_path;
  DataSource source;
  std::string out_svg;
  bool project_first_two = false;
  std::string title;
};

inline int cmd_plot(const PlotConfig& cfg, std::ostream& err) {
  if (cfg.report_path.empty() || cfg.out_svg.empty()) {
    err << "usage: gmwp plot --report <report.json> --out <plot.svg> [dataset flags]\n";
    return kUsage;
  }
  return detail::guarded(err, [&] {
    std::ifstream in(cfg.report_path);
    if (!in) throw LoadError("cannot open '" + cfg.report_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const SolveReport report = parse_report(buf.str());
    const LabeledDataset ld = load_source(cfg.source);
    if (report.assignment.owner.size() != ld.dataset.m())
      throw InvalidInput("report assignment does not match the dataset size");

    PointSet pts = ld.dataset.points();
    PointSet ctr = report.centers.blocks();
    if (pts.dim() != 2) {
      if (!cfg.project_first_two) {
        err << "error: dataset has " << pts.dim()
            << " dimensions; pass --first-two to plot the first two coordinates\n";
        return int{kUsage};
      }
      pts = first_two_coordinates(pts);
      ctr = first_two_coordinates(ctr);
    }
    PlotOptions opt;
    opt.title = cfg.title;
    const std::string svg = render_svg(pts, report.assignment.owner, ctr, opt);
    return detail::write_file(cfg.out_svg, svg, err) ? int{kOk} : int{kWrite};
  });
}

}  // namespace gmwp::cli
