// gmwp: generate data, run single solves, multi-start benchmarks and plots.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmwp/cli.hpp"

namespace {

using gmwp::cli::BenchConfig;
using gmwp::cli::DataSource;

struct DataFlags {
  std::string csv;
  std::string label_col;
  bool zscore = false;
  gmwp::SyntheticSpec synth;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--csv", f.csv, "Dataset CSV (default: synthetic mixture)");
  cmd->add_option("--label-col", f.label_col, "Label column: zero-based index or header name");
  cmd->add_flag("--zscore", f.zscore, "Standardize features before solving");
  cmd->add_option("--k-true", f.synth.k_true, "Synthetic: number of clusters")->capture_default_str();
  cmd->add_option("--points-per-cluster", f.synth.points_per_cluster, "Synthetic: points per cluster")
      ->capture_default_str();
  cmd->add_option("--noise-std", f.synth.noise_std, "Synthetic: noise standard deviation")->capture_default_str();
  cmd->add_option("--dim", f.synth.dim, "Synthetic: dimension")->capture_default_str();
  cmd->add_option("--data-seed", f.synth.seed, "Synthetic: generator seed")->capture_default_str();
}

DataSource to_source(const DataFlags& f) {
  DataSource s;
  s.csv_path = f.csv;
  s.zscore = f.zscore;
  if (f.csv.empty()) s.synthetic = f.synth;
  if (!f.label_col.empty()) {
    const bool numeric = f.label_col.find_first_not_of("0123456789") == std::string::npos;
    if (numeric)
      s.label_column = gmwp::LabelColumn{static_cast<std::size_t>(std::stoul(f.label_col))};
    else
      s.label_column = gmwp::LabelColumn{f.label_col};
  }
  return s;
}

struct SolveFlags {
  std::string gauge = "l2";
  std::string mode = "fixed";
  std::string mu_schedule = "1,0.5,0.2,0.1,0.01";
  BenchConfig cfg;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--gauge", f.gauge, "Distance gauge")->check(CLI::IsMember({"l1", "l2", "linf"}))
      ->capture_default_str();
  cmd->add_option("--mode", f.mode, "Fixed or adaptive cluster count")
      ->check(CLI::IsMember({"fixed", "adaptive"}))
      ->capture_default_str();
  cmd->add_option("--k-init", f.cfg.k_init, "Initial number of centers")->capture_default_str();
  cmd->add_option("--seed", f.cfg.params.seed, "Seed (bench: base seed)")->capture_default_str();
  cmd->add_option("--mu-schedule", f.mu_schedule, "Comma-separated decreasing smoothing values")
      ->capture_default_str();
  cmd->add_option("--step-factor", f.cfg.params.step_factor, "Step size alpha = factor * mu / m")
      ->capture_default_str();
  cmd->add_option("--epsilon", f.cfg.params.epsilon, "Relative gradient tolerance")->capture_default_str();
  cmd->add_option("--max-iters", f.cfg.params.max_total_iters, "Iteration budget shared by all stages")
      ->capture_default_str();
  cmd->add_option("--t-merge", f.cfg.merge.t_merge, "Merge period (adaptive)")->capture_default_str();
  cmd->add_option("--q", f.cfg.merge.q, "Merge distance quantile (adaptive)")->capture_default_str();
  cmd->add_option("--lambda-k", f.cfg.merge.lambda_k, "Penalty per cluster (adaptive)")->capture_default_str();
  cmd->add_option("--out", f.cfg.out, "Output file (run) or path prefix (bench)");
}

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw CLI::ValidationError("--mu-schedule", "bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

BenchConfig finish(SolveFlags& f, const DataFlags& d) {
  BenchConfig cfg = f.cfg;
  cfg.gauge = *gmwp::parse_gauge(f.gauge);
  cfg.mode = f.mode == "fixed" ? gmwp::cli::Mode::Fixed : gmwp::cli::Mode::Adaptive;
  cfg.params.mu_schedule = parse_schedule(f.mu_schedule);
  cfg.source = to_source(d);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moreau-envelope clustering for the multi-source Weber problem"};
  app.require_subcommand(1);

  gmwp::SyntheticSpec gen_spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write the synthetic Gaussian mixture as CSV");
  gen->add_option("--k-true", gen_spec.k_true)->capture_default_str();
  gen->add_option("--points-per-cluster", gen_spec.points_per_cluster)->capture_default_str();
  gen->add_option("--noise-std", gen_spec.noise_std)->capture_default_str();
  gen->add_option("--dim", gen_spec.dim)->capture_default_str();
  gen->add_option("--seed", gen_spec.seed)->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV (default: stdout)");

  DataFlags run_data;
  SolveFlags run_flags;
  auto* run = app.add_subcommand("run", "Solve once and print the JSON report");
  add_data_flags(run, run_data);
  add_solve_flags(run, run_flags);

  DataFlags bench_data;
  SolveFlags bench_flags;
  bool no_timing = false;
  unsigned threads = 0;
  auto* bench = app.add_subcommand("bench", "Multi-start benchmark with best-of summary");
  add_data_flags(bench, bench_data);
  add_solve_flags(bench, bench_flags);
  bench->add_option("--runs", bench_flags.cfg.runs, "Number of runs")->capture_default_str();
  bench->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  bench->add_flag("--no-timing", no_timing, "Write Time = 0 so outputs are byte-reproducible");

  DataFlags plot_data;
  gmwp::cli::PlotConfig plot_cfg;
  auto* plot = app.add_subcommand("plot", "Render a report as an SVG scatter plot");
  add_data_flags(plot, plot_data);
  plot->add_option("--report", plot_cfg.report_path, "Report JSON from run or bench");
  plot->add_option("--out", plot_cfg.out_svg, "Output SVG");
  plot->add_flag("--first-two", plot_cfg.project_first_two, "Plot the first two coordinates of wider data");
  plot->add_option("--title", plot_cfg.title);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gmwp::cli::kUsage;
  }

  try {
    if (*gen) return gmwp::cli::cmd_gen(gen_spec, gen_out, std::cout, std::cerr);
    if (*run) return gmwp::cli::cmd_run(finish(run_flags, run_data), std::cout, std::cerr);
    if (*bench) {
      BenchConfig cfg = finish(bench_flags, bench_data);
      cfg.timing = !no_timing;
      cfg.threads = threads;
      return gmwp::cli::cmd_bench(cfg, std::cout, std::cerr);
    }
    if (*plot) {
      plot_cfg.source = to_source(plot_data);
      return gmwp::cli::cmd_plot(plot_cfg, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gmwp::cli::kUsage;
  }
  return gmwp::cli::kUsage;
}
