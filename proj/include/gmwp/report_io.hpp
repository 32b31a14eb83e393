#pragma once

// JSON encoding of SolveReport (schema "gmwp.report/1", documented in
// docs/report-schema.md) and the CSV results table.

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gmwp/metrics.hpp"
#include "gmwp/solver_fixed.hpp"

namespace gmwp {

inline constexpr const char* kReportSchema = "gmwp.report/1";

inline nlohmann::ordered_json to_json(const StageTrace& s) {
  nlohmann::ordered_json j;
  j["mu"] = s.mu;
  j["iters"] = s.iters;
  j["deletions"] = s.deletions;
  j["merges"] = s.merges;
  j["final_grad_norm"] = s.final_grad_norm;
  j["converged"] = s.converged;
  if (!s.objective_path.empty()) j["objective_path"] = s.objective_path;
  if (!s.assignment_stable.empty()) j["assignment_stable"] = s.assignment_stable;
  return j;
}

inline StageTrace stage_from_json(const nlohmann::ordered_json& j) {
  StageTrace s;
  s.mu = j.at("mu").get<double>();
  s.iters = j.at("iters").get<std::size_t>();
  s.deletions = j.at("deletions").get<std::size_t>();
  s.merges = j.value("merges", std::size_t{0});
  s.final_grad_norm = j.at("final_grad_norm").get<double>();
  s.converged = j.at("converged").get<bool>();
  if (j.contains("objective_path")) s.objective_path = j["objective_path"].get<std::vector<double>>();
  if (j.contains("assignment_stable")) s.assignment_stable = j["assignment_stable"].get<std::vector<bool>>();
  return s;
}

inline nlohmann::ordered_json to_json(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["rng"] = r.rng;
  j["seed"] = r.seed;
  j["k_init"] = r.k_init;
  j["k_final"] = r.k_final;
  j["objective_raw"] = r.objective_raw;
  j["converged"] = r.converged;
  j["acc"] = r.acc ? nlohmann::ordered_json(*r.acc) : nlohmann::ordered_json(nullptr);
  j["total_iters"] = r.total_iters();
  j["wall_time_s"] = r.wall_time_s;
  j["dim"] = r.centers.n();
  auto centers = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < r.centers.k(); ++l) centers.push_back(r.centers.blocks().row(l));
  j["centers"] = std::move(centers);
  j["assignment"] = {{"owner", r.assignment.owner}, {"cluster_sizes", r.assignment.cluster_sizes}};
  auto stages = nlohmann::ordered_json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  j["stages"] = std::move(stages);
  auto merges = nlohmann::ordered_json::array();
  for (const auto& m : r.merges)
    merges.push_back({{"iteration", m.iteration},
                      {"k_before", m.k_before},
                      {"penalized_before", m.penalized_before},
                      {"penalized_after", m.penalized_after}});
  j["merges"] = std::move(merges);
  return j;
}

inline SolveReport report_from_json(const nlohmann::ordered_json& j) {
  if (j.value("schema", std::string{}) != kReportSchema)
    throw InvalidInput("unsupported report schema '" + j.value("schema", std::string{}) + "'");
  SolveReport r;
  r.rng = j.at("rng").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.k_init = j.at("k_init").get<std::size_t>();
  r.k_final = j.at("k_final").get<std::size_t>();
  r.objective_raw = j.at("objective_raw").get<double>();
  r.converged = j.at("converged").get<bool>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  if (j.contains("acc") && !j["acc"].is_null()) r.acc = j["acc"].get<double>();
  const auto dim = j.at("dim").get<std::size_t>();
  PointSet blocks(0, dim);
  for (const auto& c : j.at("centers")) {
    const auto row = c.get<Vector>();
    if (row.size() != dim) throw InvalidInput("center row has the wrong dimension");
    blocks.push_back(row);
  }
  r.centers = CenterConfig(std::move(blocks));
  r.assignment.owner = j.at("assignment").at("owner").get<std::vector<std::size_t>>();
  r.assignment.cluster_sizes = j.at("assignment").at("cluster_sizes").get<std::vector<std::size_t>>();
  for (const auto& s : j.at("stages")) r.stages.push_back(stage_from_json(s));
  for (const auto& m : j.at("merges"))
    r.merges.push_back({m.at("iteration").get<std::size_t>(), m.at("k_before").get<std::size_t>(),
                        m.at("penalized_before").get<double>(), m.at("penalized_after").get<double>()});
  return r;
}

inline std::string emit_report(const SolveReport& r) { return to_json(r).dump(2) + "\n"; }

inline SolveReport parse_report(const std::string& text) {
  return report_from_json(nlohmann::ordered_json::parse(text));
}

inline nlohmann::ordered_json to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["run_id"] = s.run_id;
  j["seed"] = s.seed;
  j["ACC"] = std::isnan(s.acc) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(s.acc);
  j["Obj"] = s.objective_raw;
  j["Time"] = s.wall_time_s;
  j["k"] = s.k_final;
  return j;
}

namespace detail {

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace detail

inline constexpr const char* kResultsHeader = "ACC,Obj,Time,k,run_id,seed";

/// One results row: accuracy to 4 places, objective to 6, time in seconds
/// at millisecond resolution.
inline std::string results_row(const RunSummary& s) {
  const std::string acc = std::isnan(s.acc) ? "NA" : detail::fixed(s.acc, 4);
  return acc + "," + detail::fixed(s.objective_raw, 6) + "," + detail::fixed(s.wall_time_s, 3) +
         "," + std::to_string(s.k_final) + "," + std::to_string(s.run_id) + "," + std::to_string(s.seed);
}

}  // namespace gmwp
