#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gmwp/types.hpp"

namespace gmwp {

/// Failure to read a dataset file. The message names the offending line.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// xoshiro256** seeded through splitmix64. Uniform doubles take the top 53
/// bits; normals use the Box-Muller transform (both outputs consumed in
/// order). SolveReport::rng carries the tag of this generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : state_) s = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw ParameterError("empty sampling range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % bound;
  }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4]{};
  std::optional<double> spare_;
};

struct LabeledDataset {
  Dataset dataset;
  std::optional<std::vector<std::size_t>> labels;  // contiguous ids from 0
  std::string name;

  [[nodiscard]] std::size_t class_count() const {
    if (!labels) return 0;
    std::size_t hi = 0;
    for (auto l : *labels) hi = std::max(hi, l + 1);
    return hi;
  }
};

struct SyntheticSpec {
  std::size_t k_true = 6;
  std::size_t points_per_cluster = 50;
  double noise_std = 0.3;
  std::size_t dim = 2;
  double layout_radius = 3.0;  // means evenly spaced on a circle
  std::uint64_t seed = 2026;

  void validate() const {
    if (k_true == 0) throw ParameterError("k_true must be positive");
    if (points_per_cluster == 0) throw ParameterError("points_per_cluster must be positive");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ParameterError("noise_std must be nonnegative");
    if (dim < 2) throw ParameterError("synthetic data needs at least 2 dimensions");
    if (!(layout_radius > 0.0)) throw ParameterError("layout radius must be positive");
  }
};

/// Mean of cluster c: on the circle of the given radius in the first two
/// coordinates, zero elsewhere.
inline Vector synthetic_mean(const SyntheticSpec& spec, std::size_t c) {
  Vector mean(spec.dim, 0.0);
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(spec.k_true);
  mean[0] = spec.layout_radius * std::cos(angle);
  mean[1] = spec.layout_radius * std::sin(angle);
  return mean;
}

/// Gaussian mixture with isotropic noise. Points are emitted cluster by
/// cluster; labels give the cluster of origin.
inline LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  PointSet pts(spec.k_true * spec.points_per_cluster, spec.dim);
  std::vector<std::size_t> labels(pts.size());
  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.k_true; ++c) {
    const Vector mean = synthetic_mean(spec, c);
    for (std::size_t p = 0; p < spec.points_per_cluster; ++p, ++row) {
      MutView x = pts[row];
      for (std::size_t j = 0; j < spec.dim; ++j) x[j] = mean[j] + spec.noise_std * rng.normal();
      labels[row] = c;
    }
  }
  return {Dataset(std::move(pts)), std::move(labels), "synthetic"};
}

/// Label column selector: zero-based index or header name.
using LabelColumn = std::variant<std::size_t, std::string>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses comma-separated numeric rows. A first row holding any
/// non-numeric field is treated as a header. Labels (any text) are
/// re-encoded to ids in order of first appearance. Blank lines are skipped.
inline LabeledDataset parse_csv(std::istream& in, const std::optional<LabelColumn>& label_column,
                                const std::string& name = "csv") {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> width;
  std::optional<std::size_t> label_idx;
  std::vector<std::string> header;
  bool first_content = true;

  std::vector<double> coords;
  std::vector<std::size_t> labels;
  std::unordered_map<std::string, std::size_t> label_ids;

  auto resolve_label = [&](std::size_t ncols) {
    if (!label_column) return;
    if (const auto* idx = std::get_if<std::size_t>(&*label_column)) {
      if (*idx >= ncols) throw LoadError(name + ": label column " + std::to_string(*idx) + " out of range");
      label_idx = *idx;
      return;
    }
    const auto& wanted = std::get<std::string>(*label_column);
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == wanted) label_idx = c;
    if (!label_idx) throw LoadError(name + ": no column named '" + wanted + "'");
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv(line);
    const std::string where = name + ":" + std::to_string(line_no);

    if (first_content) {
      first_content = false;
      // A text label in an index-selected column does not make a header.
      const auto* label_by_index = label_column ? std::get_if<std::size_t>(&*label_column) : nullptr;
      bool all_numeric = true;
      for (std::size_t c = 0; c < fields.size(); ++c)
        if (!(label_by_index && c == *label_by_index))
          all_numeric = all_numeric && detail::parse_number(fields[c]).has_value();
      width = fields.size();
      if (!all_numeric) {
        for (auto f : fields) header.emplace_back(f);
        resolve_label(fields.size());
        continue;
      }
      if (label_column && std::holds_alternative<std::string>(*label_column))
        throw LoadError(name + ": label column given by name but the file has no header");
      resolve_label(fields.size());
    }

    if (fields.size() != *width)
      throw LoadError(where + ": expected " + std::to_string(*width) + " fields, found " +
                      std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (label_idx && c == *label_idx) {
        const std::string key(fields[c]);
        const auto [it, inserted] = label_ids.try_emplace(key, label_ids.size());
        labels.push_back(it->second);
        continue;
      }
      const auto v = detail::parse_number(fields[c]);
      if (!v) throw LoadError(where + ": non-numeric value '" + std::string(fields[c]) + "' in column " +
                              std::to_string(c));
      coords.push_back(*v);
    }
  }

  if (!width || coords.empty()) throw LoadError(name + ": no data rows");
  const std::size_t n = *width - (label_idx ? 1 : 0);
  if (n == 0) throw LoadError(name + ": no feature columns");

  LabeledDataset out{Dataset(PointSet(n, std::move(coords))), std::nullopt, name};
  if (label_idx) out.labels = std::move(labels);
  return out;
}

inline LabeledDataset load_csv(const std::string& path, const std::optional<LabelColumn>& label_column) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path + "'");
  return parse_csv(in, label_column, path);
}

/// Per-feature z-score (population standard deviation). Constant features
/// are centered only.
inline Dataset zscore(const Dataset& data) {
  const std::size_t m = data.m();
  const std::size_t n = data.n();
  PointSet out = data.points();
  for (std::size_t j = 0; j < n; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += data[i][j];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) var += (data[i][j] - mean) * (data[i][j] - mean);
    const double sd = std::sqrt(var / static_cast<double>(m));
    for (std::size_t i = 0; i < m; ++i) out[i][j] = sd > 0.0 ? (data[i][j] - mean) / sd : data[i][j] - mean;
  }
  return Dataset(std::move(out));
}

/// k distinct data points drawn uniformly without replacement (partial
/// Fisher-Yates), in draw order.
inline CenterConfig init_centers(const Dataset& data, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw ParameterError("k must be at least 1");
  if (k > data.m())
    throw ParameterError("k = " + std::to_string(k) + " exceeds the number of points " + std::to_string(data.m()));
  Rng rng(seed);
  std::vector<std::size_t> idx(data.m());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  PointSet blocks;
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t pick = s + static_cast<std::size_t>(rng.below(idx.size() - s));
    std::swap(idx[s], idx[pick]);
    blocks.push_back(data[idx[s]]);
  }
  return CenterConfig(std::move(blocks));
}

}  // namespace gmwp
