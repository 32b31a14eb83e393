#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmwp {

using Vector = std::vector<double>;
using ConstView = std::span<const double>;
using MutView = std::span<double>;

/// Malformed data: empty inputs, dimension mismatches, non-finite values.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Out-of-range algorithm parameter (mu <= 0, k > m, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major m x n block of points. Used both for demand points and for
/// the k center blocks, which share the same layout.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t count, std::size_t dim) : dim_(dim), coords_(count * dim, 0.0) {}
  PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw InvalidInput("point dimension must be at least 1");
    if (coords_.size() % dim_ != 0) throw InvalidInput("coordinate count is not a multiple of the dimension");
  }

  static PointSet from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return {};
    const std::size_t dim = rows.front().size();
    if (dim == 0) throw InvalidInput("point dimension must be at least 1");
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (const auto& r : rows) {
      if (r.size() != dim) throw InvalidInput("rows have inconsistent dimension");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return PointSet(dim, std::move(flat));
  }

  [[nodiscard]] std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] bool empty() const { return coords_.empty(); }

  [[nodiscard]] ConstView operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  [[nodiscard]] MutView operator[](std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

  [[nodiscard]] Vector row(std::size_t i) const {
    auto v = (*this)[i];
    return {v.begin(), v.end()};
  }

  void push_back(ConstView p) {
    if (dim_ == 0) dim_ = p.size();
    if (p.size() != dim_ || dim_ == 0) throw InvalidInput("point dimension mismatch");
    coords_.insert(coords_.end(), p.begin(), p.end());
  }

  void erase(std::size_t i) {
    coords_.erase(coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                  coords_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_));
  }

  [[nodiscard]] const std::vector<double>& flat() const { return coords_; }
  [[nodiscard]] std::vector<double>& flat() { return coords_; }

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Demand points a^1..a^m. Invariant: m >= 1, n >= 1, finite entries.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(PointSet points) : points_(std::move(points)) { validate(); }
  static Dataset from_rows(const std::vector<Vector>& rows) { return Dataset(PointSet::from_rows(rows)); }

  [[nodiscard]] std::size_t m() const { return points_.size(); }
  [[nodiscard]] std::size_t n() const { return points_.dim(); }
  [[nodiscard]] ConstView operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] const PointSet& points() const { return points_; }

  bool operator==(const Dataset&) const = default;

 private:
  void validate() const {
    if (points_.size() == 0) throw InvalidInput("dataset must contain at least one point");
    for (double c : points_.flat())
      if (!std::isfinite(c)) throw InvalidInput("dataset contains a non-finite coordinate");
  }

  PointSet points_;
};

/// The k center blocks x^1..x^k. k shrinks over a run as clusters are
/// deleted or merged.
class CenterConfig {
 public:
  CenterConfig() = default;
  explicit CenterConfig(PointSet blocks) : blocks_(std::move(blocks)) {}
  static CenterConfig from_rows(const std::vector<Vector>& rows) { return CenterConfig(PointSet::from_rows(rows)); }

  [[nodiscard]] std::size_t k() const { return blocks_.size(); }
  [[nodiscard]] std::size_t n() const { return blocks_.dim(); }
  [[nodiscard]] ConstView operator[](std::size_t l) const { return blocks_[l]; }
  [[nodiscard]] MutView operator[](std::size_t l) { return blocks_[l]; }
  [[nodiscard]] const PointSet& blocks() const { return blocks_; }
  [[nodiscard]] PointSet& blocks() { return blocks_; }

  /// Euclidean norm of the flattened vector in R^{nk}.
  [[nodiscard]] double flat_norm() const {
    double s = 0.0;
    for (double c : blocks_.flat()) s += c * c;
    return std::sqrt(s);
  }

  bool operator==(const CenterConfig&) const = default;

 private:
  PointSet blocks_;
};

/// Natural clustering: owner[i] is the index of the center serving a^i.
struct Assignment {
  std::vector<std::size_t> owner;
  std::vector<std::size_t> cluster_sizes;

  bool operator==(const Assignment&) const = default;
};

namespace detail {

inline void require_same_dim(ConstView a, ConstView b) {
  if (a.size() != b.size()) throw InvalidInput("vector dimensions differ");
}

inline double squared_distance(ConstView a, ConstView b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

inline double euclidean_distance(ConstView a, ConstView b) { return std::sqrt(squared_distance(a, b)); }

}  // namespace detail

}  // namespace gmwp
