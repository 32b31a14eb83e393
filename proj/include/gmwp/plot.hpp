#pragma once

// SVG 1.1 scatter plot of a clustering: points colored by cluster, centers
// drawn as crosses in their cluster's color. Output bytes depend only on
// the inputs.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "gmwp/types.hpp"

namespace gmwp {

struct PlotOptions {
  int width = 640;
  int height = 640;
  int margin = 40;
  double point_radius = 3.0;
  double center_arm = 7.0;
  std::string title;
};

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a"};
inline constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline const char* cluster_color(std::size_t cluster) { return detail::kPalette[cluster % detail::kPaletteSize]; }

/// `points` and `centers` must be two-dimensional; owner[i] indexes centers.
inline std::string render_svg(const PointSet& points, const std::vector<std::size_t>& owner,
                              const PointSet& centers, const PlotOptions& opt = {}) {
  if (points.dim() != 2 || (centers.size() > 0 && centers.dim() != 2))
    throw InvalidInput("scatter plots need two-dimensional data");
  if (owner.size() != points.size()) throw InvalidInput("assignment length does not match the point count");
  for (auto o : owner)
    if (o >= centers.size()) throw InvalidInput("assignment refers to a missing center");

  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  auto extend = [&](ConstView p) {
    for (int j = 0; j < 2; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  };
  for (std::size_t i = 0; i < points.size(); ++i) extend(points[i]);
  for (std::size_t l = 0; l < centers.size(); ++l) extend(centers[l]);
  for (int j = 0; j < 2; ++j)
    if (!(hi[j] > lo[j])) {
      lo[j] -= 1.0;
      hi[j] += 1.0;
    }

  const double inner_w = opt.width - 2.0 * opt.margin;
  const double inner_h = opt.height - 2.0 * opt.margin;
  auto sx = [&](double x) { return opt.margin + (x - lo[0]) / (hi[0] - lo[0]) * inner_w; };
  auto sy = [&](double y) { return opt.height - opt.margin - (y - lo[1]) / (hi[1] - lo[1]) * inner_h; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(opt.width) +
         "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
         std::to_string(opt.height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) +
         "\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    svg += "<text x=\"" + std::to_string(opt.width / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           detail::xml_escape(opt.title) + "</text>\n";

  svg += "<g class=\"points\">\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    svg += "<circle class=\"point\" data-cluster=\"" + std::to_string(owner[i]) + "\" cx=\"" +
           detail::num(sx(points[i][0])) + "\" cy=\"" + detail::num(sy(points[i][1])) + "\" r=\"" +
           detail::num(opt.point_radius) + "\" fill=\"" + cluster_color(owner[i]) + "\"/>\n";
  }
  svg += "</g>\n<g class=\"centers\">\n";
  for (std::size_t l = 0; l < centers.size(); ++l) {
    const double cx = sx(centers[l][0]);
    const double cy = sy(centers[l][1]);
    const double a = opt.center_arm;
    svg += "<path class=\"center\" data-cluster=\"" + std::to_string(l) + "\" d=\"M" + detail::num(cx - a) + " " +
           detail::num(cy - a) + " L" + detail::num(cx + a) + " " + detail::num(cy + a) + " M" +
           detail::num(cx - a) + " " + detail::num(cy + a) + " L" + detail::num(cx + a) + " " +
           detail::num(cy - a) + "\" stroke=\"" + cluster_color(l) + "\" stroke-width=\"3\"/>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

/// Keeps the first two coordinates of every point.
inline PointSet first_two_coordinates(const PointSet& pts) {
  if (pts.dim() < 2) throw InvalidInput("need at least two coordinates to project");
  PointSet out(pts.size(), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out[i][0] = pts[i][0];
    out[i][1] = pts[i][1];
  }
  return out;
}

}  // namespace gmwp
