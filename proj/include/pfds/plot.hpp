#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfds/align.hpp"
#include "pfds/run_io.hpp"

namespace pfds {

struct PlotOptions {
  int dim_a = 1;           // 1-based column for the horizontal axis
  int dim_b = 2;           // 1-based column for the vertical axis
  bool index_mode = false; // coordinate against schedule position instead
  int size = 640;          // canvas is size x size
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Box {
  double lo_x = std::numeric_limits<double>::infinity();
  double hi_x = -std::numeric_limits<double>::infinity();
  double lo_y = std::numeric_limits<double>::infinity();
  double hi_y = -std::numeric_limits<double>::infinity();
  void grow(double x, double y) {
    lo_x = std::min(lo_x, x);
    hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }
  void pad() {
    const double mx = std::max(1e-12, 0.05 * (hi_x - lo_x));
    const double my = std::max(1e-12, 0.05 * (hi_y - lo_y));
    lo_x -= mx; hi_x += mx;
    lo_y -= my; hi_y += my;
  }
};

class SvgCanvas {
 public:
  SvgCanvas(int size, const Box& box) : size_(size), box_(box) {}

  double px(double x) const {
    return margin_ + (x - box_.lo_x) / (box_.hi_x - box_.lo_x) * (size_ - 2.0 * margin_);
  }
  double py(double y) const {  // svg y grows downward
    return size_ - margin_ - (y - box_.lo_y) / (box_.hi_y - box_.lo_y) * (size_ - 2.0 * margin_);
  }

  void open(std::ostream& out) const {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_ << "\" height=\"" << size_
        << "\" viewBox=\"0 0 " << size_ << " " << size_ << "\">\n";
    out << "<rect width=\"" << size_ << "\" height=\"" << size_ << "\" fill=\"white\"/>\n";
  }

  void polyline(std::ostream& out, const std::vector<std::pair<double, double>>& pts,
                const char* color) const {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out << ' ';
      out << svg_num(px(pts[i].first)) << ',' << svg_num(py(pts[i].second));
    }
    out << "\"/>\n";
  }

  void circle(std::ostream& out, double x, double y, double r, const char* color) const {
    out << "<circle cx=\"" << svg_num(px(x)) << "\" cy=\"" << svg_num(py(y)) << "\" r=\"" << r
        << "\" fill=\"" << color << "\"/>\n";
  }

  void text(std::ostream& out, double x, double y, const std::string& s) const {
    out << "<text x=\"" << svg_num(px(x) + 5) << "\" y=\"" << svg_num(py(y) - 5)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s << "</text>\n";
  }

 private:
  int size_;
  Box box_;
  double margin_ = 40.0;
};

}  // namespace detail

// Render a run as SVG: each point traces a path across the schedule,
// intermediate positions in red, the final configuration in blue with
// labels. In index mode the horizontal axis is the schedule position and
// the vertical axis one chosen coordinate (the only mode for p = 1 runs).
inline std::string render_trajectory_svg(const LoadedRun& run, PlotOptions options = {}) {
  const auto& results = run.record.results;
  const int p = run.meta.p;
  const std::size_t m = results.size();
  const Eigen::Index n = results.front().x.rows();
  if (p < 2) options.index_mode = true;

  std::vector<Matrix> configs;
  configs.reserve(m);
  for (const auto& r : results) configs.push_back(r.x);
  if (!options.index_mode && m >= 2) configs = match_configurations(configs).configs;

  std::ostringstream out;
  detail::Box box;
  if (options.index_mode) {
    const int dim = options.dim_a;
    if (dim < 1 || dim > p) throw std::invalid_argument("plot: dimension out of range");
    box = detail::Box{0.0, static_cast<double>(m > 1 ? m - 1 : 1), 0.0, 0.0};
    for (const auto& c : configs) {
      box.lo_y = std::min(box.lo_y, c.col(dim - 1).minCoeff());
      box.hi_y = std::max(box.hi_y, c.col(dim - 1).maxCoeff());
    }
    box.pad();
    detail::SvgCanvas canvas(options.size, box);
    canvas.open(out);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t k = 0; k < m; ++k)
        pts.emplace_back(static_cast<double>(k), configs[k](i, dim - 1));
      canvas.polyline(out, pts, "red");
      canvas.circle(out, pts.back().first, pts.back().second, 3.0, "blue");
      canvas.text(out, pts.back().first, pts.back().second,
                  run.meta.labels[static_cast<std::size_t>(i)]);
    }
  } else {
    const int a = options.dim_a, b = options.dim_b;
    if (a < 1 || a > p || b < 1 || b > p || a == b)
      throw std::invalid_argument("plot: need two distinct dimensions within 1.." +
                                  std::to_string(p));
    for (const auto& c : configs)
      for (Eigen::Index i = 0; i < n; ++i) box.grow(c(i, a - 1), c(i, b - 1));
    box.pad();
    detail::SvgCanvas canvas(options.size, box);
    canvas.open(out);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t k = 0; k < m; ++k) pts.emplace_back(configs[k](i, a - 1), configs[k](i, b - 1));
      if (m > 1) canvas.polyline(out, pts, "red");
      for (std::size_t k = 0; k + 1 < m; ++k) canvas.circle(out, pts[k].first, pts[k].second, 2.0, "red");
      canvas.circle(out, pts.back().first, pts.back().second, 3.5, "blue");
      canvas.text(out, pts.back().first, pts.back().second,
                  run.meta.labels[static_cast<std::size_t>(i)]);
    }
  }
  out << "</svg>\n";
  return out.str();
}

inline void write_trajectory_svg(const std::string& path, const LoadedRun& run,
                                 const PlotOptions& options = {}) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument(path + ": cannot open file for writing");
  out << render_trajectory_svg(run, options);
}

}  // namespace pfds
