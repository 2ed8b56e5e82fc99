#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfds/linalg.hpp"
#include "pfds/problem.hpp"

namespace pfds {

// Regular unit simplex: every pair at dissimilarity 1, unit weights.
inline MdsProblem simplex(int n) {
  if (n < 3) throw std::invalid_argument("simplex: need n >= 3");
  Matrix d = Matrix::Ones(n, n);
  d.diagonal().setZero();
  return make_problem(std::move(d));
}

// Dissimilarities between nine Dutch political parties in 1967, derived
// from voter preference spread.
inline MdsProblem parties() {
  const int n = 9;
  static const double table[9][9] = {
      {0.000, 0.209, 0.196, 0.171, 0.179, 0.281, 0.250, 0.267, 0.230},
      {0.209, 0.000, 0.250, 0.210, 0.231, 0.190, 0.171, 0.269, 0.204},
      {0.196, 0.250, 0.000, 0.203, 0.185, 0.302, 0.281, 0.257, 0.174},
      {0.171, 0.210, 0.203, 0.000, 0.119, 0.292, 0.250, 0.271, 0.228},
      {0.179, 0.231, 0.185, 0.119, 0.000, 0.290, 0.263, 0.259, 0.225},
      {0.281, 0.190, 0.302, 0.292, 0.290, 0.000, 0.152, 0.236, 0.276},
      {0.250, 0.171, 0.281, 0.250, 0.263, 0.152, 0.000, 0.256, 0.237},
      {0.267, 0.269, 0.257, 0.271, 0.259, 0.236, 0.256, 0.000, 0.274},
      {0.230, 0.204, 0.174, 0.228, 0.225, 0.276, 0.237, 0.274, 0.000},
  };
  Matrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = table[i][j];
  std::vector<std::string> labels = {"KVP", "PvdA", "VVD", "ARP", "CHU", "CPN", "PSP", "BP", "D66"};
  return make_problem(std::move(d), std::nullopt, std::move(labels));
}

// Elementwise conversions from similarity or probability scales to
// dissimilarities. Applied off-diagonal; the diagonal is forced to zero.
enum class TransformKind {
  OneMinus,          // 1 - s, for similarities in [0, 1]
  OneMinusCubed,     // (1 - s)^3
  NegLog,            // -log s, for positive similarities
  SevenMinus,        // 7 - s, for 1..7 rating scales
  AbsNormQuantile,   // |inverse normal cdf of p|, for probabilities in (0, 1)
  SubtractConstant,  // s - c, with a caller-chosen c
};

inline const char* transform_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::OneMinus: return "one-minus";
    case TransformKind::OneMinusCubed: return "one-minus-cubed";
    case TransformKind::NegLog: return "neg-log";
    case TransformKind::SevenMinus: return "seven-minus";
    case TransformKind::AbsNormQuantile: return "abs-norm-quantile";
    case TransformKind::SubtractConstant: return "subtract";
  }
  return "unknown";
}

inline TransformKind transform_from_name(const std::string& name) {
  if (name == "one-minus") return TransformKind::OneMinus;
  if (name == "one-minus-cubed") return TransformKind::OneMinusCubed;
  if (name == "neg-log") return TransformKind::NegLog;
  if (name == "seven-minus") return TransformKind::SevenMinus;
  if (name == "abs-norm-quantile") return TransformKind::AbsNormQuantile;
  if (name == "subtract") return TransformKind::SubtractConstant;
  throw std::invalid_argument("unknown transform '" + name + "'");
}

// Round-trippable text form: the bare name, or "subtract:<c>".
inline std::string make_transform_spec(TransformKind kind, double constant = 0.0) {
  std::string spec = transform_name(kind);
  if (kind == TransformKind::SubtractConstant) {
    char buf[40];
    std::snprintf(buf, sizeof buf, ":%.17g", constant);
    spec += buf;
  }
  return spec;
}

inline std::pair<TransformKind, double> parse_transform_spec(const std::string& spec) {
  const auto pos = spec.find(':');
  if (pos == std::string::npos) return {transform_from_name(spec), 0.0};
  const TransformKind kind = transform_from_name(spec.substr(0, pos));
  char* end = nullptr;
  const std::string tail = spec.substr(pos + 1);
  const double c = std::strtod(tail.c_str(), &end);
  if (!end || *end != '\0')
    throw std::invalid_argument("transform spec '" + spec + "': bad constant");
  return {kind, c};
}

// Inverse of the standard normal distribution function, by the usual
// piecewise rational approximation (absolute error well below 1e-9).
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inverse_normal_cdf: probability must lie strictly in (0, 1)");
  const double q = p - 0.5;
  double r, num, den;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    num = q * (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                    67265.770927008700853) * r + 45921.953931549871457) * r +
                  13731.693765509461125) * r + 1971.5909503065514427) * r +
                133.14166789178437745) * r + 3.387132872796366608);
    den = (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                39307.89580009271061) * r + 21213.794301586595867) * r +
              5394.1960214247511077) * r + 687.1870074920579083) * r +
            42.313330701600911252) * r + 1.0);
    return num / den;
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  if (r <= 5.0) {
    r -= 1.6;
    num = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734);
    den = (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772);
    den = (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  const double value = num / den;
  return q < 0.0 ? -value : value;
}

namespace detail {

inline std::string entry_name(Eigen::Index i, Eigen::Index j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

inline double transform_entry(double s, TransformKind kind, double constant, Eigen::Index i,
                              Eigen::Index j) {
  switch (kind) {
    case TransformKind::OneMinus:
      return 1.0 - s;
    case TransformKind::OneMinusCubed: {
      const double t = 1.0 - s;
      return t * t * t;
    }
    case TransformKind::NegLog:
      if (!(s > 0.0))
        throw std::domain_error("transform neg-log: nonpositive similarity at " + entry_name(i, j));
      return -std::log(s);
    case TransformKind::SevenMinus:
      return 7.0 - s;
    case TransformKind::AbsNormQuantile:
      if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("transform abs-norm-quantile: value outside (0, 1) at " +
                                entry_name(i, j));
      return std::abs(inverse_normal_cdf(s));
    case TransformKind::SubtractConstant:
      return s - constant;
  }
  throw std::invalid_argument("transform: unknown kind");
}

}  // namespace detail

// Apply an elementwise transform to every off-diagonal entry. The result
// must be a valid dissimilarity matrix; a transform that produces a
// negative value reports the offending entry.
inline Matrix apply_transform(const Matrix& m, TransformKind kind, double constant = 0.0) {
  if (m.rows() != m.cols()) throw std::invalid_argument("transform: matrix not square");
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i == j) continue;
      const double v = detail::transform_entry(m(i, j), kind, constant, i, j);
      if (!(v >= 0.0))
        throw std::domain_error(std::string("transform ") + transform_name(kind) +
                                ": negative dissimilarity at " + detail::entry_name(i, j));
      out(i, j) = v;
    }
  return out;
}

// A numeric matrix read from disk, with optional point labels.
struct LabeledMatrix {
  Matrix values;
  std::vector<std::string> labels;  // empty when the file had none
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline bool parse_cell(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

}  // namespace detail

// Read a square matrix from CSV. A leading header row and/or a leading
// label column are detected by non-numeric cells. With symmetrize set,
// asymmetries up to 1e-9 are averaged away; anything larger is an error
// either way.
inline LabeledMatrix read_matrix_csv(std::istream& in, const std::string& source,
                                     bool symmetrize = false) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(detail::split_csv_line(line));
  }
  if (rows.empty()) throw std::invalid_argument(source + ": empty matrix file");

  double probe;
  const bool header_row = !detail::parse_cell(rows[0].back(), probe);
  std::size_t first_data_row = header_row ? 1 : 0;
  if (first_data_row >= rows.size()) throw std::invalid_argument(source + ": no data rows");
  const bool label_col = !detail::parse_cell(rows[first_data_row].front(), probe);

  LabeledMatrix out;
  const std::size_t nrows = rows.size() - first_data_row;
  const std::size_t offset = label_col ? 1 : 0;
  const std::size_t ncols = rows[first_data_row].size() - offset;
  if (nrows != ncols)
    throw std::invalid_argument(source + ": matrix not square (" + std::to_string(nrows) + "x" +
                                std::to_string(ncols) + ")");
  out.values.resize(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  for (std::size_t r = 0; r < nrows; ++r) {
    const auto& cells = rows[first_data_row + r];
    if (cells.size() != ncols + offset)
      throw std::invalid_argument(source + ": row " + std::to_string(r + 1) + " has " +
                                  std::to_string(cells.size() - offset) + " values, expected " +
                                  std::to_string(ncols));
    if (label_col) out.labels.push_back(cells[0]);
    for (std::size_t c = 0; c < ncols; ++c) {
      double v;
      if (!detail::parse_cell(cells[c + offset], v))
        throw std::invalid_argument(source + ": non-numeric cell '" + cells[c + offset] +
                                    "' at row " + std::to_string(r + 1) + ", column " +
                                    std::to_string(c + 1));
      if (!(v >= 0.0))
        throw std::invalid_argument(source + ": negative value at row " + std::to_string(r + 1) +
                                    ", column " + std::to_string(c + 1));
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  if (header_row && out.labels.empty()) {
    const auto& cells = rows[0];
    const std::size_t skip = cells.size() - ncols;  // header may carry a corner cell
    for (std::size_t c = skip; c < cells.size(); ++c) out.labels.push_back(cells[c]);
  }

  for (Eigen::Index i = 0; i < out.values.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      const double gap = std::abs(out.values(i, j) - out.values(j, i));
      if (gap > 1e-9)
        throw std::invalid_argument(source + ": asymmetric at " + detail::entry_name(i, j) +
                                    " (gap " + std::to_string(gap) + ")");
      if (gap != 0.0) {
        if (!symmetrize)
          throw std::invalid_argument(source + ": asymmetric at " + detail::entry_name(i, j) +
                                      "; pass symmetrize to average tiny gaps");
        const double avg = 0.5 * (out.values(i, j) + out.values(j, i));
        out.values(i, j) = avg;
        out.values(j, i) = avg;
      }
    }
  return out;
}

inline LabeledMatrix read_matrix_csv(const std::string& path, bool symmetrize = false) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  return read_matrix_csv(in, path, symmetrize);
}

// Assemble a problem from a dissimilarity file and an optional weight
// file. Weights default to all ones; labels come from the dissimilarity
// file when present.
inline MdsProblem read_problem(const std::string& dissim_path,
                               const std::optional<std::string>& weights_path = std::nullopt,
                               bool symmetrize = false) {
  LabeledMatrix d = read_matrix_csv(dissim_path, symmetrize);
  std::optional<Matrix> w;
  if (weights_path) w = read_matrix_csv(*weights_path, symmetrize).values;
  return make_problem(std::move(d.values), std::move(w), std::move(d.labels));
}

// Write a matrix as CSV with full round-trip precision. Labels, when
// given, become both a header row and a leading column.
inline void write_matrix_csv(std::ostream& out, const Matrix& m,
                             const std::vector<std::string>& labels = {}) {
  char buf[40];
  if (!labels.empty()) {
    if (labels.size() != static_cast<std::size_t>(m.rows()))
      throw std::invalid_argument("write matrix: label count does not match rows");
    out << "label";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!labels.empty()) out << labels[static_cast<std::size_t>(i)] << ',';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

inline void write_matrix_csv(const std::string& path, const Matrix& m,
                             const std::vector<std::string>& labels = {}) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument(path + ": cannot open file for writing");
  write_matrix_csv(out, m, labels);
}

}  // namespace pfds
