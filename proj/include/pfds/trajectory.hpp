#pragma once

#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfds/solver.hpp"

namespace pfds {

// An increasing sequence of penalty weights, starting at or above zero.
struct LambdaSchedule {
  std::vector<double> values;
  std::string spec_text;  // the string form that produced the schedule

  static LambdaSchedule explicit_list(std::vector<double> v, std::string text = "");
  static LambdaSchedule linspace(double first, double last, int count);
  static LambdaSchedule geometric(double start, double factor, int count);
  static LambdaSchedule parse(const std::string& spec);
};

namespace detail {

inline void check_schedule(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("lambda schedule: empty");
  if (!(v.front() >= 0.0)) throw std::invalid_argument("lambda schedule: values must be nonnegative");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1]))
      throw std::invalid_argument("lambda schedule: values must be strictly increasing");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

inline double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("lambda schedule: bad number '") + s + "' in " + what);
  }
}

inline int parse_count(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("lambda schedule: bad count '") + s + "' in " + what);
  }
}

}  // namespace detail

inline LambdaSchedule LambdaSchedule::explicit_list(std::vector<double> v, std::string text) {
  detail::check_schedule(v);
  if (text.empty()) {
    text = "list:";
    char buf[64];
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", v[i]);
      text += (i ? "," : "") + std::string(buf);
    }
  }
  return LambdaSchedule{std::move(v), std::move(text)};
}

inline LambdaSchedule LambdaSchedule::linspace(double first, double last, int count) {
  if (count < 2) throw std::invalid_argument("lambda schedule: linspace needs at least 2 values");
  std::vector<double> v(static_cast<std::size_t>(count));
  const double step = (last - first) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = first + step * i;
  v.back() = last;
  detail::check_schedule(v);
  char buf[96];
  std::snprintf(buf, sizeof buf, "lin:%.17g:%.17g:%d", first, last, count);
  return LambdaSchedule{std::move(v), buf};
}

// Zero is prepended so every trajectory starts from the unpenalized solution.
inline LambdaSchedule LambdaSchedule::geometric(double start, double factor, int count) {
  if (count < 1) throw std::invalid_argument("lambda schedule: geometric needs at least 1 value");
  if (!(start > 0.0)) throw std::invalid_argument("lambda schedule: geometric start must be positive");
  if (!(factor > 1.0)) throw std::invalid_argument("lambda schedule: geometric factor must exceed 1");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(count) + 1);
  v.push_back(0.0);
  double cur = start;
  for (int i = 0; i < count; ++i) {
    v.push_back(cur);
    cur *= factor;
  }
  detail::check_schedule(v);
  char buf[96];
  std::snprintf(buf, sizeof buf, "geo:%.17g:%.17g:%d", start, factor, count);
  return LambdaSchedule{std::move(v), buf};
}

// Grammar: "lin:first:last:count", "geo:start:factor:count",
// "list:v1,v2,...".
inline LambdaSchedule LambdaSchedule::parse(const std::string& spec) {
  const auto parts = detail::split(spec, ':');
  if (parts[0] == "lin") {
    if (parts.size() != 4) throw std::invalid_argument("lambda schedule: lin needs lin:first:last:count");
    auto s = linspace(detail::parse_double(parts[1], "lin"), detail::parse_double(parts[2], "lin"),
                      detail::parse_count(parts[3], "lin"));
    s.spec_text = spec;
    return s;
  }
  if (parts[0] == "geo") {
    if (parts.size() != 4) throw std::invalid_argument("lambda schedule: geo needs geo:start:factor:count");
    auto s = geometric(detail::parse_double(parts[1], "geo"), detail::parse_double(parts[2], "geo"),
                       detail::parse_count(parts[3], "geo"));
    s.spec_text = spec;
    return s;
  }
  if (parts[0] == "list") {
    if (parts.size() != 2) throw std::invalid_argument("lambda schedule: list needs list:v1,v2,...");
    std::vector<double> v;
    for (const auto& item : detail::split(parts[1], ',')) v.push_back(detail::parse_double(item, "list"));
    auto s = explicit_list(std::move(v));
    s.spec_text = spec;
    return s;
  }
  throw std::invalid_argument("lambda schedule: unknown form '" + spec + "' (use lin:, geo: or list:)");
}

// Results of a continuation run over a schedule.
struct TrajectoryRecord {
  std::vector<SolveResult> results;     // one per lambda actually solved
  std::size_t stop_index = 0;           // last solved index
  double cut = 0.0;                     // penalty cutoff used
  std::optional<double> lambda_plus;    // first lambda with penalty below the cutoff
};

struct TrajectorySettings {
  int p = 2;
  double cut = 1e-6;  // stop as soon as the penalty drops below this
  int itmax = 10000;
  double eps = 1e-10;
};

// One line per lambda, fixed-width, matching the reference logs.
inline std::string format_log_line(int itel, double lambda, double stress, double penalty) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "itel %4d lambda %10.6f stress %8.6f penalty %8.6f", itel, lambda,
                stress, penalty);
  return buf;
}

inline std::string format_log_line(const SolveResult& r) {
  return format_log_line(r.itel, r.lambda, r.stress, r.penalty);
}

// Solve along the schedule, warm-starting each solve from the previous
// rotated solution. Stops early once the penalty falls below the cutoff;
// later schedule values are never solved. Solver failures are rethrown
// with the schedule position attached.
inline TrajectoryRecord run_trajectory(
    const MdsProblem& problem, const LambdaSchedule& schedule, const TrajectorySettings& settings,
    const std::function<void(const SolveResult&)>& on_result = {}) {
  detail::check_schedule(schedule.values);
  if (!(settings.cut > 0.0)) throw std::invalid_argument("trajectory: cutoff must be positive");

  TrajectoryRecord record;
  record.cut = settings.cut;
  record.results.reserve(schedule.values.size());

  std::optional<Matrix> warm;
  for (std::size_t k = 0; k < schedule.values.size(); ++k) {
    SolverSettings solver;
    solver.p = settings.p;
    solver.lambda = schedule.values[k];
    solver.itmax = settings.itmax;
    solver.eps = settings.eps;
    SolveResult r;
    try {
      r = solve_penalized(problem, solver, warm);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("trajectory: at schedule index " + std::to_string(k) +
                                  " (lambda " + std::to_string(schedule.values[k]) + "): " + e.what());
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("trajectory: at schedule index " + std::to_string(k) + " (lambda " +
                               std::to_string(schedule.values[k]) + "): " + e.what());
    }
    record.results.push_back(r);
    record.stop_index = k;
    if (on_result) on_result(r);
    if (r.penalty < settings.cut) {
      record.lambda_plus = r.lambda;
      break;
    }
    warm = r.z;
  }
  return record;
}

// Smallest recorded lambda whose penalty fell below the cutoff.
inline std::optional<double> detect_lambda_plus(const TrajectoryRecord& record, double cut) {
  for (const auto& r : record.results)
    if (r.penalty < cut) return r.lambda;
  return std::nullopt;
}

enum class AuditRelation {
  PenalizedStressNondecreasing,  // in lambda
  PenaltyNonincreasing,          // in lambda
  StressNondecreasing,           // in lambda
  StressAboveTotal,              // stress must not exceed stress + lambda * penalty
};

inline const char* audit_relation_name(AuditRelation r) {
  switch (r) {
    case AuditRelation::PenalizedStressNondecreasing: return "penalized stress nondecreasing in lambda";
    case AuditRelation::PenaltyNonincreasing: return "penalty nonincreasing in lambda";
    case AuditRelation::StressNondecreasing: return "stress nondecreasing in lambda";
    case AuditRelation::StressAboveTotal: return "stress exceeds penalized stress";
  }
  return "unknown";
}

struct AuditViolation {
  std::size_t index = 0;  // schedule position where the relation failed
  AuditRelation relation = AuditRelation::PenalizedStressNondecreasing;
  double magnitude = 0.0;  // how far past the tolerance
};

struct AuditReport {
  std::vector<AuditViolation> violations;
  std::size_t pairs_checked = 0;
  double tol = 0.0;
  bool clean() const { return violations.empty(); }
};

// Check the expected monotone behaviour along increasing lambda: the
// penalized loss and the raw loss never drop, the penalty never rises,
// and the raw loss never exceeds the penalized loss. Violations are
// reported, not thrown; they indicate the solver jumped between local
// minima rather than a defect.
inline AuditReport audit_monotonicity(const TrajectoryRecord& record, double tol = 1e-9) {
  AuditReport report;
  report.tol = tol;
  const auto& rs = record.results;
  auto total = [](const SolveResult& r) { return r.stress + r.lambda * r.penalty; };
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double gap = rs[k].stress - total(rs[k]);
    if (gap > 0.0)
      report.violations.push_back({k, AuditRelation::StressAboveTotal, gap});
  }
  for (std::size_t k = 0; k + 1 < rs.size(); ++k) {
    ++report.pairs_checked;
    const double dpi = total(rs[k]) - total(rs[k + 1]);
    if (dpi > tol)
      report.violations.push_back({k + 1, AuditRelation::PenalizedStressNondecreasing, dpi - tol});
    const double dtau = rs[k + 1].penalty - rs[k].penalty;
    if (dtau > tol)
      report.violations.push_back({k + 1, AuditRelation::PenaltyNonincreasing, dtau - tol});
    const double dsig = rs[k].stress - rs[k + 1].stress;
    if (dsig > tol)
      report.violations.push_back({k + 1, AuditRelation::StressNondecreasing, dsig - tol});
  }
  return report;
}

}  // namespace pfds
