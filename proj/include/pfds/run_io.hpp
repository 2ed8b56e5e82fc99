#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfds/trajectory.hpp"

namespace pfds {

// Provenance line written at the head of a run file: everything needed to
// reproduce or reinterpret the records that follow.
struct RunMeta {
  std::string dataset;  // built-in name or source path
  std::string weights;  // weight file path, empty for unit weights
  int n = 0;
  int p = 0;
  double cut = 1e-6;
  double eps = 1e-10;
  int itmax = 10000;
  bool normalized = true;
  bool symmetrize = false;
  std::string schedule;  // schedule spec string
  std::string transform;  // transform spec, empty when none was applied
  std::vector<std::string> labels;
};

struct LoadedRun {
  RunMeta meta;
  TrajectoryRecord record;
};

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("run file: malformed matrix field");
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != c)
      throw std::invalid_argument("run file: ragged matrix field");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace detail

// One line of JSON per record: the metadata first, then one solve per
// line in schedule order. Numbers round-trip exactly.
inline void save_run(std::ostream& out, const RunMeta& meta, const TrajectoryRecord& record) {
  nlohmann::json head;
  head["kind"] = "pfds-run";
  head["dataset"] = meta.dataset;
  head["weights"] = meta.weights;
  head["symmetrize"] = meta.symmetrize;
  head["n"] = meta.n;
  head["p"] = meta.p;
  head["cut"] = meta.cut;
  head["eps"] = meta.eps;
  head["itmax"] = meta.itmax;
  head["normalized"] = meta.normalized;
  head["schedule"] = meta.schedule;
  head["transform"] = meta.transform;
  head["labels"] = meta.labels;
  out << head.dump() << '\n';
  for (const auto& r : record.results) {
    nlohmann::json line;
    line["lambda"] = r.lambda;
    line["itel"] = r.itel;
    line["stress"] = r.stress;
    line["penalty"] = r.penalty;
    line["converged"] = r.converged;
    line["max_step_increase"] = r.max_step_increase;
    line["z"] = detail::matrix_to_json(r.z);
    line["x"] = detail::matrix_to_json(r.x);
    out << line.dump() << '\n';
  }
}

inline void save_run(const std::string& path, const RunMeta& meta, const TrajectoryRecord& record) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument(path + ": cannot open file for writing");
  save_run(out, meta, record);
}

inline LoadedRun load_run(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(source + ": empty run file");
  nlohmann::json head;
  try {
    head = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(source + ": bad metadata line: " + e.what());
  }
  if (head.value("kind", "") != "pfds-run")
    throw std::invalid_argument(source + ": not a run file (missing kind marker)");

  LoadedRun run;
  try {
    run.meta.dataset = head.at("dataset").get<std::string>();
    run.meta.weights = head.value("weights", "");
    run.meta.symmetrize = head.value("symmetrize", false);
    run.meta.n = head.at("n").get<int>();
    run.meta.p = head.at("p").get<int>();
    run.meta.cut = head.at("cut").get<double>();
    run.meta.eps = head.at("eps").get<double>();
    run.meta.itmax = head.at("itmax").get<int>();
    run.meta.normalized = head.at("normalized").get<bool>();
    run.meta.schedule = head.at("schedule").get<std::string>();
    run.meta.transform = head.value("transform", "");
    run.meta.labels = head.at("labels").get<std::vector<std::string>>();

    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const nlohmann::json rec = nlohmann::json::parse(line);
      SolveResult r;
      r.lambda = rec.at("lambda").get<double>();
      r.itel = rec.at("itel").get<int>();
      r.stress = rec.at("stress").get<double>();
      r.penalty = rec.at("penalty").get<double>();
      r.converged = rec.value("converged", true);
      r.max_step_increase = rec.value("max_step_increase", 0.0);
      r.z = detail::matrix_from_json(rec.at("z"));
      r.x = detail::matrix_from_json(rec.at("x"));
      run.record.results.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(source + ": bad record line: " + e.what());
  }
  if (run.record.results.empty()) throw std::invalid_argument(source + ": run has no records");

  run.record.cut = run.meta.cut;
  run.record.stop_index = run.record.results.size() - 1;
  run.record.lambda_plus = detect_lambda_plus(run.record, run.meta.cut);
  return run;
}

inline LoadedRun load_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  return load_run(in, path);
}

}  // namespace pfds
