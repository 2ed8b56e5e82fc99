// Command line front end: solve, trajectory, oracle, diagnose, align,
// plot and dataset subcommands over the pfds library.
//
// Exit codes: 0 success, 2 invalid input or arguments, 3 numerical
// failure, 4 monotonicity audit failure under --strict-audits.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfds/pfds.hpp"

namespace {

struct ProblemArgs {
  std::string dataset;       // simplex:N or parties
  std::string data_path;     // CSV file
  std::string weights_path;  // CSV file, optional
  bool symmetrize = false;
  std::string transform;  // transform name, empty for none
  double constant = 0.0;
  bool raw = false;  // keep dissimilarities unscaled
};

void add_problem_options(CLI::App* cmd, ProblemArgs& args) {
  auto* dataset = cmd->add_option("--dataset", args.dataset,
                                  "built-in data: simplex:N or parties");
  auto* data = cmd->add_option("--data", args.data_path, "dissimilarity matrix CSV");
  dataset->excludes(data);
  data->excludes(dataset);
  cmd->add_option("--weights", args.weights_path, "weight matrix CSV")->needs(data);
  cmd->add_flag("--symmetrize", args.symmetrize, "average away asymmetries up to 1e-9");
  cmd->add_option("--transform", args.transform,
                  "one-minus | one-minus-cubed | neg-log | seven-minus | abs-norm-quantile | subtract");
  cmd->add_option("--constant", args.constant, "constant for the subtract transform");
  auto* normalize = cmd->add_flag("--normalize", "scale dissimilarities to unit weighted size (default)");
  cmd->add_flag("--raw", args.raw, "keep dissimilarities unscaled")->excludes(normalize);
}

pfds::MdsProblem load_problem(const ProblemArgs& args, pfds::RunMeta* meta = nullptr) {
  std::optional<pfds::TransformKind> kind;
  if (!args.transform.empty()) kind = pfds::transform_from_name(args.transform);

  pfds::MdsProblem problem;
  if (!args.dataset.empty()) {
    if (args.dataset == "parties") {
      problem = pfds::parties();
    } else if (args.dataset.rfind("simplex:", 0) == 0) {
      int n = 0;
      try {
        n = std::stoi(args.dataset.substr(8));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad dataset '" + args.dataset + "': expected simplex:N");
      }
      problem = pfds::simplex(n);
    } else {
      throw std::invalid_argument("unknown dataset '" + args.dataset +
                                  "' (use simplex:N, parties, or --data FILE)");
    }
    if (kind) problem.dissim = pfds::apply_transform(problem.dissim, *kind, args.constant);
  } else if (!args.data_path.empty()) {
    // Transform the raw table before dissimilarity validation: similarity
    // and proportion tables carry nonzero diagonals and only become
    // dissimilarities once transformed.
    auto d = pfds::read_matrix_csv(args.data_path, args.symmetrize);
    if (kind) d.values = pfds::apply_transform(d.values, *kind, args.constant);
    std::optional<pfds::Matrix> w;
    if (!args.weights_path.empty())
      w = pfds::read_matrix_csv(args.weights_path, args.symmetrize).values;
    problem = pfds::make_problem(std::move(d.values), std::move(w), std::move(d.labels));
  } else {
    throw std::invalid_argument("no input: pass --dataset or --data");
  }

  const std::string transform_spec =
      kind ? pfds::make_transform_spec(*kind, args.constant) : std::string{};
  if (!args.raw) problem = pfds::normalize(problem);

  if (meta) {
    meta->dataset = args.dataset.empty() ? args.data_path : args.dataset;
    meta->weights = args.weights_path;
    meta->symmetrize = args.symmetrize;
    meta->n = problem.n();
    meta->normalized = !args.raw;
    meta->transform = transform_spec;
    meta->labels = problem.labels;
  }
  return problem;
}

pfds::MdsProblem rebuild_problem(const pfds::RunMeta& meta) {
  ProblemArgs args;
  if (meta.dataset == "parties" || meta.dataset.rfind("simplex:", 0) == 0)
    args.dataset = meta.dataset;
  else
    args.data_path = meta.dataset;
  args.weights_path = meta.weights;
  args.symmetrize = meta.symmetrize;
  if (!meta.transform.empty()) {
    const auto [kind, c] = pfds::parse_transform_spec(meta.transform);
    args.transform = pfds::transform_name(kind);
    args.constant = c;
  }
  args.raw = !meta.normalized;
  return load_problem(args);
}

void print_audit(const pfds::AuditReport& report, std::ostream& out, const char* prefix) {
  for (const auto& v : report.violations) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%sschedule index %zu: relation \"%s\" violated by %.3e",
                  prefix, v.index, pfds::audit_relation_name(v.relation), v.magnitude);
    out << buf << '\n';
  }
}

int cmd_solve(const ProblemArgs& pargs, int p, double lambda, int itmax, double eps,
              const std::string& out_x, const std::string& out_z) {
  pfds::RunMeta meta;
  const pfds::MdsProblem problem = load_problem(pargs, &meta);
  pfds::SolverSettings settings;
  settings.p = p;
  settings.lambda = lambda;
  settings.itmax = itmax;
  settings.eps = eps;
  const pfds::SolveResult r = pfds::solve_penalized(problem, settings);
  std::cout << pfds::format_log_line(r) << '\n';
  if (!r.converged) std::cerr << "warning: iteration limit reached before convergence\n";
  if (!out_x.empty()) pfds::write_matrix_csv(out_x, r.x, problem.labels);
  if (!out_z.empty()) pfds::write_matrix_csv(out_z, r.z, problem.labels);
  return 0;
}

int cmd_trajectory(const ProblemArgs& pargs, int p, const std::string& lambdas, double cut,
                   int itmax, double eps, const std::string& out, bool strict_audits) {
  pfds::RunMeta meta;
  const pfds::MdsProblem problem = load_problem(pargs, &meta);
  const pfds::LambdaSchedule schedule = pfds::LambdaSchedule::parse(lambdas);
  pfds::TrajectorySettings settings;
  settings.p = p;
  settings.cut = cut;
  settings.itmax = itmax;
  settings.eps = eps;
  const pfds::TrajectoryRecord record = pfds::run_trajectory(
      problem, schedule, settings,
      [](const pfds::SolveResult& r) { std::cout << pfds::format_log_line(r) << std::endl; });

  meta.p = p;
  meta.cut = cut;
  meta.eps = eps;
  meta.itmax = itmax;
  meta.schedule = schedule.spec_text;
  if (!out.empty()) pfds::save_run(out, meta, record);

  if (!record.lambda_plus)
    std::cerr << "note: penalty never fell below " << cut << " within the schedule\n";

  const pfds::AuditReport report = pfds::audit_monotonicity(record);
  if (!report.clean()) {
    print_audit(report, std::cerr, strict_audits ? "audit failure: " : "warning: ");
    if (strict_audits) return 4;
  }
  return 0;
}

int cmd_oracle(const ProblemArgs& pargs, int max_n, bool census, int threads) {
  const pfds::MdsProblem problem = load_problem(pargs);
  pfds::OracleOptions options;
  options.max_n = max_n;
  options.count_local_minima = census;
  options.threads = threads;
  const pfds::OracleResult r = pfds::global_min_1d(problem, options);

  char buf[160];
  std::cout << "orders enumerated (up to reflection): " << r.orders_enumerated << '\n';
  std::snprintf(buf, sizeof buf, "global minimum stress: %.6f  (%.17g)", r.best_stress,
                r.best_stress);
  std::cout << buf << '\n';
  std::cout << "best order:";
  for (int idx : r.best_order) std::cout << ' ' << problem.labels[static_cast<std::size_t>(idx)];
  std::cout << '\n';
  std::cout << "coordinates:\n";
  for (Eigen::Index i = 0; i < r.best_x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "  %-12s %.10f", problem.labels[static_cast<std::size_t>(i)].c_str(),
                  r.best_x(i));
    std::cout << buf << '\n';
  }
  if (census) {
    std::cout << "local minima (up to reflection): " << *r.local_minima << '\n';
    std::cout << "local minima (both orientations): " << 2 * *r.local_minima << '\n';
    std::cout << "orders skipped for tied coordinates: " << *r.tied_orders << '\n';
  }
  return 0;
}

int cmd_diagnose(const std::string& run_path) {
  const pfds::LoadedRun run = pfds::load_run(run_path);
  const pfds::MdsProblem problem = rebuild_problem(run.meta);
  const auto& results = run.record.results;
  char buf[160];

  const pfds::SolveResult& first = results.front();
  if (first.lambda == 0.0) {
    const pfds::RankReport rank = pfds::gower_rank(first.z);
    std::cout << "singular values of the unpenalized solution:\n ";
    for (Eigen::Index i = 0; i < rank.singular_values.size(); ++i) {
      std::snprintf(buf, sizeof buf, " %.2e", rank.singular_values(i));
      std::cout << buf;
    }
    std::cout << '\n';
    std::snprintf(buf, sizeof buf, "gower rank (rel tol %.0e): %d", rank.tol_rel, rank.rank);
    std::cout << buf << '\n';
    std::snprintf(buf, sizeof buf, "approximate rank (rel tol %.0e): %d", rank.approx_tol_rel,
                  rank.approx_rank);
    std::cout << buf << '\n';

    const pfds::Certificate cert = pfds::cfds_certificate(problem, first.z);
    std::snprintf(buf, sizeof buf,
                  "certificate: min eigenvalue %.3e, complementarity %.3e, verdict %s",
                  cert.min_eigenvalue, cert.complementarity, cert.pass ? "pass" : "fail");
    std::cout << buf << '\n';
  } else {
    std::cout << "no unpenalized record in this run; rank and certificate skipped\n";
  }

  const pfds::SolveResult& last = results.back();
  try {
    const double residual = pfds::max_abs(pfds::gradient(problem, last.x));
    if (residual > 1e-6)
      std::cerr << "warning: final configuration is not stationary (gradient max "
                << residual << "); the bound below is not meaningful\n";
  } catch (const std::domain_error&) {
    std::cerr << "warning: final configuration has coincident points\n";
  }
  std::snprintf(buf, sizeof buf, "lambda lower bound at the final solution: %.6f",
                pfds::lambda_bound(problem, last.x));
  std::cout << buf << '\n';

  if (run.meta.p == 1) {
    try {
      const pfds::UniCheck check = pfds::check_uni(problem, last.x.col(0));
      std::snprintf(buf, sizeof buf, "one-dimensional stationarity deviation: %.3e",
                    check.max_deviation);
      std::cout << buf << '\n';
    } catch (const std::domain_error& e) {
      std::cout << "one-dimensional stationarity check skipped: " << e.what() << '\n';
    }
  }
  if (run.record.lambda_plus) {
    std::snprintf(buf, sizeof buf, "first lambda with penalty below %.1e: %.6f", run.meta.cut,
                  *run.record.lambda_plus);
    std::cout << buf << '\n';
  }
  return 0;
}

int cmd_align(const std::string& run_path, const std::string& out_path) {
  pfds::LoadedRun run = pfds::load_run(run_path);
  if (run.record.results.size() < 2) {
    std::cerr << "note: single record, nothing to align\n";
  } else {
    std::vector<pfds::Matrix> configs;
    configs.reserve(run.record.results.size());
    for (const auto& r : run.record.results) configs.push_back(r.x);
    const pfds::AlignmentSet aligned = pfds::match_configurations(configs);
    for (std::size_t k = 0; k < aligned.configs.size(); ++k)
      run.record.results[k].x = aligned.configs[k];
    char buf[96];
    std::snprintf(buf, sizeof buf, "sweeps %d final fit %.10e", aligned.iterations,
                  aligned.final_fit);
    std::cout << buf << '\n';
  }
  pfds::save_run(out_path, run.meta, run.record);
  return 0;
}

int cmd_plot(const std::string& run_path, const std::string& svg_path, const std::string& dims,
             bool index_mode) {
  const pfds::LoadedRun run = pfds::load_run(run_path);
  pfds::PlotOptions options;
  options.index_mode = index_mode;
  const auto comma = dims.find(',');
  try {
    if (comma == std::string::npos) {
      options.dim_a = std::stoi(dims);
      options.dim_b = options.dim_a + 1;
    } else {
      options.dim_a = std::stoi(dims.substr(0, comma));
      options.dim_b = std::stoi(dims.substr(comma + 1));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("bad --dims '" + dims + "': expected a,b");
  }
  pfds::write_trajectory_svg(svg_path, run, options);
  return 0;
}

int cmd_dataset(const ProblemArgs& pargs, const std::string& out) {
  ProblemArgs raw_args = pargs;
  raw_args.raw = true;  // emission keeps the data unscaled
  const pfds::MdsProblem problem = load_problem(raw_args);
  if (out.empty())
    pfds::write_matrix_csv(std::cout, problem.dissim, problem.labels);
  else
    pfds::write_matrix_csv(out, problem.dissim, problem.labels);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"penalized full-dimensional multidimensional scaling"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "one penalized solve at a fixed lambda");
  ProblemArgs solve_args;
  add_problem_options(solve, solve_args);
  int solve_p = 2, solve_itmax = 10000;
  double solve_lambda = 0.0, solve_eps = 1e-10;
  std::string solve_out_x, solve_out_z;
  solve->add_option("--p", solve_p, "target dimensionality");
  solve->add_option("--lambda", solve_lambda, "penalty weight");
  solve->add_option("--itmax", solve_itmax, "iteration limit");
  solve->add_option("--eps", solve_eps, "convergence threshold on the loss decrease");
  solve->add_option("--out-x", solve_out_x, "write the p-column solution as CSV");
  solve->add_option("--out-z", solve_out_z, "write the full configuration as CSV");

  // trajectory
  auto* traj = app.add_subcommand("trajectory", "continuation over an increasing lambda schedule");
  ProblemArgs traj_args;
  add_problem_options(traj, traj_args);
  int traj_p = 2, traj_itmax = 10000;
  double traj_cut = 1e-6, traj_eps = 1e-10;
  std::string traj_lambdas, traj_out;
  bool traj_strict = false;
  traj->add_option("--p", traj_p, "target dimensionality");
  traj->add_option("--lambdas", traj_lambdas, "lin:first:last:count | geo:start:factor:count | list:v1,v2,...")
      ->required();
  traj->add_option("--cut", traj_cut, "stop once the penalty falls below this");
  traj->add_option("--itmax", traj_itmax, "iteration limit per solve");
  traj->add_option("--eps", traj_eps, "convergence threshold per solve");
  traj->add_option("--out", traj_out, "write the run as JSON lines");
  traj->add_flag("--strict-audits", traj_strict, "exit 4 when a monotonicity audit fails");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact one-dimensional minimum by enumeration");
  ProblemArgs oracle_args;
  add_problem_options(oracle, oracle_args);
  int oracle_max_n = 10, oracle_threads = 0;
  bool oracle_census = false;
  oracle->add_option("--max-n", oracle_max_n, "refuse problems larger than this");
  oracle->add_flag("--census", oracle_census, "also count order-consistent local minima");
  oracle->add_option("--threads", oracle_threads, "worker threads (default: PFDS_THREADS or all cores)");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "rank, certificate and penalty bound for a run");
  std::string diag_run;
  diagnose->add_option("--run", diag_run, "run file from trajectory --out")->required();

  // align
  auto* align = app.add_subcommand("align", "rotate the run's solutions onto each other");
  std::string align_run, align_out;
  align->add_option("--run", align_run, "run file from trajectory --out")->required();
  align->add_option("--out", align_out, "aligned run file")->required();

  // plot
  auto* plot = app.add_subcommand("plot", "render a run as SVG");
  std::string plot_run, plot_svg, plot_dims = "1,2";
  bool plot_index = false;
  plot->add_option("--run", plot_run, "run file from trajectory --out")->required();
  plot->add_option("--svg", plot_svg, "output SVG path")->required();
  plot->add_option("--dims", plot_dims, "two 1-based dimensions, e.g. 1,2");
  plot->add_flag("--index", plot_index, "coordinate against schedule position");

  // dataset
  auto* dataset = app.add_subcommand("dataset", "emit a built-in or transformed matrix as CSV");
  ProblemArgs dataset_args;
  add_problem_options(dataset, dataset_args);
  std::string dataset_out;
  dataset->add_option("--out", dataset_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
    if (solve->parsed())
      return cmd_solve(solve_args, solve_p, solve_lambda, solve_itmax, solve_eps, solve_out_x,
                       solve_out_z);
    if (traj->parsed())
      return cmd_trajectory(traj_args, traj_p, traj_lambdas, traj_cut, traj_itmax, traj_eps,
                            traj_out, traj_strict);
    if (oracle->parsed()) return cmd_oracle(oracle_args, oracle_max_n, oracle_census, oracle_threads);
    if (diagnose->parsed()) return cmd_diagnose(diag_run);
    if (align->parsed()) return cmd_align(align_run, align_out);
    if (plot->parsed()) return cmd_plot(plot_run, plot_svg, plot_dims, plot_index);
    if (dataset->parsed()) return cmd_dataset(dataset_args, dataset_out);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
