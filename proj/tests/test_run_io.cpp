#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pfds/datasets.hpp"
#include "pfds/plot.hpp"
#include "pfds/run_io.hpp"
#include "pfds/trajectory.hpp"

using pfds::Matrix;

namespace {

// Small but genuine run: four equidistant points over a short schedule.
pfds::LoadedRun make_run(int p = 2) {
  const auto problem = pfds::normalize(pfds::simplex(4));
  pfds::TrajectorySettings settings;
  settings.p = p;
  pfds::LoadedRun run;
  run.record = pfds::run_trajectory(problem, pfds::LambdaSchedule::parse("lin:0:0.3:4"), settings);
  run.meta.dataset = "simplex:4";
  run.meta.n = 4;
  run.meta.p = p;
  run.meta.cut = settings.cut;
  run.meta.eps = settings.eps;
  run.meta.itmax = settings.itmax;
  run.meta.normalized = true;
  run.meta.schedule = "lin:0:0.3:4";
  run.meta.labels = problem.labels;
  return run;
}

std::string save_to_string(const pfds::LoadedRun& run) {
  std::stringstream out;
  pfds::save_run(out, run.meta, run.record);
  return out.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pfds-run-io-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("run files round-trip every field bit for bit") {
  const auto run = make_run();
  std::stringstream buffer(save_to_string(run));
  const auto back = pfds::load_run(buffer, "buffer");

  REQUIRE(back.meta.dataset == run.meta.dataset);
  REQUIRE(back.meta.weights.empty());
  REQUIRE(back.meta.n == 4);
  REQUIRE(back.meta.p == 2);
  REQUIRE(back.meta.cut == run.meta.cut);
  REQUIRE(back.meta.eps == run.meta.eps);
  REQUIRE(back.meta.itmax == run.meta.itmax);
  REQUIRE(back.meta.normalized);
  REQUIRE_FALSE(back.meta.symmetrize);
  REQUIRE(back.meta.schedule == "lin:0:0.3:4");
  REQUIRE(back.meta.transform.empty());
  REQUIRE(back.meta.labels == run.meta.labels);

  REQUIRE(back.record.results.size() == run.record.results.size());
  for (std::size_t k = 0; k < run.record.results.size(); ++k) {
    const auto& a = run.record.results[k];
    const auto& b = back.record.results[k];
    REQUIRE(a.lambda == b.lambda);
    REQUIRE(a.itel == b.itel);
    REQUIRE(a.stress == b.stress);
    REQUIRE(a.penalty == b.penalty);
    REQUIRE(a.converged == b.converged);
    REQUIRE(a.max_step_increase == b.max_step_increase);
    REQUIRE((a.z - b.z).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
  }
  REQUIRE(back.record.stop_index == back.record.results.size() - 1);
  REQUIRE(back.record.cut == run.meta.cut);
  REQUIRE(back.record.lambda_plus == run.record.lambda_plus);
}

TEST_CASE("saving a run is deterministic and stable under reload") {
  const auto run = make_run();
  const std::string once = save_to_string(run);
  REQUIRE(once == save_to_string(run));

  std::stringstream buffer(once);
  const auto back = pfds::load_run(buffer, "buffer");
  REQUIRE(save_to_string(back) == once);  // load-save is the identity on bytes
}

TEST_CASE("run files travel through the filesystem") {
  const auto run = make_run();
  const auto path = temp_file("roundtrip.jsonl");
  pfds::save_run(path.string(), run.meta, run.record);
  const auto back = pfds::load_run(path.string());
  REQUIRE(back.record.results.size() == run.record.results.size());
  REQUIRE(back.meta.dataset == run.meta.dataset);

  CHECK_THROWS_WITH(pfds::load_run("/nonexistent/run.jsonl"),
                    Catch::Matchers::ContainsSubstring("cannot open file"));
  CHECK_THROWS_WITH(pfds::save_run("/nonexistent/dir/run.jsonl", run.meta, run.record),
                    Catch::Matchers::ContainsSubstring("cannot open file for writing"));
}

TEST_CASE("loading rejects files that are not runs") {
  std::stringstream empty("");
  CHECK_THROWS_WITH(pfds::load_run(empty, "buffer"),
                    Catch::Matchers::ContainsSubstring("empty run file"));

  std::stringstream not_json("hello\n");
  CHECK_THROWS_WITH(pfds::load_run(not_json, "buffer"),
                    Catch::Matchers::ContainsSubstring("bad metadata line"));

  std::stringstream wrong_kind("{\"kind\":\"something-else\"}\n");
  CHECK_THROWS_WITH(pfds::load_run(wrong_kind, "buffer"),
                    Catch::Matchers::ContainsSubstring("not a run file"));

  // valid head but a broken record line
  const auto run = make_run();
  std::string text = save_to_string(run);
  const auto head_end = text.find('\n');
  std::stringstream broken(text.substr(0, head_end + 1) + "{\"lambda\": 0.0}\n");
  CHECK_THROWS_WITH(pfds::load_run(broken, "buffer"),
                    Catch::Matchers::ContainsSubstring("bad record line"));

  std::stringstream headless(text.substr(0, head_end + 1));
  CHECK_THROWS_WITH(pfds::load_run(headless, "buffer"),
                    Catch::Matchers::ContainsSubstring("run has no records"));
}

TEST_CASE("loading rejects malformed configuration matrices") {
  const auto run = make_run();
  const std::string text = save_to_string(run);
  const auto head_end = text.find('\n');
  const std::string head = text.substr(0, head_end + 1);

  std::stringstream scalar(head +
                           "{\"lambda\":0,\"itel\":1,\"stress\":0,\"penalty\":0,\"z\":5,\"x\":5}\n");
  CHECK_THROWS_WITH(pfds::load_run(scalar, "buffer"),
                    Catch::Matchers::ContainsSubstring("malformed matrix field"));

  std::stringstream ragged(
      head + "{\"lambda\":0,\"itel\":1,\"stress\":0,\"penalty\":0,\"z\":[[1,2],[3]],\"x\":[[1]]}\n");
  CHECK_THROWS_WITH(pfds::load_run(ragged, "buffer"),
                    Catch::Matchers::ContainsSubstring("ragged matrix field"));
}

TEST_CASE("trajectory pictures contain one trace per point") {
  const auto run = make_run();
  const std::size_t m = run.record.results.size();
  const std::string svg = pfds::render_trajectory_svg(run);

  REQUIRE(svg.rfind("<svg xmlns", 0) == 0);
  REQUIRE(svg.find("</svg>\n") == svg.size() - 7);
  REQUIRE(count_occurrences(svg, "<polyline") == 4);
  REQUIRE(count_occurrences(svg, "<text") == 4);
  // a red breadcrumb at every non-final position, a blue dot at the end
  REQUIRE(count_occurrences(svg, "fill=\"blue\"") == 4);
  REQUIRE(count_occurrences(svg, "fill=\"red\"") == 4 * (m - 1));
  for (const auto& label : run.meta.labels)
    REQUIRE(svg.find(">" + label + "</text>") != std::string::npos);
  REQUIRE(svg.find("nan") == std::string::npos);
  REQUIRE(svg.find("inf") == std::string::npos);
}

TEST_CASE("rendering a run is deterministic") {
  const auto run = make_run();
  REQUIRE(pfds::render_trajectory_svg(run) == pfds::render_trajectory_svg(run));
}

TEST_CASE("index mode plots one coordinate against schedule position") {
  const auto run = make_run();
  pfds::PlotOptions options;
  options.index_mode = true;
  options.dim_a = 2;
  const std::string svg = pfds::render_trajectory_svg(run, options);
  REQUIRE(count_occurrences(svg, "<polyline") == 4);
  REQUIRE(count_occurrences(svg, "fill=\"blue\"") == 4);
  REQUIRE(count_occurrences(svg, "fill=\"red\"") == 0);  // no breadcrumbs in index mode

  options.dim_a = 3;  // beyond p = 2
  CHECK_THROWS_AS(pfds::render_trajectory_svg(run, options), std::invalid_argument);
}

TEST_CASE("one-dimensional runs always render in index mode") {
  const auto run = make_run(1);
  const std::string svg = pfds::render_trajectory_svg(run);  // default asks for a plane
  REQUIRE(count_occurrences(svg, "<polyline") == 4);
  REQUIRE(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("plane plots validate their dimension choices") {
  const auto run = make_run();
  pfds::PlotOptions options;
  options.dim_b = 3;
  CHECK_THROWS_WITH(pfds::render_trajectory_svg(run, options),
                    Catch::Matchers::ContainsSubstring("two distinct dimensions"));
  options.dim_b = 1;  // equal to dim_a
  CHECK_THROWS_AS(pfds::render_trajectory_svg(run, options), std::invalid_argument);
}

TEST_CASE("a single-record run still renders") {
  auto run = make_run();
  run.record.results.resize(1);
  run.record.stop_index = 0;
  const std::string svg = pfds::render_trajectory_svg(run);
  REQUIRE(count_occurrences(svg, "<polyline") == 0);  // nothing to trace
  REQUIRE(count_occurrences(svg, "fill=\"blue\"") == 4);
  REQUIRE(svg.find("nan") == std::string::npos);
}

TEST_CASE("pictures can be written straight to disk") {
  const auto run = make_run();
  const auto path = temp_file("plot.svg");
  pfds::write_trajectory_svg(path.string(), run);
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  REQUIRE(content.str() == pfds::render_trajectory_svg(run));
  CHECK_THROWS_AS(pfds::write_trajectory_svg("/nonexistent/dir/plot.svg", run),
                  std::invalid_argument);
}
