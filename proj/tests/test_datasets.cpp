#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "pfds/datasets.hpp"

using pfds::Matrix;
using pfds::TransformKind;

namespace {

// Standard normal distribution function, independently via the
// complementary error function.
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pfds-dataset-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("regular simplex pins every pair at distance one") {
  const auto problem = pfds::simplex(5);
  REQUIRE(problem.n() == 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      REQUIRE(problem.dissim(i, j) == (i == j ? 0.0 : 1.0));
      REQUIRE(problem.weights(i, j) == (i == j ? 0.0 : 1.0));
    }
  REQUIRE(problem.labels.front() == "1");
  REQUIRE(problem.labels.back() == "5");
  CHECK_THROWS_AS(pfds::simplex(2), std::invalid_argument);
}

TEST_CASE("party preference table carries its published entries") {
  const auto problem = pfds::parties();
  REQUIRE(problem.n() == 9);
  REQUIRE(problem.labels == std::vector<std::string>{"KVP", "PvdA", "VVD", "ARP", "CHU", "CPN",
                                                     "PSP", "BP", "D66"});
  // spot values: KVP-PvdA, ARP-CHU (the closest pair), CPN-PSP
  REQUIRE(problem.dissim(0, 1) == 0.209);
  REQUIRE(problem.dissim(3, 4) == 0.119);
  REQUIRE(problem.dissim(5, 6) == 0.152);
  REQUIRE(problem.dissim == problem.dissim.transpose().eval());
  double min_off = 1.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < i; ++j) min_off = std::min(min_off, problem.dissim(i, j));
  REQUIRE(min_off == 0.119);
  REQUIRE(problem.weights(2, 7) == 1.0);
}

TEST_CASE("inverse normal distribution function hits table values") {
  REQUIRE(pfds::inverse_normal_cdf(0.5) == 0.0);
  REQUIRE(pfds::inverse_normal_cdf(0.975) == Catch::Approx(1.959964).margin(1e-6));
  REQUIRE(pfds::inverse_normal_cdf(0.025) == Catch::Approx(-1.959964).margin(1e-6));
  REQUIRE(pfds::inverse_normal_cdf(normal_cdf(1.0)) == Catch::Approx(1.0).margin(1e-9));
  // symmetry about one half
  for (double p : {0.01, 0.2, 0.37, 0.49})
    REQUIRE(pfds::inverse_normal_cdf(1.0 - p) ==
            Catch::Approx(-pfds::inverse_normal_cdf(p)).margin(1e-12));
  CHECK_THROWS_AS(pfds::inverse_normal_cdf(0.0), std::domain_error);
  CHECK_THROWS_AS(pfds::inverse_normal_cdf(1.0), std::domain_error);
  CHECK_THROWS_AS(pfds::inverse_normal_cdf(-0.5), std::domain_error);
  CHECK_THROWS_AS(pfds::inverse_normal_cdf(1.5), std::domain_error);
}

TEST_CASE("inverse normal distribution function round-trips through erfc") {
  // central grid with absolute tolerance, deep tails with relative
  for (double p = 0.001; p < 1.0; p += 0.001)
    REQUIRE(normal_cdf(pfds::inverse_normal_cdf(p)) == Catch::Approx(p).margin(1e-9));
  for (double p : {1e-10, 1e-7, 1.0 - 1e-7})
    REQUIRE(normal_cdf(pfds::inverse_normal_cdf(p)) == Catch::Approx(p).epsilon(1e-6));
}

TEST_CASE("similarity transforms produce the expected dissimilarities") {
  Matrix s(3, 3);
  s << 1.0, 0.8, 0.3, 0.8, 1.0, 0.5, 0.3, 0.5, 1.0;

  const Matrix one_minus = pfds::apply_transform(s, TransformKind::OneMinus);
  REQUIRE(one_minus(0, 1) == Catch::Approx(0.2).margin(1e-15));
  REQUIRE(one_minus(0, 0) == 0.0);  // diagonal forced to zero despite s = 1

  const Matrix cubed = pfds::apply_transform(s, TransformKind::OneMinusCubed);
  REQUIRE(cubed(0, 2) == Catch::Approx(0.343).margin(1e-15));
  REQUIRE(cubed(1, 2) == Catch::Approx(0.125).margin(1e-15));

  const Matrix neglog = pfds::apply_transform(s, TransformKind::NegLog);
  REQUIRE(neglog(0, 1) == Catch::Approx(-std::log(0.8)).margin(1e-15));

  Matrix ratings(2, 2);
  ratings << 0.0, 2.5, 2.5, 0.0;
  REQUIRE(pfds::apply_transform(ratings, TransformKind::SevenMinus)(0, 1) == 4.5);
  REQUIRE(pfds::apply_transform(ratings, TransformKind::SubtractConstant, 1.5)(0, 1) == 1.0);

  Matrix probs(2, 2);
  probs << 0.5, 0.975, 0.975, 0.5;
  REQUIRE(pfds::apply_transform(probs, TransformKind::AbsNormQuantile)(0, 1) ==
          Catch::Approx(1.959964).margin(1e-6));
  // the absolute value folds both tails to the same dissimilarity
  Matrix low(2, 2);
  low << 0.5, 0.025, 0.025, 0.5;
  REQUIRE(pfds::apply_transform(low, TransformKind::AbsNormQuantile)(0, 1) ==
          Catch::Approx(1.959964).margin(1e-6));
}

TEST_CASE("transforms report the offending entry on bad input") {
  Matrix s(2, 2);
  s << 1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_WITH(pfds::apply_transform(s, TransformKind::NegLog),
                    Catch::Matchers::ContainsSubstring("(1,2)"));
  s(0, 1) = s(1, 0) = 1.5;
  CHECK_THROWS_WITH(pfds::apply_transform(s, TransformKind::AbsNormQuantile),
                    Catch::Matchers::ContainsSubstring("abs-norm-quantile"));
  CHECK_THROWS_WITH(pfds::apply_transform(s, TransformKind::OneMinus),
                    Catch::Matchers::ContainsSubstring("negative dissimilarity at (1,2)"));
  Matrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(pfds::apply_transform(rect, TransformKind::OneMinus), std::invalid_argument);
}

TEST_CASE("transform names round-trip") {
  for (TransformKind kind :
       {TransformKind::OneMinus, TransformKind::OneMinusCubed, TransformKind::NegLog,
        TransformKind::SevenMinus, TransformKind::AbsNormQuantile})
    REQUIRE(pfds::transform_from_name(pfds::transform_name(kind)) == kind);
  const auto [kind, c] = pfds::parse_transform_spec(pfds::make_transform_spec(
      TransformKind::SubtractConstant, 0.3));
  REQUIRE(kind == TransformKind::SubtractConstant);
  REQUIRE(c == 0.3);
  REQUIRE(pfds::parse_transform_spec("one-minus").first == TransformKind::OneMinus);
  CHECK_THROWS_AS(pfds::transform_from_name("triple-flip"), std::invalid_argument);
  CHECK_THROWS_AS(pfds::parse_transform_spec("subtract:abc"), std::invalid_argument);
}

TEST_CASE("matrix csv writing and reading round-trips bit for bit") {
  const Matrix m = (oracles::random_problem(5, 99, true).dissim * M_PI).eval();
  const std::vector<std::string> labels = {"alpha", "beta", "gamma", "delta", "epsilon"};

  std::stringstream with_labels;
  pfds::write_matrix_csv(with_labels, m, labels);
  const auto back = pfds::read_matrix_csv(with_labels, "buffer");
  REQUIRE(back.labels == labels);
  REQUIRE((back.values - m).cwiseAbs().maxCoeff() == 0.0);

  std::stringstream bare;
  pfds::write_matrix_csv(bare, m);
  const auto plain = pfds::read_matrix_csv(bare, "buffer");
  REQUIRE(plain.labels.empty());
  REQUIRE((plain.values - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("csv reader detects header rows and label columns independently") {
  std::stringstream header_only("a,b\n0,1\n1,0\n");
  const auto h = pfds::read_matrix_csv(header_only, "buffer");
  REQUIRE(h.labels == std::vector<std::string>{"a", "b"});
  REQUIRE(h.values(0, 1) == 1.0);

  std::stringstream labels_only("a,0,1\nb,1,0\n");
  const auto l = pfds::read_matrix_csv(labels_only, "buffer");
  REQUIRE(l.labels == std::vector<std::string>{"a", "b"});
  REQUIRE(l.values(1, 0) == 1.0);

  std::stringstream blank_lines("0,1\n\n  \n1,0\n");
  REQUIRE(pfds::read_matrix_csv(blank_lines, "buffer").values(0, 1) == 1.0);
}

TEST_CASE("csv reader rejects malformed matrices") {
  std::stringstream empty("");
  CHECK_THROWS_WITH(pfds::read_matrix_csv(empty, "buffer"),
                    Catch::Matchers::ContainsSubstring("empty matrix file"));

  std::stringstream nonsquare("0,1,2\n1,0,2\n");
  CHECK_THROWS_WITH(pfds::read_matrix_csv(nonsquare, "buffer"),
                    Catch::Matchers::ContainsSubstring("not square"));

  std::stringstream ragged("0,1\n1\n");
  CHECK_THROWS_WITH(pfds::read_matrix_csv(ragged, "buffer"),
                    Catch::Matchers::ContainsSubstring("row 2 has 1 values, expected 2"));

  std::stringstream nonnumeric("0,1\n1,zap\n");
  CHECK_THROWS_WITH(pfds::read_matrix_csv(nonnumeric, "buffer"),
                    Catch::Matchers::ContainsSubstring("non-numeric cell 'zap'"));

  std::stringstream negative("0,-1\n-1,0\n");
  CHECK_THROWS_WITH(pfds::read_matrix_csv(negative, "buffer"),
                    Catch::Matchers::ContainsSubstring("negative value"));

  std::stringstream header_no_data("a,b\n");
  CHECK_THROWS_WITH(pfds::read_matrix_csv(header_no_data, "buffer"),
                    Catch::Matchers::ContainsSubstring("no data rows"));
}

TEST_CASE("csv reader treats asymmetry by size") {
  // large gaps are an error outright
  std::stringstream coarse("0,1\n2,0\n");
  CHECK_THROWS_WITH(pfds::read_matrix_csv(coarse, "buffer", true),
                    Catch::Matchers::ContainsSubstring("asymmetric at (2,1)"));
  // tiny gaps are an error by default and averaged when symmetrize is set
  const std::string tiny = "0,1.0000000000005,2\n1,0,3\n2,3,0\n";
  std::stringstream strict(tiny);
  CHECK_THROWS_WITH(pfds::read_matrix_csv(strict, "buffer"),
                    Catch::Matchers::ContainsSubstring("pass symmetrize"));
  std::stringstream averaged(tiny);
  const auto fixed = pfds::read_matrix_csv(averaged, "buffer", true);
  REQUIRE(fixed.values(0, 1) == fixed.values(1, 0));
  REQUIRE(fixed.values(0, 1) == Catch::Approx(1.00000000000025).epsilon(1e-15));
}

TEST_CASE("problems assemble from dissimilarity and weight files") {
  const Matrix d = oracles::random_problem(4, 7, false).dissim;
  Matrix w = Matrix::Ones(4, 4) * 2.0;
  w.diagonal().setZero();
  const auto dpath = temp_file("dissim.csv");
  const auto wpath = temp_file("weights.csv");
  pfds::write_matrix_csv(dpath.string(), d, {"p", "q", "r", "s"});
  pfds::write_matrix_csv(wpath.string(), w);

  const auto with_weights = pfds::read_problem(dpath.string(), wpath.string());
  REQUIRE(with_weights.labels == std::vector<std::string>{"p", "q", "r", "s"});
  REQUIRE((with_weights.dissim - d).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(with_weights.weights(0, 1) == 2.0);

  const auto defaulted = pfds::read_problem(dpath.string());
  REQUIRE(defaulted.weights(0, 1) == 1.0);
  REQUIRE(defaulted.weights(2, 2) == 0.0);

  CHECK_THROWS_WITH(pfds::read_problem("/nonexistent/nowhere.csv"),
                    Catch::Matchers::ContainsSubstring("cannot open file"));
}
