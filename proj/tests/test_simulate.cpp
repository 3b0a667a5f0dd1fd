#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "impartial/error.hpp"
#include "impartial/estimators.hpp"
#include "impartial/simulate.hpp"
#include "support/oracles.hpp"

using namespace impartial;
using Catch::Approx;

namespace {

ErrorKind error_kind(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected impartial::Error");
  throw;
}

SimConfig noiseless() {
  SimConfig cfg = default_lattice_config();
  cfg.noise_sd = {0.0, 0.0, 0.0};
  return cfg;
}

}  // namespace

TEST_CASE("default lattice layout") {
  const SimConfig cfg = default_lattice_config();
  const SimulatedData data = generate_lattice(cfg);
  const Dataset& t = data.truth;
  CHECK(t.rows() == 36);
  CHECK(t.names() == std::vector<std::string>{"x1", "x2", "y"});
  // First x varies slowest.
  CHECK(t.at(0, 0) == t.at(5, 0));
  CHECK(t.at(0, 0) != t.at(6, 0));
  CHECK(t.at(0, 1) != t.at(1, 1));
  const MomentSummary s = summarize(t);
  CHECK(s.means()[0] == Approx(0.9).epsilon(1e-12));
  CHECK(s.means()[1] == Approx(0.9).epsilon(1e-12));
  CHECK(s.cov()(0, 0) == Approx(8.67).epsilon(1e-12));
  CHECK(s.cov()(0, 1) == Approx(0.0).margin(1e-12));
  for (std::size_t i = 0; i < 36; ++i)
    CHECK(t.at(i, 2) == Approx(1.0 + 2.0 * t.at(i, 0) + 3.0 * t.at(i, 1)).epsilon(1e-14));
}

TEST_CASE("zero noise reproduces the truth and the exact relation") {
  const SimulatedData data = generate_lattice(noiseless(), 5);
  CHECK(data.observed == data.truth);
  const ImpartialFit f = impartial_fit(summarize(data.observed));
  CHECK(f.exact);
  const SolvedForm y = solved_form(f, 2);
  CHECK(y.slopes[0] == Approx(2.0).epsilon(1e-9));
  CHECK(y.slopes[1] == Approx(3.0).epsilon(1e-9));
  CHECK(y.intercept == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("noise is determined by seed and replicate") {
  const SimConfig cfg = default_lattice_config();
  CHECK(generate_lattice(cfg, 3).observed == generate_lattice(cfg, 3).observed);
  CHECK_FALSE(generate_lattice(cfg, 3).observed == generate_lattice(cfg, 4).observed);
  SimConfig other = cfg;
  other.seed = 2;
  CHECK_FALSE(generate_lattice(cfg, 0).observed == generate_lattice(other, 0).observed);
}

TEST_CASE("lattice covariance approaches its population value") {
  // Population: lattice variance 8.67 per x, unit noise everywhere.
  const double v = 8.67;
  const std::vector<std::vector<double>> expected{
      {v + 1, 0, 2 * v}, {0, v + 1, 3 * v}, {2 * v, 3 * v, 13 * v + 1}};
  const SimConfig cfg = default_lattice_config();
  const std::size_t reps = 2000;
  std::vector<std::vector<double>> mean(3, std::vector<double>(3, 0.0));
  for (std::size_t r = 0; r < reps; ++r) {
    const MomentSummary s = summarize(generate_lattice(cfg, r).observed);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) mean[i][j] += s.cov()(i, j) / reps;
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(mean[i][j] == Approx(expected[i][j]).margin(0.15));
  CHECK(mean[2][2] == Approx(113.7).margin(0.5));
}

TEST_CASE("monte carlo with zero noise reports the true law exactly") {
  SimConfig cfg = noiseless();
  cfg.replicates = 20;
  const MonteCarloResult mc = monte_carlo(cfg, 2);
  REQUIRE(mc.estimators.size() == 3);
  for (const EstimatorSummary& e : mc.estimators) {
    CHECK(e.failures == 0);
    CHECK(e.slopes[0].mean == Approx(2.0).epsilon(1e-9));
    CHECK(e.slopes[1].mean == Approx(3.0).epsilon(1e-9));
    CHECK(e.slopes[0].sd == Approx(0.0).margin(1e-9));
    CHECK(e.intercept.mean == Approx(1.0).epsilon(1e-9));
  }
  for (double rel : mc.mean_reliability) CHECK(rel == 1.0);
  CHECK_THROWS_AS(mc.estimator("median"), Error);
}

TEST_CASE("monte carlo does not depend on the thread count") {
  SimConfig cfg = default_lattice_config();
  cfg.replicates = 64;
  const MonteCarloResult a = monte_carlo(cfg, 1);
  const MonteCarloResult b = monte_carlo(cfg, 5);
  for (std::size_t e = 0; e < 3; ++e)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(a.estimators[e].slopes[j].mean == b.estimators[e].slopes[j].mean);
      CHECK(a.estimators[e].slopes[j].sd == b.estimators[e].slopes[j].sd);
    }
  CHECK(a.mean_reliability == b.mean_reliability);
}

TEST_CASE("x noise dilutes least squares but not the geometric-mean slope") {
  // One x on 30 levels; y noise is beta times x noise so both variables keep
  // equal reliability, the condition under which the geometric mean is
  // consistent.
  SimConfig cfg;
  std::vector<double> levels;
  for (int k = 0; k < 30; ++k) levels.push_back(0.2 * k);
  cfg.levels = {levels};
  cfg.beta = {2.0};
  cfg.constant = 1.0;
  cfg.seed = 11;
  cfg.replicates = 1000;
  std::vector<double> ols, gm;
  for (double sd : {0.5, 1.0, 1.5}) {
    cfg.noise_sd = {sd, 2.0 * sd};
    const MonteCarloResult mc = monte_carlo(cfg, 4);
    ols.push_back(mc.estimator("ols").slopes[0].mean);
    gm.push_back(mc.estimator("impartial").slopes[0].mean);
  }
  CHECK(ols[0] > ols[1]);
  CHECK(ols[1] > ols[2]);
  CHECK(ols[2] < 1.5);
  for (double g : gm) CHECK(g == Approx(2.0).margin(0.1));
  const double spread = std::max({gm[0], gm[1], gm[2]}) - std::min({gm[0], gm[1], gm[2]});
  CHECK(spread < 0.1 * (ols[0] - ols[2]));
}

TEST_CASE("config documents round-trip and are validated") {
  const SimConfig cfg = default_lattice_config();
  const SimConfig back = parse_sim_config(to_json(cfg));
  CHECK(back.levels == cfg.levels);
  CHECK(back.beta == cfg.beta);
  CHECK(back.constant == cfg.constant);
  CHECK(back.noise_sd == cfg.noise_sd);
  CHECK(back.seed == cfg.seed);
  CHECK(back.replicates == cfg.replicates);
  CHECK(back.names == cfg.names);

  const SimConfig shared = parse_sim_config(
      R"({"levels": [0, 1, 2], "beta": [1, -1], "constant": 0, "noise_sd": 0.5})");
  CHECK(shared.levels.size() == 2);
  CHECK(shared.levels[1] == std::vector<double>{0, 1, 2});
  CHECK(shared.noise_sd == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(shared.names == std::vector<std::string>{"x1", "x2", "y"});

  const char* bad[] = {
      R"({"levels": [0, 1], "beta": [1], "constant": 0, "noise_sd": 1, "extra": 1})",
      R"({"levels": [0, 1], "beta": [1], "noise_sd": 1})",
      R"({"levels": [1, 1], "beta": [1], "constant": 0, "noise_sd": 1})",
      R"({"levels": [0, 1], "beta": [1], "constant": 0, "noise_sd": -1})",
      R"({"levels": [0, 1], "beta": [1], "constant": 0, "noise_sd": [1, 1, 1]})",
      R"({"levels": [0, 1], "beta": [1], "constant": 0, "noise_sd": 1, "replicates": 0})",
      R"({"levels": [[0, 1]], "beta": [1, 2], "constant": 0, "noise_sd": 1})",
      R"({"levels": [0, 1], "beta": [1], "constant": "zero", "noise_sd": 1})",
      R"([1, 2])",
      R"({not json)",
  };
  for (const char* doc : bad) {
    INFO(doc);
    CHECK(error_kind([&] { parse_sim_config(doc); }) == ErrorKind::InvalidConfig);
  }
}
