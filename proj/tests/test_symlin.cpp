#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "impartial/error.hpp"
#include "impartial/symlin.hpp"
#include "support/oracles.hpp"

using namespace impartial;
using Catch::Approx;

namespace {

SquareSym random_symmetric(std::mt19937_64& rng, std::size_t p) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  SquareSym m(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, u(rng));
  return m;
}

double max_off_identity(const SquareSym& a, const SquareSym& b) {
  const std::size_t p = a.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += a(i, k) * b(k, j);
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("packed storage keeps both triangles identical") {
  SquareSym m(3);
  m.set(2, 0, 4.5);
  CHECK(m(0, 2) == 4.5);
  m.set(0, 2, -1.0);
  CHECK(m(2, 0) == -1.0);
  CHECK(SquareSym::identity(3)(1, 1) == 1.0);
  CHECK(SquareSym::identity(3)(1, 2) == 0.0);
  const std::vector<double> d{1, 2, 3};
  CHECK(SquareSym::diagonal(d).diag() == d);
}

TEST_CASE("from_rows rejects non-square and asymmetric input") {
  CHECK_THROWS_AS(SquareSym::from_rows({{1, 2}, {2}}), Error);
  try {
    SquareSym::from_rows({{1, 2}, {2.0000001, 1}});
    FAIL("asymmetric matrix accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
  const auto m = SquareSym::from_rows({{1, 2}, {2, 5}});
  CHECK(m.to_rows() == std::vector<std::vector<double>>{{1, 2}, {2, 5}});
}

TEST_CASE("cholesky of identity and of a 2x2 by hand") {
  const auto l = cholesky(SquareSym::identity(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(l(i, j) == (i == j ? 1.0 : 0.0));

  const auto l2 = cholesky(SquareSym::from_rows({{4, 2}, {2, 10}}));
  CHECK(l2(0, 0) == Approx(2.0));
  CHECK(l2(1, 0) == Approx(1.0));
  CHECK(l2(1, 1) == Approx(3.0));
  CHECK(l2(0, 1) == 0.0);
}

TEST_CASE("cholesky reports the failing pivot") {
  try {
    cholesky(SquareSym::from_rows({{1, 2}, {2, 1}}));
    FAIL("indefinite matrix accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 1);
  }
  try {
    cholesky(SquareSym::from_rows({{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}));
    FAIL("singular matrix accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
    CHECK(e.index() == std::optional<std::size_t>{1});
  }
  try {
    cholesky(SquareSym::from_rows({{-1, 0}, {0, 1}}));
    FAIL("negative pivot accepted");
  } catch (const Error& e) {
    CHECK(e.index() == std::optional<std::size_t>{0});
  }
}

TEST_CASE("spd_inverse of a diagonal matrix and a known 2x2") {
  const std::vector<double> d{2.0, 4.0, 0.5};
  const auto inv = spd_inverse(SquareSym::diagonal(d));
  CHECK(inv.inverse(0, 0) == Approx(0.5));
  CHECK(inv.inverse(1, 1) == Approx(0.25));
  CHECK(inv.inverse(2, 2) == Approx(2.0));
  CHECK(inv.inverse(0, 1) == 0.0);
  CHECK(inv.condition_estimate == Approx(8.0));

  // [[2,1],[1,2]]^-1 = [[2,-1],[-1,2]] / 3
  const auto inv2 = spd_inverse(SquareSym::from_rows({{2, 1}, {1, 2}}));
  CHECK(inv2.inverse(0, 0) == Approx(2.0 / 3.0));
  CHECK(inv2.inverse(0, 1) == Approx(-1.0 / 3.0));
}

TEST_CASE("spd_inverse property: m * inv(m) = I and the inverse is SPD") {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> dim(2, 10);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t p = dim(rng);
    const SquareSym m = oracle::random_spd(rng, p, 0.05);
    const SpdInverse inv = spd_inverse(m);
    if (!(inv.condition_estimate < 1e10)) continue;
    ++checked;
    CHECK(max_off_identity(m, inv.inverse) < 1e-8);
    CHECK_NOTHROW(cholesky(inv.inverse));
  }
  CHECK(checked > 400);
}

TEST_CASE("jacobi on a diagonal matrix returns sorted values and unit vectors") {
  const std::vector<double> d{3.0, -1.0, 2.0};
  const auto e = jacobi_eigen(SquareSym::diagonal(d));
  CHECK(e.values == std::vector<double>{-1.0, 2.0, 3.0});
  CHECK(std::abs(e.vectors[0][1]) == 1.0);
  CHECK(std::abs(e.vectors[1][2]) == 1.0);
  CHECK(std::abs(e.vectors[2][0]) == 1.0);
}

TEST_CASE("jacobi on a 2x2 with known spectrum") {
  const auto e = jacobi_eigen(SquareSym::from_rows({{2, 1}, {1, 2}}));
  CHECK(e.values[0] == Approx(1.0));
  CHECK(e.values[1] == Approx(3.0));
  CHECK(std::abs(e.vectors[0][0]) == Approx(std::sqrt(0.5)));
  CHECK(e.vectors[0][0] * e.vectors[0][1] < 0.0);
}

TEST_CASE("jacobi property: reconstruction and orthonormality on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t p = dim(rng);
    const SquareSym m = random_symmetric(rng, p);
    const auto e = jacobi_eigen(m);
    const double scale = m.max_abs();
    REQUIRE(e.values.size() == p);
    for (std::size_t k = 1; k < p; ++k) CHECK(e.values[k - 1] <= e.values[k]);
    double worst_rec = 0.0, worst_orth = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        double rec = 0.0, dot = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
          rec += e.vectors[k][i] * e.values[k] * e.vectors[k][j];
          dot += e.vectors[i][k] * e.vectors[j][k];
        }
        worst_rec = std::max(worst_rec, std::abs(rec - m(i, j)));
        worst_orth = std::max(worst_orth, std::abs(dot - (i == j ? 1.0 : 0.0)));
      }
    CHECK(worst_rec <= 1e-10 * scale);
    CHECK(worst_orth <= 1e-10);
  }
}

TEST_CASE("jacobi gives up after the sweep budget") {
  std::mt19937_64 rng(3);
  NumericOptions opts;
  opts.max_sweeps = 1;
  try {
    jacobi_eigen(random_symmetric(rng, 8), opts);
    FAIL("converged in one sweep");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("multiply and quadratic form") {
  const auto m = SquareSym::from_rows({{2, 1}, {1, 3}});
  const std::vector<double> x{1, -2};
  CHECK(multiply(m, x) == std::vector<double>{0.0, -5.0});
  CHECK(quadratic_form(m, x) == Approx(10.0));
}
