#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "impartial/datastats.hpp"
#include "impartial/symlin.hpp"

namespace impartial {

/// Symmetric-form relation sum_j coefficients[j] * x_j = constant.
///
/// On the regular path coefficients[j]^2 == precision_diag[j], the diagonal
/// of the inverse covariance matrix. Signs come from row `reference` of that
/// inverse (the row with the largest diagonal), with coefficients[reference]
/// positive. When the covariance is singular with a one-dimensional null
/// space the relation is exact: coefficients span that null space, scaled to
/// unit length in standardized units, and precision_diag is +inf.
struct ImpartialFit {
  std::vector<double> coefficients;
  double constant = 0.0;
  std::size_t reference = 0;
  bool sign_consistent = true;
  bool exact = false;
  std::vector<double> precision_diag;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares regression of `dependent` on every other variable.
struct OlsFit {
  std::size_t dependent = 0;
  std::vector<std::size_t> regressors;
  std::vector<double> slopes;  // parallel to regressors
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_variance = 0.0;

  /// Slope on variable `var`; throws InvalidArgument for the dependent.
  double coefficient(std::size_t var) const;
};

/// normal . x = constant, |normal| = 1, first non-zero component positive.
struct HyperplaneFit {
  std::vector<double> normal;
  double constant = 0.0;
};

/// A symmetric relation rearranged for one variable:
/// x_target = intercept + sum_k slopes[k] * x_{others[k]}.
struct SolvedForm {
  std::size_t target = 0;
  std::vector<std::size_t> others;
  std::vector<double> slopes;
  double intercept = 0.0;
};

ImpartialFit impartial_fit(const MomentSummary& s, const NumericOptions& opts = {});

/// Geometric-mean line of variable i against variable j.
LineFit gmfr_bivariate(const MomentSummary& s, std::size_t i, std::size_t j,
                       const NumericOptions& opts = {});

/// Slopes come from the inverse covariance matrix. When that matrix is
/// singular because a variable is an exact linear function of the others, each
/// regression is solved from its regressors' normal equations instead (R^2 = 1
/// for the exactly determined variable); NotPositiveDefinite is raised only if
/// the regressors themselves are collinear.
std::vector<OlsFit> ols_all(const MomentSummary& s, const NumericOptions& opts = {});
OlsFit ols_single(const MomentSummary& s, std::size_t dependent,
                  const NumericOptions& opts = {});

HyperplaneFit orthogonal_fit(const MomentSummary& s, const NumericOptions& opts = {});

/// Value of x_target on the fitted hyperplane given every other variable,
/// `others` listed in variable order with the target skipped.
double solve_for(const ImpartialFit& f, std::size_t target, std::span<const double> others);

/// Partial rate of change of x_i with x_j on the fitted hyperplane.
double pairwise_slope(const ImpartialFit& f, std::size_t i, std::size_t j);

SolvedForm solved_form(std::span<const double> coefficients, double constant,
                       std::size_t target);
inline SolvedForm solved_form(const ImpartialFit& f, std::size_t target) {
  return solved_form(f.coefficients, f.constant, target);
}
inline SolvedForm solved_form(const HyperplaneFit& f, std::size_t target) {
  return solved_form(f.normal, f.constant, target);
}

/// Pairs (i < j) whose precision-matrix sign disagrees with the product of
/// the coefficient signs.
std::vector<std::pair<std::size_t, std::size_t>> sign_violations(
    const SquareSym& precision, std::span<const double> coefficients);

}  // namespace impartial
