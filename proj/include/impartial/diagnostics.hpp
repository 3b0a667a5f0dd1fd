#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "impartial/datastats.hpp"
#include "impartial/estimators.hpp"
#include "impartial/symlin.hpp"

namespace impartial {

struct ResidualStats {
  /// Residual variance of the fitted hyperplane measured along each axis.
  std::vector<double> residual_variance;
  /// |b_j| * residual sd_j; all equal to sqrt(b' K b).
  std::vector<double> coeff_times_residual_sd;
};

struct GreenallReport {
  /// SSE of the geometric-mean line over the OLS minimum, vertical direction.
  double inflation_y = 1.0;
  /// Same ratio measured horizontally.
  double inflation_x = 1.0;
};

struct DiagnosticsReport {
  SquareSym partial_corr{1};
  std::vector<double> r_squared;
  std::vector<double> residual_variance;
  std::vector<double> coeff_times_residual_sd;
  std::vector<std::pair<std::size_t, std::size_t>> sign_violations;
};

/// -c_ij / sqrt(c_ii c_jj) off the diagonal, 1 on it.
SquareSym partial_correlations(const SquareSym& inv_cov);

/// R_j^2 = 1 - 1 / (R^-1)_jj. Throws NumericalInconsistency when a diagonal
/// falls below 1 by more than opts.r_squared_slack.
std::vector<double> r_squared_all(const SquareSym& inv_corr, const NumericOptions& opts = {});

/// Rejects exact fits (ExactFit) and zero coefficients (ZeroCoefficient).
ResidualStats residual_stats(const ImpartialFit& f, const MomentSummary& s);

/// var_true / var_observed; OutOfRange unless 0 <= var_true <= var_observed
/// and var_observed > 0.
double reliability(double var_true, double var_observed);

/// Inflation of each directional sum of squares when the geometric-mean line
/// of i (vertical) against j (horizontal) replaces the matching OLS line.
/// A perfectly correlated pair reports the limit (1, 1).
GreenallReport greenall_report(const MomentSummary& s, std::size_t i, std::size_t j,
                               const NumericOptions& opts = {});

/// Everything above for a regular impartial fit. Throws ExactFit for exact fits.
DiagnosticsReport diagnose(const ImpartialFit& f, const MomentSummary& s,
                           const NumericOptions& opts = {});

}  // namespace impartial
