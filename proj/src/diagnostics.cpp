#include "impartial/diagnostics.hpp"

#include <cmath>
#include <string>

#include "impartial/error.hpp"

namespace impartial {

SquareSym partial_correlations(const SquareSym& inv_cov) {
  const std::size_t p = inv_cov.dim();
  SquareSym out(p);
  for (std::size_t i = 0; i < p; ++i) {
    out.set(i, i, 1.0);
    for (std::size_t j = 0; j < i; ++j)
      out.set(i, j, -inv_cov(i, j) / std::sqrt(inv_cov(i, i) * inv_cov(j, j)));
  }
  return out;
}

std::vector<double> r_squared_all(const SquareSym& inv_corr, const NumericOptions& opts) {
  std::vector<double> out(inv_corr.dim());
  for (std::size_t j = 0; j < inv_corr.dim(); ++j) {
    const double d = inv_corr(j, j);
    if (!(d >= 1.0 - opts.r_squared_slack)) {
      throw Error(ErrorKind::NumericalInconsistency,
                  "inverse correlation diagonal " + std::to_string(d) + " below 1 at " +
                      std::to_string(j),
                  j);
    }
    out[j] = 1.0 - 1.0 / d;
  }
  return out;
}

ResidualStats residual_stats(const ImpartialFit& f, const MomentSummary& s) {
  if (f.exact) {
    throw Error(ErrorKind::ExactFit, "exact relation has zero residuals");
  }
  const std::size_t p = f.coefficients.size();
  if (p != s.dim()) {
    throw Error(ErrorKind::InvalidArgument, "fit and summary disagree in dimension");
  }
  const double q = quadratic_form(s.cov(), f.coefficients);
  ResidualStats out;
  out.residual_variance.resize(p);
  out.coeff_times_residual_sd.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double b = f.coefficients[j];
    if (b == 0.0) {
      throw Error(ErrorKind::ZeroCoefficient,
                  "coefficient of '" + s.names()[j] + "' is zero", j, s.names()[j]);
    }
    out.residual_variance[j] = q / (b * b);
    out.coeff_times_residual_sd[j] = std::abs(b) * std::sqrt(out.residual_variance[j]);
  }
  return out;
}

double reliability(double var_true, double var_observed) {
  if (!(var_observed > 0.0) || !(var_true >= 0.0) || !(var_true <= var_observed)) {
    throw Error(ErrorKind::OutOfRange,
                "reliability needs 0 <= var_true <= var_observed and var_observed > 0");
  }
  return var_true / var_observed;
}

GreenallReport greenall_report(const MomentSummary& s, std::size_t i, std::size_t j,
                               const NumericOptions& opts) {
  const LineFit line = gmfr_bivariate(s, i, j, opts);
  const double vy = s.cov()(i, i);
  const double vx = s.cov()(j, j);
  const double cxy = s.cov()(i, j);
  const double r = s.corr()(i, j);
  const double unexplained = 1.0 - r * r;
  if (unexplained <= opts.singular_ratio) return {};

  const double b = line.slope;
  // Per-observation sums of squares about lines through the means.
  const double sse_y = vy - 2.0 * b * cxy + b * b * vx;
  const double sse_x = vx - 2.0 * cxy / b + vy / (b * b);
  return {sse_y / (vy * unexplained), sse_x / (vx * unexplained)};
}

DiagnosticsReport diagnose(const ImpartialFit& f, const MomentSummary& s,
                           const NumericOptions& opts) {
  if (f.exact) {
    throw Error(ErrorKind::ExactFit, "exact relation: diagnostics are degenerate");
  }
  const SquareSym inv_cov = spd_inverse(s.cov(), opts).inverse;
  const SquareSym inv_corr = spd_inverse(s.corr(), opts).inverse;
  const ResidualStats res = residual_stats(f, s);
  DiagnosticsReport report;
  report.partial_corr = partial_correlations(inv_cov);
  report.r_squared = r_squared_all(inv_corr, opts);
  report.residual_variance = res.residual_variance;
  report.coeff_times_residual_sd = res.coeff_times_residual_sd;
  report.sign_violations = sign_violations(inv_cov, f.coefficients);
  return report;
}

}  // namespace impartial
