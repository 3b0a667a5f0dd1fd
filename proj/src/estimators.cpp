#include "impartial/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "impartial/error.hpp"

namespace impartial {

namespace {

void check_index(const MomentSummary& s, std::size_t i) {
  if (i >= s.dim()) {
    throw Error(ErrorKind::InvalidArgument,
                "variable index " + std::to_string(i) + " out of range", i);
  }
}

void require_variance(const MomentSummary& s, std::size_t j) {
  if (s.zero_variance(j)) {
    throw Error(ErrorKind::ZeroVariance, "zero variance in column '" + s.names()[j] + "'", j,
                s.names()[j]);
  }
}

void require_all_variances(const MomentSummary& s) {
  for (std::size_t j = 0; j < s.dim(); ++j) require_variance(s, j);
}

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Lowest index wins ties.
// Lowest index whose value is within `tie` (relative) of the maximum, so
// rounding noise cannot decide between equal scores.
std::size_t argmax(std::span<const double> v, double tie) {
  double top = v[0];
  for (double x : v) top = std::max(top, x);
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] >= top - tie * std::abs(top)) return j;
  return 0;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

ImpartialFit exact_fit(const MomentSummary& s, const NumericOptions& opts) {
  const std::size_t p = s.dim();
  const EigenDecomposition eig = jacobi_eigen(s.corr(), opts);
  const double largest = eig.values.back();
  std::size_t null_dim = 0;
  for (double v : eig.values)
    if (v < opts.singular_ratio * largest) ++null_dim;
  if (null_dim == 0) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "covariance matrix is numerically indefinite");
  }
  if (null_dim > 1) {
    throw Error(ErrorKind::DegenerateNullSpace,
                "covariance has a " + std::to_string(null_dim) +
                    "-dimensional null space; no unique linear relation",
                null_dim);
  }
  const std::vector<double>& u = eig.vectors.front();
  std::vector<double> magnitude(p);
  for (std::size_t j = 0; j < p; ++j) magnitude[j] = std::abs(u[j]);
  const std::size_t k = argmax(magnitude, opts.reference_tie);
  const double flip = sign_of(u[k]);

  ImpartialFit f;
  f.exact = true;
  f.reference = k;
  f.sign_consistent = true;
  f.coefficients.resize(p);
  for (std::size_t j = 0; j < p; ++j) f.coefficients[j] = flip * u[j] / s.stds()[j];
  f.precision_diag.assign(p, std::numeric_limits<double>::infinity());
  f.constant = dot(f.coefficients, s.means());
  return f;
}

OlsFit ols_from_inverses(const MomentSummary& s, const SquareSym& inv_cov,
                         const SquareSym& inv_corr, std::size_t dep) {
  const std::size_t p = s.dim();
  OlsFit fit;
  fit.dependent = dep;
  const double cjj = inv_cov(dep, dep);
  double intercept = s.means()[dep];
  for (std::size_t i = 0; i < p; ++i) {
    if (i == dep) continue;
    const double slope = -inv_cov(dep, i) / cjj;
    fit.regressors.push_back(i);
    fit.slopes.push_back(slope);
    intercept -= slope * s.means()[i];
  }
  fit.intercept = intercept;
  fit.r_squared = 1.0 - 1.0 / inv_corr(dep, dep);
  fit.residual_variance = 1.0 / cjj;
  return fit;
}

// Least squares from the regressors' own normal equations. Used when the full
// covariance is singular because the dependent variable is an exact linear
// function of the regressors.
OlsFit ols_from_regressors(const MomentSummary& s, std::size_t dep, const NumericOptions& opts) {
  const std::size_t p = s.dim();
  std::vector<std::size_t> reg;
  for (std::size_t i = 0; i < p; ++i)
    if (i != dep) reg.push_back(i);
  const std::size_t m = reg.size();
  SquareSym kxx(m);
  std::vector<double> kxy(m);
  for (std::size_t a = 0; a < m; ++a) {
    kxy[a] = s.cov()(reg[a], dep);
    for (std::size_t b = 0; b <= a; ++b) kxx.set(a, b, s.cov()(reg[a], reg[b]));
  }
  const LowerTriangular l = cholesky(kxx, opts);
  std::vector<double> z(m), beta(m);
  for (std::size_t a = 0; a < m; ++a) {
    double v = kxy[a];
    for (std::size_t b = 0; b < a; ++b) v -= l(a, b) * z[b];
    z[a] = v / l(a, a);
  }
  for (std::size_t a = m; a-- > 0;) {
    double v = z[a];
    for (std::size_t b = a + 1; b < m; ++b) v -= l(b, a) * beta[b];
    beta[a] = v / l(a, a);
  }

  OlsFit fit;
  fit.dependent = dep;
  fit.regressors = reg;
  fit.slopes = beta;
  fit.intercept = s.means()[dep];
  for (std::size_t a = 0; a < m; ++a) fit.intercept -= beta[a] * s.means()[reg[a]];
  const double var = s.cov()(dep, dep);
  fit.residual_variance = std::max(0.0, var - dot(beta, kxy));
  fit.r_squared = 1.0 - fit.residual_variance / var;
  return fit;
}

}  // namespace

double OlsFit::coefficient(std::size_t var) const {
  const auto it = std::find(regressors.begin(), regressors.end(), var);
  if (it == regressors.end()) {
    throw Error(ErrorKind::InvalidArgument,
                "variable " + std::to_string(var) + " is not a regressor", var);
  }
  return slopes[static_cast<std::size_t>(it - regressors.begin())];
}

std::vector<std::pair<std::size_t, std::size_t>> sign_violations(
    const SquareSym& precision, std::span<const double> coefficients) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t p = precision.dim();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double c = precision(i, j);
      const double expected = sign_of(coefficients[i]) * sign_of(coefficients[j]);
      if (c == 0.0 || sign_of(c) != expected) out.emplace_back(i, j);
    }
  }
  return out;
}

ImpartialFit impartial_fit(const MomentSummary& s, const NumericOptions& opts) {
  const std::size_t p = s.dim();
  if (p < 2) throw Error(ErrorKind::TooFewColumns, "need at least 2 variables");
  if (s.n() <= p) {
    throw Error(ErrorKind::TooFewObservations,
                "need more observations than variables (n = " + std::to_string(s.n()) +
                    ", p = " + std::to_string(p) + ")");
  }
  require_all_variances(s);

  SquareSym precision(p);
  try {
    precision = spd_inverse(s.cov(), opts).inverse;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
    return exact_fit(s, opts);
  }

  // c_jj * var_j = 1 / (1 - R_j^2): unit-free, so the reference row does not
  // move when a column is rescaled.
  std::vector<double> determination(p);
  for (std::size_t j = 0; j < p; ++j) {
    determination[j] = precision(j, j) * s.cov()(j, j);
    if (!(1.0 / determination[j] >= opts.singular_ratio)) return exact_fit(s, opts);
  }
  const std::size_t k = argmax(determination, opts.reference_tie);

  ImpartialFit f;
  f.reference = k;
  f.precision_diag = precision.diag();
  f.coefficients.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double sign = j == k ? 1.0 : sign_of(precision(k, j));
    f.coefficients[j] = sign * std::sqrt(precision(j, j));
  }
  f.sign_consistent = sign_violations(precision, f.coefficients).empty();
  f.constant = dot(f.coefficients, s.means());
  return f;
}

LineFit gmfr_bivariate(const MomentSummary& s, std::size_t i, std::size_t j,
                       const NumericOptions& opts) {
  check_index(s, i);
  check_index(s, j);
  if (i == j) throw Error(ErrorKind::InvalidArgument, "need two distinct variables");
  require_variance(s, i);
  require_variance(s, j);
  const double r = s.corr()(i, j);
  if (std::abs(r) < opts.sign_tolerance) {
    throw Error(ErrorKind::SignUndefined,
                "correlation between '" + s.names()[i] + "' and '" + s.names()[j] +
                    "' is zero; slope sign undefined");
  }
  LineFit line;
  line.slope = sign_of(r) * s.stds()[i] / s.stds()[j];
  line.intercept = s.means()[i] - line.slope * s.means()[j];
  return line;
}

std::vector<OlsFit> ols_all(const MomentSummary& s, const NumericOptions& opts) {
  require_all_variances(s);
  std::vector<OlsFit> fits;
  fits.reserve(s.dim());
  try {
    const SquareSym inv_cov = spd_inverse(s.cov(), opts).inverse;
    const SquareSym inv_corr = spd_inverse(s.corr(), opts).inverse;
    for (std::size_t j = 0; j < s.dim(); ++j)
      fits.push_back(ols_from_inverses(s, inv_cov, inv_corr, j));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
    fits.clear();
    for (std::size_t j = 0; j < s.dim(); ++j) fits.push_back(ols_from_regressors(s, j, opts));
  }
  return fits;
}

OlsFit ols_single(const MomentSummary& s, std::size_t dependent, const NumericOptions& opts) {
  check_index(s, dependent);
  require_all_variances(s);
  try {
    const SquareSym inv_cov = spd_inverse(s.cov(), opts).inverse;
    const SquareSym inv_corr = spd_inverse(s.corr(), opts).inverse;
    return ols_from_inverses(s, inv_cov, inv_corr, dependent);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
  }
  return ols_from_regressors(s, dependent, opts);
}

HyperplaneFit orthogonal_fit(const MomentSummary& s, const NumericOptions& opts) {
  const EigenDecomposition eig = jacobi_eigen(s.cov(), opts);
  const double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  if (eig.values.size() > 1 &&
      !(eig.values[1] - eig.values[0] >= opts.ambiguity_tolerance * scale && scale > 0.0)) {
    throw Error(ErrorKind::AmbiguousDirection,
                "smallest covariance eigenvalue is repeated; orthogonal direction undefined");
  }
  std::vector<double> normal = eig.vectors.front();
  const double norm = std::sqrt(dot(normal, normal));
  for (double& v : normal) v /= norm;
  const auto first = std::find_if(normal.begin(), normal.end(), [&](double v) {
    return std::abs(v) > opts.eigen_tolerance;
  });
  if (first != normal.end() && *first < 0.0)
    for (double& v : normal) v = -v;

  HyperplaneFit fit;
  fit.constant = dot(normal, s.means());
  fit.normal = std::move(normal);
  return fit;
}

double solve_for(const ImpartialFit& f, std::size_t target, std::span<const double> others) {
  const std::size_t p = f.coefficients.size();
  if (target >= p) throw Error(ErrorKind::InvalidArgument, "target index out of range", target);
  if (others.size() + 1 != p) {
    throw Error(ErrorKind::InvalidArgument,
                "expected " + std::to_string(p - 1) + " values for the other variables");
  }
  const double bt = f.coefficients[target];
  if (bt == 0.0) {
    throw Error(ErrorKind::ZeroCoefficient,
                "coefficient of variable " + std::to_string(target) + " is zero", target);
  }
  double rest = f.constant;
  std::size_t k = 0;
  for (std::size_t j = 0; j < p; ++j) {
    if (j == target) continue;
    rest -= f.coefficients[j] * others[k++];
  }
  return rest / bt;
}

double pairwise_slope(const ImpartialFit& f, std::size_t i, std::size_t j) {
  const std::size_t p = f.coefficients.size();
  if (i >= p || j >= p) throw Error(ErrorKind::InvalidArgument, "variable index out of range");
  if (f.coefficients[i] == 0.0) {
    throw Error(ErrorKind::ZeroCoefficient,
                "coefficient of variable " + std::to_string(i) + " is zero", i);
  }
  return -f.coefficients[j] / f.coefficients[i];
}

SolvedForm solved_form(std::span<const double> coefficients, double constant,
                       std::size_t target) {
  const std::size_t p = coefficients.size();
  if (target >= p) throw Error(ErrorKind::InvalidArgument, "target index out of range", target);
  const double bt = coefficients[target];
  if (bt == 0.0) {
    throw Error(ErrorKind::ZeroCoefficient,
                "coefficient of variable " + std::to_string(target) + " is zero", target);
  }
  SolvedForm out;
  out.target = target;
  out.intercept = constant / bt;
  for (std::size_t j = 0; j < p; ++j) {
    if (j == target) continue;
    out.others.push_back(j);
    out.slopes.push_back(-coefficients[j] / bt);
  }
  return out;
}

}  // namespace impartial
