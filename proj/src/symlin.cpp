#include "impartial/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "impartial/error.hpp"

namespace impartial {

SquareSym::SquareSym(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {
  if (dim == 0) {
    throw Error(ErrorKind::InvalidArgument, "matrix dimension must be at least 1");
  }
}

SquareSym SquareSym::identity(std::size_t dim) {
  SquareSym m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SquareSym SquareSym::diagonal(std::span<const double> values) {
  SquareSym m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m.set(i, i, values[i]);
  return m;
}

SquareSym SquareSym::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t p = rows.size();
  SquareSym m(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (rows[i].size() != p) {
      throw Error(ErrorKind::InvalidArgument, "matrix rows must all have length " +
                                                  std::to_string(p));
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (rows[i][j] != rows[j][i]) {
        throw Error(ErrorKind::InvalidArgument,
                    "matrix is not symmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

std::vector<double> SquareSym::diag() const {
  std::vector<double> d(dim_);
  for (std::size_t i = 0; i < dim_; ++i) d[i] = (*this)(i, i);
  return d;
}

double SquareSym::max_abs() const noexcept {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

std::vector<std::vector<double>> SquareSym::to_rows() const {
  std::vector<std::vector<double>> rows(dim_, std::vector<double>(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) rows[i][j] = (*this)(i, j);
  return rows;
}

LowerTriangular::LowerTriangular(std::size_t dim)
    : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

namespace {

std::size_t packed(std::size_t i, std::size_t j) { return i * (i + 1) / 2 + j; }

// Packed lower Cholesky factor accumulated in T. The rejection threshold is
// always the double-precision one, so the outcome does not depend on T.
template <class T>
std::vector<T> factor(const SquareSym& m, const NumericOptions& opts) {
  const std::size_t p = m.dim();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, m(i, i));
  const double threshold = opts.pivot_factor * static_cast<double>(p) *
                           std::numeric_limits<double>::epsilon() * max_diag;

  std::vector<T> l(p * (p + 1) / 2, T(0));
  for (std::size_t j = 0; j < p; ++j) {
    T pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l[packed(j, k)] * l[packed(j, k)];
    if (!(pivot > threshold)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "matrix is not positive definite (pivot " + std::to_string(j) + ")",
                  j);
    }
    const T ljj = std::sqrt(pivot);
    l[packed(j, j)] = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      T s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[packed(i, k)] * l[packed(j, k)];
      l[packed(i, j)] = s / ljj;
    }
  }
  return l;
}

}  // namespace

LowerTriangular cholesky(const SquareSym& m, const NumericOptions& opts) {
  const std::vector<double> f = factor<double>(m, opts);
  LowerTriangular l(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j <= i; ++j) l.set(i, j, f[packed(i, j)]);
  return l;
}

SpdInverse spd_inverse(const SquareSym& m, const NumericOptions& opts) {
  // Covariance matrices are small; extended precision keeps the inverse
  // accurate to a few ulps even when the condition number reaches ~1e6.
  using T = long double;
  const std::size_t p = m.dim();
  const std::vector<T> l = factor<T>(m, opts);

  // W = L^-1, lower triangular.
  std::vector<T> w(l.size(), T(0));
  for (std::size_t j = 0; j < p; ++j) {
    w[packed(j, j)] = T(1) / l[packed(j, j)];
    for (std::size_t i = j + 1; i < p; ++i) {
      T s = 0;
      for (std::size_t k = j; k < i; ++k) s += l[packed(i, k)] * w[packed(k, j)];
      w[packed(i, j)] = -s / l[packed(i, i)];
    }
  }

  // m^-1 = W^T W
  SquareSym inv(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      T s = 0;
      for (std::size_t k = i; k < p; ++k) s += w[packed(k, i)] * w[packed(k, j)];
      inv.set(i, j, static_cast<double>(s));
    }
  }

  T lo = l[0];
  T hi = l[0];
  for (std::size_t i = 1; i < p; ++i) {
    lo = std::min(lo, l[packed(i, i)]);
    hi = std::max(hi, l[packed(i, i)]);
  }
  const double ratio = static_cast<double>(hi / lo);
  return {std::move(inv), ratio * ratio};
}

EigenDecomposition jacobi_eigen(const SquareSym& m, const NumericOptions& opts) {
  const std::size_t p = m.dim();
  std::vector<std::vector<double>> a = m.to_rows();
  std::vector<std::vector<double>> v(p, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < p; ++i) v[i][i] = 1.0;

  const double threshold = opts.eigen_tolerance * m.max_abs();
  auto converged = [&] {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j)
        if (std::abs(a[i][j]) >= threshold && a[i][j] != 0.0) return false;
    return true;
  };

  int sweeps = 0;
  while (!converged()) {
    if (sweeps == opts.max_sweeps) {
      throw Error(ErrorKind::NoConvergence,
                  "Jacobi iteration did not converge after " +
                      std::to_string(sweeps) + " sweeps",
                  static_cast<std::size_t>(sweeps));
    }
    ++sweeps;
    for (std::size_t ip = 0; ip + 1 < p; ++ip) {
      for (std::size_t iq = ip + 1; iq < p; ++iq) {
        const double apq = a[ip][iq];
        if (apq == 0.0) continue;
        const double theta = (a[iq][iq] - a[ip][ip]) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < p; ++k) {
          const double akp = a[k][ip];
          const double akq = a[k][iq];
          a[k][ip] = c * akp - s * akq;
          a[k][iq] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double apk = a[ip][k];
          const double aqk = a[iq][k];
          a[ip][k] = c * apk - s * aqk;
          a[iq][k] = s * apk + c * aqk;
        }
        a[ip][iq] = 0.0;
        a[iq][ip] = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
          const double vkp = v[k][ip];
          const double vkq = v[k][iq];
          v[k][ip] = c * vkp - s * vkq;
          v[k][iq] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });

  EigenDecomposition out;
  out.values.reserve(p);
  out.vectors.reserve(p);
  for (std::size_t k : order) {
    out.values.push_back(a[k][k]);
    std::vector<double> col(p);
    for (std::size_t i = 0; i < p; ++i) col[i] = v[i][k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

std::vector<double> multiply(const SquareSym& m, std::span<const double> x) {
  const std::size_t p = m.dim();
  if (x.size() != p) {
    throw Error(ErrorKind::InvalidArgument, "vector length does not match matrix");
  }
  std::vector<double> y(p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) y[i] += m(i, j) * x[j];
  return y;
}

double quadratic_form(const SquareSym& m, std::span<const double> x) {
  const std::vector<double> mx = multiply(m, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * mx[i];
  return s;
}

}  // namespace impartial
