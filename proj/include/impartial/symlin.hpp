#pragma once

// Dense symmetric-matrix kernels sized for covariance work (p up to a few
// hundred): packed storage, Cholesky, SPD inversion and cyclic Jacobi.

#include <cstddef>
#include <span>
#include <vector>

namespace impartial {

/// Tolerances shared by every numeric routine. Defaults are the documented
/// library behaviour; callers override individual fields.
struct NumericOptions {
  /// Cholesky rejects a pivot <= pivot_factor * p * eps * max(diag).
  double pivot_factor = 1.0;
  /// Jacobi stops when every off-diagonal magnitude < this * max|m|.
  double eigen_tolerance = 1e-12;
  int max_sweeps = 100;
  /// |r| below this leaves the bivariate sign undefined.
  double sign_tolerance = 1e-8;
  /// smallest/largest eigenvalue ratio treated as an exact (singular) relation.
  double singular_ratio = 1e-12;
  /// relative gap under which the two smallest eigenvalues are a tie.
  double ambiguity_tolerance = 1e-10;
  /// slack allowed below 1 on an inverse-correlation diagonal.
  double r_squared_slack = 1e-9;
  /// reference-row scores this close (relative) to the maximum are ties;
  /// the lowest index wins.
  double reference_tie = 1e-9;
};

/// Symmetric p x p matrix with one storage slot per unordered pair, so
/// (i, j) and (j, i) can never disagree.
class SquareSym {
 public:
  explicit SquareSym(std::size_t dim);

  static SquareSym identity(std::size_t dim);
  static SquareSym diagonal(std::span<const double> values);
  /// Throws InvalidArgument unless `rows` is square and exactly symmetric.
  static SquareSym from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[slot(i, j)];
  }
  void set(std::size_t i, std::size_t j, double value) noexcept {
    data_[slot(i, j)] = value;
  }

  std::vector<double> diag() const;
  double max_abs() const noexcept;
  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const SquareSym&, const SquareSym&) = default;

 private:
  static std::size_t slot(std::size_t i, std::size_t j) noexcept {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }

  std::size_t dim_;
  std::vector<double> data_;
};

/// Packed lower-triangular matrix; entries above the diagonal read as zero.
class LowerTriangular {
 public:
  explicit LowerTriangular(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return j > i ? 0.0 : data_[i * (i + 1) / 2 + j];
  }
  void set(std::size_t i, std::size_t j, double value) noexcept {
    data_[i * (i + 1) / 2 + j] = value;
  }

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

struct SpdInverse {
  SquareSym inverse;
  /// Lower-bound estimate of the 2-norm condition number,
  /// (max L_ii / min L_ii)^2 from the Cholesky factor.
  double condition_estimate;
};

struct EigenDecomposition {
  /// Ascending.
  std::vector<double> values;
  /// vectors[k] is the unit eigenvector for values[k].
  std::vector<std::vector<double>> vectors;
};

/// Throws NotPositiveDefinite with the failing pivot index (0-based).
LowerTriangular cholesky(const SquareSym& m, const NumericOptions& opts = {});

SpdInverse spd_inverse(const SquareSym& m, const NumericOptions& opts = {});

/// Cyclic Jacobi. Throws NoConvergence after opts.max_sweeps sweeps.
EigenDecomposition jacobi_eigen(const SquareSym& m,
                                const NumericOptions& opts = {});

std::vector<double> multiply(const SquareSym& m, std::span<const double> x);
double quadratic_form(const SquareSym& m, std::span<const double> x);

}  // namespace impartial
