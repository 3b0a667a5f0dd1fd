#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "impartial/datastats.hpp"
#include "impartial/symlin.hpp"

namespace impartial {

struct BootstrapOptions {
  std::size_t replicates = 1000;
  /// Confidence level 1 - alpha, strictly inside (0, 1).
  double level = 0.95;
  std::uint64_t seed = 0;
  /// Worker threads; results do not depend on this.
  std::size_t threads = 1;
  /// Also produce intervals for the relation solved for this variable.
  std::optional<std::size_t> solve_for;
  NumericOptions numeric;
};

struct Interval {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Percentile intervals for the impartial coefficients. Every replicate's
/// coefficient vector is divided by its own entry at the point estimate's
/// reference variable, so all vectors share scale and sign before ranking.
struct BootstrapResult {
  std::size_t replicates = 0;
  double level = 0.0;
  std::uint64_t seed = 0;
  std::size_t failed_replicates = 0;
  std::size_t reference = 0;
  /// b_j / b_reference, one per variable.
  std::vector<Interval> coefficients;
  std::optional<std::size_t> target;
  /// Solved-form slopes for `target`, one per other variable in order.
  std::vector<Interval> solved;

  /// Fewer than 5% of replicates failed.
  bool reliable() const noexcept {
    return static_cast<double>(failed_replicates) < 0.05 * static_cast<double>(replicates);
  }
};

/// Case-resampling bootstrap. Replicate r draws from an RNG stream derived
/// from (seed, r), so the result is identical for any thread count.
BootstrapResult bootstrap(const Dataset& d, const BootstrapOptions& opts);

/// Nearest-rank quantile of already sorted values, q in [0, 1].
double nearest_rank(const std::vector<double>& sorted, double q);

}  // namespace impartial
