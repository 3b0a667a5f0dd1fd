#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "impartial/datastats.hpp"

namespace impartial {

/// Synthetic law y = constant + sum_j beta[j] * x_j observed on a full
/// factorial lattice of the x variables, every variable (y included) carrying
/// independent Gaussian noise.
///
/// Serialized as one flat JSON object with keys levels, beta, constant,
/// noise_sd, seed, replicates and optionally names. `levels` may be a single
/// list shared by every x variable or one list per variable; `noise_sd` may be
/// a scalar or one value per variable (x variables first, y last).
struct SimConfig {
  std::vector<std::vector<double>> levels;
  std::vector<double> beta;
  double constant = 0.0;
  std::vector<double> noise_sd;
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
  std::vector<std::string> names;

  std::size_t variables() const noexcept { return beta.size() + 1; }
};

/// Two x variables on a 6 x 6 lattice (spacing 1.7, centred on 0.9, so each
/// noise-free x has sample variance 8.67), y = 1 + 2 x1 + 3 x2, unit noise.
SimConfig default_lattice_config();

/// Throws InvalidConfig on any violated invariant.
void validate(const SimConfig& cfg);

SimConfig parse_sim_config(std::string_view json_text);
std::string to_json(const SimConfig& cfg);

struct SimulatedData {
  Dataset observed;
  Dataset truth;
};

/// Lattice rows in lexicographic level order (first x slowest). Noise for
/// replicate r comes from the stream derived from (cfg.seed, r).
SimulatedData generate_lattice(const SimConfig& cfg, std::uint64_t replicate = 0);

struct CoefficientStats {
  double mean = 0.0;
  double sd = 0.0;
};

struct EstimatorSummary {
  std::string name;
  /// One per x variable, solved for y.
  std::vector<CoefficientStats> slopes;
  CoefficientStats intercept;
  std::size_t failures = 0;
};

struct MonteCarloResult {
  std::size_t replicates = 0;
  std::vector<double> true_slopes;
  double true_intercept = 0.0;
  /// "impartial", "ols", "orthogonal" in that order.
  std::vector<EstimatorSummary> estimators;
  /// Mean of var(true) / (var(true) + var(noise)) per variable.
  std::vector<double> mean_reliability;

  const EstimatorSummary& estimator(std::string_view name) const;
};

MonteCarloResult monte_carlo(const SimConfig& cfg, std::size_t threads = 1);

}  // namespace impartial
