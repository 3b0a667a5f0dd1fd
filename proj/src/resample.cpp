#include "impartial/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "impartial/error.hpp"
#include "impartial/estimators.hpp"
#include "impartial/random.hpp"
#include "parallel.hpp"

namespace impartial {

namespace {

struct Replicate {
  bool ok = false;
  std::vector<double> normalized;
  std::vector<double> solved;
};

Interval percentile_interval(std::vector<double> values, double point, double alpha) {
  std::sort(values.begin(), values.end());
  return {point, nearest_rank(values, alpha / 2.0), nearest_rank(values, 1.0 - alpha / 2.0)};
}

}  // namespace

double nearest_rank(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::InvalidArgument, "no values to rank");
  const double m = static_cast<double>(sorted.size());
  // The small offset keeps q * m on an integer from rounding up a rank.
  double rank = std::ceil(q * m - 1e-9 * m);
  rank = std::clamp(rank, 1.0, m);
  return sorted[static_cast<std::size_t>(rank) - 1];
}

BootstrapResult bootstrap(const Dataset& d, const BootstrapOptions& opts) {
  if (opts.replicates == 0) {
    throw Error(ErrorKind::InvalidArgument, "bootstrap needs at least 1 replicate");
  }
  if (!(opts.level > 0.0 && opts.level < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "confidence level must lie strictly between 0 and 1");
  }
  const std::size_t p = d.cols();
  const std::size_t n = d.rows();
  if (opts.solve_for && *opts.solve_for >= p) {
    throw Error(ErrorKind::InvalidArgument, "solve-for index out of range", *opts.solve_for);
  }

  const ImpartialFit point = impartial_fit(summarize(d), opts.numeric);
  const std::size_t k = point.reference;
  std::vector<double> point_normalized(p);
  for (std::size_t j = 0; j < p; ++j)
    point_normalized[j] = point.coefficients[j] / point.coefficients[k];
  std::optional<SolvedForm> point_solved;
  if (opts.solve_for) point_solved = solved_form(point, *opts.solve_for);

  std::vector<Replicate> reps(opts.replicates);
  detail::parallel_for(opts.replicates, opts.threads, [&](std::size_t r) {
    Rng rng(opts.seed, r);
    std::vector<std::size_t> rows(n);
    for (std::size_t& row : rows) row = rng.below(n);
    Replicate& rep = reps[r];
    try {
      const ImpartialFit fit = impartial_fit(summarize(d.select_rows(rows)), opts.numeric);
      const double bk = fit.coefficients[k];
      if (bk == 0.0) return;
      rep.normalized.resize(p);
      for (std::size_t j = 0; j < p; ++j) rep.normalized[j] = fit.coefficients[j] / bk;
      if (opts.solve_for) rep.solved = solved_form(fit, *opts.solve_for).slopes;
      rep.ok = true;
    } catch (const Error&) {
      rep.ok = false;
    }
  });

  BootstrapResult result;
  result.replicates = opts.replicates;
  result.level = opts.level;
  result.seed = opts.seed;
  result.reference = k;
  result.target = opts.solve_for;
  std::vector<std::vector<double>> coeff_samples(p);
  std::vector<std::vector<double>> solved_samples(p == 0 ? 0 : p - 1);
  for (const Replicate& rep : reps) {
    if (!rep.ok) {
      ++result.failed_replicates;
      continue;
    }
    for (std::size_t j = 0; j < p; ++j) coeff_samples[j].push_back(rep.normalized[j]);
    for (std::size_t j = 0; j < rep.solved.size(); ++j)
      solved_samples[j].push_back(rep.solved[j]);
  }
  if (result.failed_replicates == opts.replicates) {
    throw Error(ErrorKind::AllReplicatesFailed,
                "all " + std::to_string(opts.replicates) + " bootstrap replicates failed");
  }

  const double alpha = 1.0 - opts.level;
  for (std::size_t j = 0; j < p; ++j)
    result.coefficients.push_back(
        percentile_interval(std::move(coeff_samples[j]), point_normalized[j], alpha));
  if (point_solved) {
    for (std::size_t j = 0; j + 1 < p; ++j)
      result.solved.push_back(
          percentile_interval(std::move(solved_samples[j]), point_solved->slopes[j], alpha));
  }
  return result;
}

}  // namespace impartial
