#include "impartial/simulate.hpp"

#include <cmath>
#include <optional>
#include <set>

#include <json.hpp>

#include "impartial/diagnostics.hpp"
#include "impartial/error.hpp"
#include "impartial/estimators.hpp"
#include "impartial/random.hpp"
#include "parallel.hpp"

namespace impartial {

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorKind::InvalidConfig, "invalid simulation config: " + what);
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.is_array()) bad_config(std::string(key) + " must be a list of numbers");
  std::vector<double> out;
  for (const json& v : j) {
    if (!v.is_number()) bad_config(std::string(key) + " must be a list of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::string> default_names(std::size_t xs) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < xs; ++j) names.push_back("x" + std::to_string(j + 1));
  names.push_back("y");
  return names;
}

double sample_variance(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

struct ReplicateOutcome {
  std::optional<SolvedForm> impartial;
  std::optional<OlsFit> ols;
  std::optional<SolvedForm> orthogonal;
  std::vector<double> reliability;
};

CoefficientStats mean_sd(const std::vector<double>& values) {
  CoefficientStats st;
  if (values.empty()) return {std::nan(""), std::nan("")};
  for (double v : values) st.mean += v;
  st.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return st;
}

}  // namespace

SimConfig default_lattice_config() {
  SimConfig cfg;
  std::vector<double> lv;
  for (int k = 0; k < 6; ++k) lv.push_back(0.9 + 1.7 * (k - 2.5));
  cfg.levels = {lv, lv};
  cfg.beta = {2.0, 3.0};
  cfg.constant = 1.0;
  cfg.noise_sd = {1.0, 1.0, 1.0};
  cfg.seed = 1;
  cfg.replicates = 1000;
  cfg.names = default_names(2);
  return cfg;
}

void validate(const SimConfig& cfg) {
  if (cfg.beta.empty()) bad_config("beta needs at least one coefficient");
  if (cfg.levels.size() != cfg.beta.size())
    bad_config("levels must give one list per x variable");
  for (const auto& lv : cfg.levels) {
    if (std::set<double>(lv.begin(), lv.end()).size() < 2)
      bad_config("each x variable needs at least 2 distinct levels");
    for (double v : lv)
      if (!std::isfinite(v)) bad_config("levels must be finite");
  }
  for (double b : cfg.beta)
    if (!std::isfinite(b)) bad_config("beta must be finite");
  if (!std::isfinite(cfg.constant)) bad_config("constant must be finite");
  if (cfg.noise_sd.size() != cfg.variables())
    bad_config("noise_sd must give one value per variable");
  for (double sd : cfg.noise_sd)
    if (!(sd >= 0.0) || !std::isfinite(sd)) bad_config("noise_sd must be finite and >= 0");
  if (cfg.replicates < 1) bad_config("replicates must be at least 1");
  if (!cfg.names.empty() && cfg.names.size() != cfg.variables())
    bad_config("names must give one name per variable");
}

SimConfig parse_sim_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad_config(e.what());
  }
  if (!doc.is_object()) bad_config("top level must be an object");
  static const std::set<std::string> known = {"levels",   "beta", "constant", "noise_sd",
                                              "seed",     "replicates", "names"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) bad_config("unknown key '" + key + "'");
  for (const char* key : {"levels", "beta", "constant", "noise_sd"})
    if (!doc.contains(key)) bad_config(std::string("missing key '") + key + "'");

  SimConfig cfg;
  cfg.beta = number_list(doc["beta"], "beta");
  const json& levels = doc["levels"];
  if (!levels.is_array() || levels.empty()) bad_config("levels must be a non-empty list");
  if (levels.front().is_array()) {
    for (const json& lv : levels) cfg.levels.push_back(number_list(lv, "levels"));
  } else {
    cfg.levels.assign(cfg.beta.size(), number_list(levels, "levels"));
  }
  if (!doc["constant"].is_number()) bad_config("constant must be a number");
  cfg.constant = doc["constant"].get<double>();
  const json& noise = doc["noise_sd"];
  if (noise.is_number()) {
    cfg.noise_sd.assign(cfg.variables(), noise.get<double>());
  } else {
    cfg.noise_sd = number_list(noise, "noise_sd");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) bad_config("seed must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("replicates")) {
    if (!doc["replicates"].is_number_unsigned())
      bad_config("replicates must be a positive integer");
    cfg.replicates = doc["replicates"].get<std::size_t>();
  }
  if (doc.contains("names")) {
    if (!doc["names"].is_array()) bad_config("names must be a list of strings");
    for (const json& n : doc["names"]) {
      if (!n.is_string()) bad_config("names must be a list of strings");
      cfg.names.push_back(n.get<std::string>());
    }
  } else {
    cfg.names = default_names(cfg.beta.size());
  }
  validate(cfg);
  return cfg;
}

std::string to_json(const SimConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["levels"] = cfg.levels;
  doc["beta"] = cfg.beta;
  doc["constant"] = cfg.constant;
  doc["noise_sd"] = cfg.noise_sd;
  doc["seed"] = cfg.seed;
  doc["replicates"] = cfg.replicates;
  doc["names"] = cfg.names.empty() ? default_names(cfg.beta.size()) : cfg.names;
  return doc.dump(2);
}

SimulatedData generate_lattice(const SimConfig& cfg, std::uint64_t replicate) {
  validate(cfg);
  const std::size_t xs = cfg.beta.size();
  const std::size_t p = xs + 1;
  std::size_t rows = 1;
  for (const auto& lv : cfg.levels) rows *= lv.size();

  std::vector<std::vector<double>> truth(p, std::vector<double>(rows));
  std::vector<std::size_t> digit(xs, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    double y = cfg.constant;
    for (std::size_t j = 0; j < xs; ++j) {
      truth[j][r] = cfg.levels[j][digit[j]];
      y += cfg.beta[j] * truth[j][r];
    }
    truth[xs][r] = y;
    for (std::size_t j = xs; j-- > 0;) {
      if (++digit[j] < cfg.levels[j].size()) break;
      digit[j] = 0;
    }
  }

  Rng rng(cfg.seed, replicate);
  std::vector<std::vector<double>> observed = truth;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < p; ++j) observed[j][r] += cfg.noise_sd[j] * rng.normal();

  const std::vector<std::string> names = cfg.names.empty() ? default_names(xs) : cfg.names;
  return {Dataset(names, std::move(observed)), Dataset(names, std::move(truth))};
}

const EstimatorSummary& MonteCarloResult::estimator(std::string_view name) const {
  for (const auto& e : estimators)
    if (e.name == name) return e;
  throw Error(ErrorKind::InvalidArgument, "no estimator named '" + std::string(name) + "'");
}

MonteCarloResult monte_carlo(const SimConfig& cfg, std::size_t threads) {
  validate(cfg);
  const std::size_t xs = cfg.beta.size();
  const std::size_t p = xs + 1;
  const std::size_t target = xs;

  std::vector<ReplicateOutcome> outcomes(cfg.replicates);
  detail::parallel_for(cfg.replicates, threads, [&](std::size_t r) {
    const SimulatedData data = generate_lattice(cfg, r);
    const MomentSummary s = summarize(data.observed);
    ReplicateOutcome& out = outcomes[r];
    try {
      out.impartial = solved_form(impartial_fit(s), target);
    } catch (const Error&) {
    }
    try {
      out.ols = ols_single(s, target);
    } catch (const Error&) {
    }
    try {
      out.orthogonal = solved_form(orthogonal_fit(s), target);
    } catch (const Error&) {
    }
    out.reliability.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      const auto t = data.truth.column(j);
      const auto o = data.observed.column(j);
      std::vector<double> noise(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) noise[i] = o[i] - t[i];
      const double vt = sample_variance(t);
      const double vn = sample_variance(noise);
      out.reliability[j] = vt + vn > 0.0 ? reliability(vt, vt + vn) : 1.0;
    }
  });

  MonteCarloResult result;
  result.replicates = cfg.replicates;
  result.true_slopes = cfg.beta;
  result.true_intercept = cfg.constant;

  auto summarize_estimator = [&](const std::string& name, auto&& extract) {
    std::vector<std::vector<double>> slopes(xs);
    std::vector<double> intercepts;
    EstimatorSummary est;
    est.name = name;
    for (const auto& out : outcomes) {
      const auto solved = extract(out);
      if (!solved) {
        ++est.failures;
        continue;
      }
      for (std::size_t j = 0; j < xs; ++j) slopes[j].push_back(solved->first[j]);
      intercepts.push_back(solved->second);
    }
    for (const auto& v : slopes) est.slopes.push_back(mean_sd(v));
    est.intercept = mean_sd(intercepts);
    result.estimators.push_back(std::move(est));
  };
  using Solved = std::optional<std::pair<std::vector<double>, double>>;
  summarize_estimator("impartial", [](const ReplicateOutcome& o) -> Solved {
    if (!o.impartial) return std::nullopt;
    return std::make_pair(o.impartial->slopes, o.impartial->intercept);
  });
  summarize_estimator("ols", [](const ReplicateOutcome& o) -> Solved {
    if (!o.ols) return std::nullopt;
    return std::make_pair(o.ols->slopes, o.ols->intercept);
  });
  summarize_estimator("orthogonal", [](const ReplicateOutcome& o) -> Solved {
    if (!o.orthogonal) return std::nullopt;
    return std::make_pair(o.orthogonal->slopes, o.orthogonal->intercept);
  });

  result.mean_reliability.assign(p, 0.0);
  for (const auto& out : outcomes)
    for (std::size_t j = 0; j < p; ++j) result.mean_reliability[j] += out.reliability[j];
  for (double& v : result.mean_reliability) v /= static_cast<double>(cfg.replicates);
  return result;
}

}  // namespace impartial
