#include "impartial/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "impartial/datastats.hpp"
#include "impartial/diagnostics.hpp"
#include "impartial/error.hpp"
#include "impartial/estimators.hpp"
#include "impartial/resample.hpp"
#include "impartial/simulate.hpp"

namespace impartial::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kNearSingularCondition = 1e10;

// Any failure that should exit 1 with a one-line message.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sig(double v, int digits) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Structured output must never carry NaN/inf; they become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset load_dataset(const std::string& path, bool drop_incomplete) {
  CsvOptions opts;
  opts.drop_incomplete_rows = drop_incomplete;
  return parse_csv(read_file(path), opts);
}

std::size_t column_index(const Dataset& d, const std::string& name) {
  const auto idx = d.index_of(name);
  if (!idx) throw DataError("no column named '" + name + "'");
  return *idx;
}

std::string linear_text(const std::vector<std::string>& names,
                        std::span<const double> coefficients,
                        std::span<const std::size_t> which, int digits) {
  std::string out;
  for (std::size_t k = 0; k < which.size(); ++k) {
    const double c = coefficients[k];
    if (k == 0) {
      out += sig(c, digits);
    } else {
      out += c < 0 ? " - " : " + ";
      out += sig(std::abs(c), digits);
    }
    out += "*" + names[which[k]];
  }
  return out;
}

Json symmetric_json(const ImpartialFit& f, const std::vector<std::string>& names) {
  Json j;
  j["names"] = names;
  Json coeffs = Json::array();
  for (double b : f.coefficients) coeffs.push_back(number(b));
  j["coefficients"] = coeffs;
  j["constant"] = number(f.constant);
  j["reference"] = names[f.reference];
  j["exact"] = f.exact;
  j["sign_consistent"] = f.sign_consistent;
  return j;
}

Json solved_json(const SolvedForm& sf, const std::vector<std::string>& names) {
  Json slopes = Json::object();
  for (std::size_t k = 0; k < sf.others.size(); ++k)
    slopes[names[sf.others[k]]] = number(sf.slopes[k]);
  Json j;
  j["intercept"] = number(sf.intercept);
  j["slopes"] = slopes;
  return j;
}

std::vector<std::string> fit_warnings(const ImpartialFit& f, const MomentSummary& s) {
  std::vector<std::string> warnings;
  if (f.exact) {
    warnings.push_back("exact linear relation: the data lie on a hyperplane");
    return warnings;
  }
  if (!f.sign_consistent) {
    warnings.push_back(
        "sign inconsistency: rows of the inverse covariance matrix disagree on coefficient "
        "signs; signs taken from row '" +
        s.names()[f.reference] + "'");
  }
  const double cond = spd_inverse(s.cov()).condition_estimate;
  if (cond > kNearSingularCondition) {
    warnings.push_back("covariance matrix is near-singular (condition estimate " +
                       sig(cond, 4) + ")");
  }
  return warnings;
}

void print_json(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

struct FitArgs {
  std::string input;
  std::string solve_for;
  std::string format = "text";
  bool drop_incomplete = false;
};

int run_fit(const FitArgs& a, std::ostream& out) {
  const Dataset d = load_dataset(a.input, a.drop_incomplete);
  const MomentSummary s = summarize(d);
  const ImpartialFit f = impartial_fit(s);
  const auto& names = d.names();
  std::optional<SolvedForm> solved;
  if (!a.solve_for.empty()) solved = solved_form(f, column_index(d, a.solve_for));
  std::optional<DiagnosticsReport> diag;
  if (!f.exact) diag = diagnose(f, s);
  const std::vector<std::string> warnings = fit_warnings(f, s);

  if (a.format == "json") {
    Json doc;
    doc["command"] = "fit";
    doc["n"] = d.rows();
    doc["p"] = d.cols();
    doc["symmetric_form"] = symmetric_json(f, names);
    Json solved_doc = Json::object();
    if (solved) solved_doc[names[solved->target]] = solved_json(*solved, names);
    doc["solved"] = solved_doc;
    Json dj = Json::object();
    if (diag) {
      auto per_var = [&](const std::vector<double>& v) {
        Json o = Json::object();
        for (std::size_t j = 0; j < v.size(); ++j) o[names[j]] = number(v[j]);
        return o;
      };
      dj["r_squared"] = per_var(diag->r_squared);
      dj["residual_variance"] = per_var(diag->residual_variance);
      dj["coeff_times_residual_sd"] = per_var(diag->coeff_times_residual_sd);
      dj["precision_diagonal"] = per_var(f.precision_diag);
      dj["partial_correlations"] = diag->partial_corr.to_rows();
      Json viol = Json::array();
      for (const auto& [i, j] : diag->sign_violations) viol.push_back({names[i], names[j]});
      dj["sign_violations"] = viol;
    }
    doc["diagnostics"] = dj;
    doc["warnings"] = warnings;
    doc["seed"] = nullptr;
    print_json(out, doc);
    return 0;
  }

  std::vector<std::size_t> all(names.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  out << "impartial fit: n = " << d.rows() << ", p = " << d.cols() << '\n';
  out << "symmetric form (sign reference " << names[f.reference]
      << (f.exact ? ", exact" : "") << "):\n";
  out << "  " << linear_text(names, f.coefficients, all, 12) << " = " << sig(f.constant, 12)
      << '\n';
  if (solved) {
    out << "solved for " << names[solved->target] << ":\n";
    out << "  " << names[solved->target] << " = " << sig(solved->intercept, 12);
    for (std::size_t k = 0; k < solved->others.size(); ++k) {
      const double c = solved->slopes[k];
      out << (c < 0 ? " - " : " + ") << sig(std::abs(c), 12) << "*" << names[solved->others[k]];
    }
    out << '\n';
  }
  if (diag) {
    out << "diagnostics:\n";
    out << "  " << std::left << std::setw(12) << "variable" << std::right << std::setw(12)
        << "R^2" << std::setw(14) << "resid var" << std::setw(14) << "|b|*resid sd"
        << '\n';
    for (std::size_t j = 0; j < names.size(); ++j) {
      out << "  " << std::left << std::setw(12) << names[j] << std::right << std::setw(12)
          << sig(diag->r_squared[j], 4) << std::setw(14) << sig(diag->residual_variance[j], 4)
          << std::setw(14) << sig(diag->coeff_times_residual_sd[j], 4) << '\n';
    }
  }
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  return 0;
}

int run_compare(const FitArgs& a, std::ostream& out) {
  const Dataset d = load_dataset(a.input, a.drop_incomplete);
  const MomentSummary s = summarize(d);
  const std::size_t t = column_index(d, a.solve_for);
  const ImpartialFit f = impartial_fit(s);
  if (f.exact) throw DataError("exact linear relation: OLS comparisons are undefined");
  const std::vector<OlsFit> ols = ols_all(s);
  std::vector<std::string> warnings = fit_warnings(f, s);
  std::optional<SolvedForm> orth;
  try {
    orth = solved_form(orthogonal_fit(s), t);
  } catch (const Error& e) {
    warnings.push_back(std::string("orthogonal regression unavailable: ") + e.what());
  }
  const auto& names = d.names();

  struct Row {
    std::size_t var;
    double impartial, ols, reverse, orthogonal;
    bool between;
  };
  std::vector<Row> rows;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (j == t) continue;
    Row r{};
    r.var = j;
    r.impartial = pairwise_slope(f, t, j);
    r.ols = ols[t].coefficient(j);
    const double back = ols[j].coefficient(t);
    r.reverse = back == 0.0 ? std::nan("") : 1.0 / back;
    r.orthogonal = std::nan("");
    if (orth) {
      for (std::size_t k = 0; k < orth->others.size(); ++k)
        if (orth->others[k] == j) r.orthogonal = orth->slopes[k];
    }
    const double lo = std::min(std::abs(r.ols), std::abs(r.reverse));
    const double hi = std::max(std::abs(r.ols), std::abs(r.reverse));
    const double mag = std::abs(r.impartial);
    const double slack = 1e-12 * hi;
    r.between = std::isfinite(hi) && mag >= lo - slack && mag <= hi + slack;
    rows.push_back(r);
  }

  if (a.format == "json") {
    Json doc;
    doc["command"] = "compare";
    doc["n"] = d.rows();
    doc["p"] = d.cols();
    doc["target"] = names[t];
    doc["symmetric_form"] = symmetric_json(f, names);
    Json solved_doc = Json::object();
    solved_doc[names[t]] = solved_json(solved_form(f, t), names);
    doc["solved"] = solved_doc;
    Json table = Json::array();
    for (const Row& r : rows) {
      Json row;
      row["variable"] = names[r.var];
      row["impartial"] = number(r.impartial);
      row["ols"] = number(r.ols);
      row["reverse_ols"] = number(r.reverse);
      row["orthogonal"] = number(r.orthogonal);
      row["between"] = r.between;
      table.push_back(row);
    }
    doc["rows"] = table;
    doc["warnings"] = warnings;
    doc["seed"] = nullptr;
    print_json(out, doc);
    return 0;
  }

  out << "rate of change of " << names[t] << " with each variable (n = " << d.rows()
      << ", p = " << d.cols() << ")\n";
  out << "  " << std::left << std::setw(12) << "variable" << std::right << std::setw(12)
      << "impartial" << std::setw(12) << "ols" << std::setw(12) << "reverse ols"
      << std::setw(12) << "orthogonal" << std::setw(9) << "between" << '\n';
  for (const Row& r : rows) {
    out << "  " << std::left << std::setw(12) << names[r.var] << std::right << std::setw(12)
        << sig(r.impartial, 4) << std::setw(12) << sig(r.ols, 4) << std::setw(12)
        << sig(r.reverse, 4) << std::setw(12) << sig(r.orthogonal, 4) << std::setw(9)
        << (r.between ? "yes" : "no") << '\n';
  }
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  return 0;
}

struct BootstrapArgs {
  std::string input;
  std::size_t replicates = 1000;
  double level = 0.95;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string solve_for;
  std::string format = "text";
  bool drop_incomplete = false;
};

int run_bootstrap(const BootstrapArgs& a, std::ostream& out) {
  const Dataset d = load_dataset(a.input, a.drop_incomplete);
  BootstrapOptions opts;
  opts.replicates = a.replicates;
  opts.level = a.level;
  opts.seed = a.seed;
  opts.threads = a.threads;
  if (!a.solve_for.empty()) opts.solve_for = column_index(d, a.solve_for);
  const BootstrapResult r = bootstrap(d, opts);
  const ImpartialFit f = impartial_fit(summarize(d));
  const auto& names = d.names();
  std::vector<std::string> warnings = fit_warnings(f, summarize(d));
  if (!r.reliable()) {
    warnings.push_back("unreliable: " + std::to_string(r.failed_replicates) + " of " +
                       std::to_string(r.replicates) + " replicates failed");
  }
  std::vector<std::string> solved_names;
  if (r.target)
    for (std::size_t j = 0; j < names.size(); ++j)
      if (j != *r.target) solved_names.push_back(names[j]);

  auto interval_json = [](const Interval& iv) {
    Json j;
    j["point"] = number(iv.point);
    j["lower"] = number(iv.lower);
    j["upper"] = number(iv.upper);
    return j;
  };

  if (a.format == "json") {
    Json doc;
    doc["command"] = "bootstrap";
    doc["n"] = d.rows();
    doc["p"] = d.cols();
    doc["symmetric_form"] = symmetric_json(f, names);
    doc["replicates"] = r.replicates;
    doc["level"] = r.level;
    doc["failed_replicates"] = r.failed_replicates;
    doc["reliable"] = r.reliable();
    doc["normalized_to"] = names[r.reference];
    Json iv = Json::object();
    for (std::size_t j = 0; j < names.size(); ++j) iv[names[j]] = interval_json(r.coefficients[j]);
    doc["intervals"] = iv;
    Json solved_doc = Json::object();
    if (r.target) {
      Json slopes = Json::object();
      for (std::size_t k = 0; k < solved_names.size(); ++k)
        slopes[solved_names[k]] = interval_json(r.solved[k]);
      solved_doc[names[*r.target]] = Json{{"slopes", slopes}};
    }
    doc["solved"] = solved_doc;
    doc["warnings"] = warnings;
    doc["seed"] = r.seed;
    print_json(out, doc);
    return 0;
  }

  out << "bootstrap: " << r.replicates << " replicates, level " << sig(r.level, 4)
      << ", seed " << r.seed << ", failed " << r.failed_replicates << '\n';
  out << "coefficients relative to " << names[r.reference] << ":\n";
  auto row = [&](const std::string& name, const Interval& v) {
    out << "  " << std::left << std::setw(12) << name << std::right << std::setw(12)
        << sig(v.point, 4) << std::setw(12) << sig(v.lower, 4) << std::setw(12)
        << sig(v.upper, 4) << '\n';
  };
  out << "  " << std::left << std::setw(12) << "variable" << std::right << std::setw(12)
      << "estimate" << std::setw(12) << "lower" << std::setw(12) << "upper" << '\n';
  for (std::size_t j = 0; j < names.size(); ++j) row(names[j], r.coefficients[j]);
  if (r.target) {
    out << "solved for " << names[*r.target] << ":\n";
    for (std::size_t k = 0; k < solved_names.size(); ++k) row(solved_names[k], r.solved[k]);
  }
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  return 0;
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t monte_carlo = 0;
  std::size_t threads = 1;
  std::string format = "text";
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  SimConfig cfg = a.config.empty() ? default_lattice_config()
                                   : parse_sim_config(read_file(a.config));
  if (a.seed) cfg.seed = *a.seed;
  if (a.monte_carlo == 0) {
    out << format_csv(generate_lattice(cfg).observed);
    return 0;
  }
  cfg.replicates = a.monte_carlo;
  const MonteCarloResult mc = monte_carlo(cfg, a.threads);
  const std::vector<std::string> names =
      cfg.names.empty() ? generate_lattice(cfg).observed.names() : cfg.names;
  const std::size_t xs = cfg.beta.size();

  if (a.format == "json") {
    auto stats_json = [](const CoefficientStats& s) {
      Json j;
      j["mean"] = number(s.mean);
      j["sd"] = number(s.sd);
      return j;
    };
    Json doc;
    doc["command"] = "simulate";
    doc["n"] = generate_lattice(cfg).observed.rows();
    doc["p"] = cfg.variables();
    doc["replicates"] = mc.replicates;
    doc["target"] = names[xs];
    Json truth = Json::object();
    for (std::size_t j = 0; j < xs; ++j) truth[names[j]] = mc.true_slopes[j];
    doc["true_slopes"] = truth;
    doc["true_intercept"] = mc.true_intercept;
    Json ests = Json::object();
    for (const auto& e : mc.estimators) {
      Json slopes = Json::object();
      for (std::size_t j = 0; j < xs; ++j) slopes[names[j]] = stats_json(e.slopes[j]);
      ests[e.name] = Json{{"slopes", slopes},
                          {"intercept", stats_json(e.intercept)},
                          {"failures", e.failures}};
    }
    doc["estimators"] = ests;
    Json rel = Json::object();
    for (std::size_t j = 0; j < names.size(); ++j) rel[names[j]] = number(mc.mean_reliability[j]);
    doc["mean_reliability"] = rel;
    doc["warnings"] = Json::array();
    doc["seed"] = cfg.seed;
    print_json(out, doc);
    return 0;
  }

  out << "monte carlo: " << mc.replicates << " replicates, seed " << cfg.seed
      << ", solved for " << names[xs] << '\n';
  out << "  " << std::left << std::setw(12) << "estimator" << std::right;
  for (std::size_t j = 0; j < xs; ++j) out << std::setw(22) << names[j] + " mean (sd)";
  out << std::setw(10) << "failures" << '\n';
  out << "  " << std::left << std::setw(12) << "truth" << std::right;
  for (std::size_t j = 0; j < xs; ++j) out << std::setw(22) << sig(mc.true_slopes[j], 4);
  out << '\n';
  for (const auto& e : mc.estimators) {
    out << "  " << std::left << std::setw(12) << e.name << std::right;
    for (const auto& s : e.slopes)
      out << std::setw(22) << sig(s.mean, 4) + " (" + sig(s.sd, 4) + ")";
    out << std::setw(10) << e.failures << '\n';
  }
  out << "mean reliability:";
  for (std::size_t j = 0; j < names.size(); ++j)
    out << ' ' << names[j] << '=' << sig(mc.mean_reliability[j], 4);
  out << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Impartial linear functional relationships from noisy data", "impartial"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "symmetric-form fit with diagnostics");
  fit->add_option("--input", fit_args.input, "CSV file")->required();
  fit->add_option("--solve-for", fit_args.solve_for, "also print the relation solved for NAME");
  fit->add_option("--format", fit_args.format)->check(CLI::IsMember({"text", "json"}));
  fit->add_flag("--drop-incomplete-rows", fit_args.drop_incomplete);

  FitArgs cmp_args;
  auto* compare = app.add_subcommand("compare", "impartial vs OLS vs orthogonal slopes");
  compare->add_option("--input", cmp_args.input, "CSV file")->required();
  compare->add_option("--solve-for", cmp_args.solve_for, "variable to solve for")->required();
  compare->add_option("--format", cmp_args.format)->check(CLI::IsMember({"text", "json"}));
  compare->add_flag("--drop-incomplete-rows", cmp_args.drop_incomplete);

  BootstrapArgs boot_args;
  auto* boot = app.add_subcommand("bootstrap", "percentile bootstrap intervals");
  boot->add_option("--input", boot_args.input, "CSV file")->required();
  boot->add_option("--replicates", boot_args.replicates)->required();
  boot->add_option("--level", boot_args.level)->required();
  boot->add_option("--seed", boot_args.seed)->required();
  boot->add_option("--threads", boot_args.threads)->check(CLI::PositiveNumber);
  boot->add_option("--solve-for", boot_args.solve_for);
  boot->add_option("--format", boot_args.format)->check(CLI::IsMember({"text", "json"}));
  boot->add_flag("--drop-incomplete-rows", boot_args.drop_incomplete);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "synthetic lattice data or a Monte Carlo study");
  sim->add_option("--config", sim_args.config, "JSON config (default: built-in lattice)");
  sim->add_option("--seed", sim_args.seed);
  sim->add_option("--monte-carlo", sim_args.monte_carlo, "replicate count")
      ->check(CLI::PositiveNumber);
  sim->add_option("--threads", sim_args.threads)->check(CLI::PositiveNumber);
  sim->add_option("--format", sim_args.format)->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*fit) return run_fit(fit_args, out);
    if (*compare) return run_compare(cmp_args, out);
    if (*boot) return run_bootstrap(boot_args, out);
    return run_simulate(sim_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace impartial::cli
