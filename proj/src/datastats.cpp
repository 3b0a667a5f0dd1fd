#include "impartial/datastats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <string>

#include "impartial/error.hpp"

namespace impartial {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "NA"; }

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size()) {
    throw Error(ErrorKind::InvalidArgument, "column names and columns differ in count");
  }
  if (columns_.size() < 2) {
    throw Error(ErrorKind::TooFewColumns, "need at least 2 variables");
  }
  std::set<std::string> seen;
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j].empty()) {
      throw Error(ErrorKind::BadHeader, "empty column name at position " + std::to_string(j + 1),
                  j);
    }
    if (!seen.insert(names_[j]).second) {
      throw Error(ErrorKind::BadHeader, "duplicate column name '" + names_[j] + "'", j,
                  names_[j]);
    }
  }
  const std::size_t n = columns_.front().size();
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].size() != n) {
      throw Error(ErrorKind::InvalidArgument,
                  "column '" + names_[j] + "' has a different length", j, names_[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(columns_[j][i])) {
        throw Error(ErrorKind::NonFinite,
                    "non-finite value at row " + std::to_string(i + 1) + ", column '" +
                        names_[j] + "'",
                    i + 1, names_[j]);
      }
    }
  }
  if (n < 2) {
    throw Error(ErrorKind::TooFewRows, "need at least 2 observations");
  }
}

std::optional<std::size_t> Dataset::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    cols[j].reserve(rows.size());
    for (std::size_t r : rows) cols[j].push_back(columns_[j].at(r));
  }
  return Dataset(names_, std::move(cols));
}

Dataset Dataset::scale_column(std::size_t j, double factor) const {
  std::vector<std::vector<double>> cols = columns_;
  for (double& v : cols.at(j)) v *= factor;
  return Dataset(names_, std::move(cols));
}

Dataset parse_csv(std::string_view text, const CsvOptions& opts) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string_view> lines = split_lines(text);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty() || trim(lines.front()).empty()) {
    throw Error(ErrorKind::BadHeader, "missing header row");
  }

  std::vector<std::string> names;
  for (std::string_view f : split_fields(lines.front())) names.push_back(unquote(f));
  std::set<std::string> seen;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j].empty()) {
      throw Error(ErrorKind::BadHeader,
                  "empty column name at position " + std::to_string(j + 1), j);
    }
    if (!seen.insert(names[j]).second) {
      throw Error(ErrorKind::BadHeader, "duplicate column name '" + names[j] + "'", j,
                  names[j]);
    }
  }
  if (names.size() < 2) {
    throw Error(ErrorKind::TooFewColumns, "need at least 2 variables");
  }

  const std::size_t p = names.size();
  std::vector<std::vector<double>> cols(p);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t row = li;
    const std::vector<std::string_view> fields = split_fields(lines[li]);
    if (fields.size() != p) {
      if (fields.size() == 1 && fields.front().empty()) continue;  // blank line
      throw Error(ErrorKind::RaggedRow,
                  "row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(p),
                  row);
    }
    if (std::any_of(fields.begin(), fields.end(), is_missing)) {
      if (opts.drop_incomplete_rows) continue;
      const std::size_t j = static_cast<std::size_t>(
          std::find_if(fields.begin(), fields.end(), is_missing) - fields.begin());
      throw Error(ErrorKind::MissingValue,
                  "missing value at row " + std::to_string(row) + ", column '" + names[j] +
                      "'",
                  row, names[j]);
    }
    for (std::size_t j = 0; j < p; ++j) {
      std::string_view cell = fields[j];
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        if (ec == std::errc::result_out_of_range) {
          throw Error(ErrorKind::NonFinite,
                      "value out of range at row " + std::to_string(row) + ", column '" +
                          names[j] + "'",
                      row, names[j]);
        }
        throw Error(ErrorKind::NonNumericCell,
                    "non-numeric value '" + std::string(fields[j]) + "' at row " +
                        std::to_string(row) + ", column '" + names[j] + "'",
                    row, names[j]);
      }
      if (!std::isfinite(value)) {
        throw Error(ErrorKind::NonFinite,
                    "non-finite value at row " + std::to_string(row) + ", column '" +
                        names[j] + "'",
                    row, names[j]);
      }
      cols[j].push_back(value);
    }
  }
  if (cols.front().size() < 2) {
    throw Error(ErrorKind::TooFewRows, "need at least 2 observations");
  }
  return Dataset(std::move(names), std::move(cols));
}

std::string format_csv(const Dataset& d) {
  std::string out;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (j) out += ',';
    out += d.names()[j];
  }
  out += '\n';
  char buf[64];
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (j) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, d.at(i, j));
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

MomentSummary::MomentSummary(std::vector<std::string> names, std::vector<double> means,
                             SquareSym cov, SquareSym corr, std::vector<double> stds,
                             std::size_t n)
    : names_(std::move(names)),
      means_(std::move(means)),
      cov_(std::move(cov)),
      corr_(std::move(corr)),
      stds_(std::move(stds)),
      n_(n) {}

MomentSummary MomentSummary::from_covariance(std::vector<std::string> names,
                                             std::vector<double> means, SquareSym cov,
                                             std::size_t n) {
  const std::size_t p = cov.dim();
  if (means.size() != p || names.size() != p) {
    throw Error(ErrorKind::InvalidArgument, "means, names and covariance disagree in size");
  }
  if (n < 2) throw Error(ErrorKind::TooFewRows, "need at least 2 observations");
  std::vector<double> stds(p);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(cov(j, j) >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "negative variance for '" + names[j] + "'", j,
                  names[j]);
    }
    stds[j] = std::sqrt(cov(j, j));
  }
  SquareSym corr(p);
  for (std::size_t i = 0; i < p; ++i) {
    corr.set(i, i, 1.0);
    for (std::size_t j = 0; j < i; ++j) {
      const bool defined = stds[i] > 0.0 && stds[j] > 0.0;
      corr.set(i, j, defined ? cov(i, j) / (stds[i] * stds[j]) : 0.0);
    }
  }
  return MomentSummary(std::move(names), std::move(means), std::move(cov), std::move(corr),
                       std::move(stds), n);
}

MomentSummary summarize(const Dataset& d) {
  const std::size_t p = d.cols();
  const std::size_t n = d.rows();
  std::vector<double> means(p);
  std::vector<std::vector<double>> dev(p, std::vector<double>(n));
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = d.column(j);
    const bool constant =
        std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); });
    if (constant) {
      means[j] = col.front();
      continue;  // deviations stay exactly zero
    }
    double s = 0.0;
    for (double v : col) s += v;
    means[j] = s / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) dev[j][i] = col[i] - means[j];
  }
  SquareSym cov(p);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += dev[i][k] * dev[j][k];
      cov.set(i, j, s / denom);
    }
  }
  return MomentSummary::from_covariance(d.names(), std::move(means), std::move(cov), n);
}

Dataset standardize(const Dataset& d) {
  const MomentSummary s = summarize(d);
  std::vector<std::vector<double>> cols(d.cols());
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (s.zero_variance(j)) {
      throw Error(ErrorKind::ZeroVariance,
                  "zero variance in column '" + d.names()[j] + "'", j, d.names()[j]);
    }
    const auto col = d.column(j);
    cols[j].reserve(col.size());
    for (double v : col) cols[j].push_back((v - s.means()[j]) / s.stds()[j]);
  }
  return Dataset(d.names(), std::move(cols));
}

}  // namespace impartial
