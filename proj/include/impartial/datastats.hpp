#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "impartial/symlin.hpp"

namespace impartial {

/// Named numeric columns, n observations by p variables. Construction
/// enforces n >= 2, p >= 2, finite values and unique non-empty names.
class Dataset {
 public:
  Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns);

  std::size_t rows() const noexcept { return columns_.front().size(); }
  std::size_t cols() const noexcept { return columns_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  double at(std::size_t row, std::size_t col) const { return columns_.at(col).at(row); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Row subset, repeats allowed (case resampling).
  Dataset select_rows(std::span<const std::size_t> rows) const;
  /// Copy with column `j` multiplied by `factor`.
  Dataset scale_column(std::size_t j, double factor) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

struct CsvOptions {
  /// Listwise deletion of rows with empty or "NA" cells instead of failing.
  bool drop_incomplete_rows = false;
};

/// Header row, comma separated, '.' decimal point. Row numbers in errors are
/// 1-based data rows (the header is row 0).
Dataset parse_csv(std::string_view text, const CsvOptions& opts = {});

/// Shortest round-trip formatting of every value.
std::string format_csv(const Dataset& d);

/// First and second sample moments. Covariance uses divisor n - 1.
/// Correlation entries touching a zero-variance column are stored as 0 and
/// reported undefined through corr_defined().
class MomentSummary {
 public:
  static MomentSummary from_covariance(std::vector<std::string> names,
                                       std::vector<double> means, SquareSym cov,
                                       std::size_t n);

  std::size_t dim() const noexcept { return means_.size(); }
  std::size_t n() const noexcept { return n_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& stds() const noexcept { return stds_; }
  const SquareSym& cov() const noexcept { return cov_; }
  const SquareSym& corr() const noexcept { return corr_; }
  bool zero_variance(std::size_t j) const { return stds_.at(j) == 0.0; }
  bool corr_defined(std::size_t i, std::size_t j) const {
    return !zero_variance(i) && !zero_variance(j);
  }

 private:
  MomentSummary(std::vector<std::string> names, std::vector<double> means,
                SquareSym cov, SquareSym corr, std::vector<double> stds,
                std::size_t n);

  std::vector<std::string> names_;
  std::vector<double> means_;
  SquareSym cov_;
  SquareSym corr_;
  std::vector<double> stds_;
  std::size_t n_;
};

MomentSummary summarize(const Dataset& d);

/// Throws ZeroVariance naming the first constant column.
Dataset standardize(const Dataset& d);

}  // namespace impartial
