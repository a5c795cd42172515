#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "dealer/sim.hpp"

namespace dealer {

struct SeriesPoint {
  double index{0.0};
  double price{0.0};
};

struct OlsFit {
  double slope{0.0};
  double intercept{0.0};
  double r_squared{0.0};  // 0 by convention when prices have zero variance
};

/// Least-squares line price = intercept + slope * index. Needs at least two
/// points with distinct indices.
OlsFit ols_fit(std::span<const SeriesPoint> points);

/// Price path of a simulated series, indexed by deal_index.
std::vector<SeriesPoint> price_points(std::span<const DealRecord> records);

struct TrendReport {
  std::size_t n_deals{0};
  /// Fewer than two deals: slope, intercept and r² are NaN.
  bool degenerate{false};
  double ols_slope{0.0};
  double ols_intercept{0.0};
  double r_squared{0.0};
  double detrended_range{0.0};
  double price_std{0.0};
  // Absent for external series that carry no seller counts.
  std::optional<double> seller_count_min;
  std::optional<double> seller_count_max;
  std::optional<double> seller_count_mean;
  /// max_k |m_k - m_k0| / m_k0 for the running mean m_k of seller counts,
  /// k0 = ceil(n_deals / 10).
  std::optional<double> mu_convergence;
  /// max_k |sum_bids_k - (initial + k * drift)|.
  std::optional<double> conservation_residual;

  bool operator==(const TrendReport&) const = default;
};

/// Throws UsageError on an empty series.
TrendReport trend_report(const TickSeries& series,
                         double predicted_drift_per_deal);

/// Price-only report for external tick data.
TrendReport trend_report(std::span<const SeriesPoint> points);

struct ExternalSeries {
  std::vector<SeriesPoint> points;
  std::size_t nonmonotonic_dropped{0};
  std::vector<std::size_t> bad_lines;  // 1-based line numbers
  bool had_header{false};
};

/// Two-column CSV (index_or_timestamp, price) with an optional header line.
/// Rows whose index does not increase are dropped and counted. Throws
/// LoadError if the file is unreadable, has no data, or the fraction of
/// malformed rows exceeds bad_row_tolerance.
ExternalSeries load_external_series(const std::filesystem::path& path,
                                    double bad_row_tolerance = 0.0);

}  // namespace dealer
