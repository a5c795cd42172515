#include "dealer/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "dealer/error.hpp"

namespace dealer {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<SeriesPoint> parse_row(std::string_view line) {
  const auto comma = line.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  const auto rest = line.substr(comma + 1);
  if (rest.find(',') != std::string_view::npos) return std::nullopt;
  const auto index = parse_double(line.substr(0, comma));
  const auto price = parse_double(rest);
  if (!index || !price) return std::nullopt;
  return SeriesPoint{*index, *price};
}

// Shared price statistics: fit, residual range, population std.
void fill_price_stats(std::span<const SeriesPoint> points, TrendReport& r) {
  r.n_deals = points.size();
  if (points.size() < 2) {
    r.degenerate = true;
    r.ols_slope = r.ols_intercept = r.r_squared = kNaN;
    r.detrended_range = 0.0;
    r.price_std = 0.0;
    return;
  }
  const OlsFit fit = ols_fit(points);
  r.ols_slope = fit.slope;
  r.ols_intercept = fit.intercept;
  r.r_squared = fit.r_squared;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double mean = 0.0;
  for (const auto& p : points) {
    const double resid = p.price - (fit.intercept + fit.slope * p.index);
    lo = std::min(lo, resid);
    hi = std::max(hi, resid);
    mean += p.price;
  }
  mean /= static_cast<double>(points.size());
  double ss = 0.0;
  for (const auto& p : points) ss += (p.price - mean) * (p.price - mean);
  r.detrended_range = hi - lo;
  r.price_std = std::sqrt(ss / static_cast<double>(points.size()));
}

}  // namespace

OlsFit ols_fit(std::span<const SeriesPoint> points) {
  if (points.size() < 2) throw UsageError("ols_fit needs at least 2 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.index;
    my += p.price;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = p.index - mx;
    const double dy = p.price - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw UsageError("ols_fit: zero variance in index");

  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 0.0;
  } else {
    fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return fit;
}

std::vector<SeriesPoint> price_points(std::span<const DealRecord> records) {
  std::vector<SeriesPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({static_cast<double>(r.deal_index), r.price});
  }
  return out;
}

TrendReport trend_report(const TickSeries& series,
                         double predicted_drift_per_deal) {
  if (series.records.empty()) throw UsageError("trend_report: empty series");
  const auto& recs = series.records;

  TrendReport r;
  const auto points = price_points(recs);
  fill_price_stats(points, r);

  double smin = std::numeric_limits<double>::infinity();
  double smax = 0.0;
  std::uint64_t stotal = 0;
  std::vector<double> running_mean;
  running_mean.reserve(recs.size());
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const auto n = recs[k].n_sellers;
    smin = std::min(smin, static_cast<double>(n));
    smax = std::max(smax, static_cast<double>(n));
    stotal += n;
    running_mean.push_back(static_cast<double>(stotal) /
                           static_cast<double>(k + 1));
  }
  r.seller_count_min = smin;
  r.seller_count_max = smax;
  r.seller_count_mean = running_mean.back();

  const std::size_t k0 = (recs.size() + 9) / 10;  // ceil(n/10), >= 1
  const double ref = running_mean[k0 - 1];
  double drift = 0.0;
  for (std::size_t k = k0 - 1; k < running_mean.size(); ++k) {
    drift = std::max(drift, std::fabs(running_mean[k] - ref) / ref);
  }
  r.mu_convergence = drift;

  double residual = 0.0;
  for (const auto& rec : recs) {
    const double predicted =
        series.initial_sum_bids +
        static_cast<double>(rec.deal_index) * predicted_drift_per_deal;
    residual = std::max(residual, std::fabs(rec.sum_bids - predicted));
  }
  r.conservation_residual = residual;
  return r;
}

TrendReport trend_report(std::span<const SeriesPoint> points) {
  if (points.empty()) throw UsageError("trend_report: empty series");
  TrendReport r;
  fill_price_stats(points, r);
  return r;
}

ExternalSeries load_external_series(const std::filesystem::path& path,
                                    double bad_row_tolerance) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());

  ExternalSeries out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t data_rows = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto row = parse_row(view);
    if (first_content) {
      first_content = false;
      if (!row) {
        out.had_header = true;
        continue;
      }
    }
    ++data_rows;
    if (!row) {
      out.bad_lines.push_back(line_no);
      continue;
    }
    if (!out.points.empty() && row->index <= out.points.back().index) {
      ++out.nonmonotonic_dropped;
      continue;
    }
    out.points.push_back(*row);
  }
  if (in.bad()) throw LoadError("read error on " + path.string());

  if (!out.bad_lines.empty() &&
      static_cast<double>(out.bad_lines.size()) >
          bad_row_tolerance * static_cast<double>(data_rows)) {
    std::ostringstream msg;
    msg << path.string() << ": " << out.bad_lines.size()
        << " malformed row(s) at line(s)";
    const std::size_t shown = std::min<std::size_t>(out.bad_lines.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg << ' ' << out.bad_lines[i];
    if (shown < out.bad_lines.size()) msg << " ...";
    throw LoadError(msg.str());
  }
  if (out.points.empty()) throw LoadError(path.string() + ": no data rows");
  return out;
}

}  // namespace dealer
