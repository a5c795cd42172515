#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "dealer/analysis.hpp"

namespace dealer::cli {

enum ExitCode : int {
  kOk = 0,
  kRunFailed = 1,
  kUsage = 2,
  kIo = 3,
};

/// Entry point for `dealer_sim simulate|sweep|analyze`. args[0] is the
/// program name.
int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err);

/// Column names of the sweep summary CSV, in order.
std::string summary_header();

/// Report fields rendered for the summary CSV; n/a fields are empty.
std::string report_csv_fields(const TrendReport& report);

/// Single-line JSON record of a report.
std::string report_json_line(const TrendReport& report);

/// Multi-line aligned text rendering.
std::string report_text(const TrendReport& report);

}  // namespace dealer::cli
