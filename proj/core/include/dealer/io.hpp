#pragma once

// Tick CSV, run manifests and config files.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dealer/analysis.hpp"
#include "dealer/sim.hpp"

namespace dealer {

inline constexpr std::string_view kTickCsvHeader =
    "deal_index,step,price,buyer,n_sellers,mu_n,sum_bids";

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

void write_tick_csv(std::ostream& out, std::span<const DealRecord> records);

/// Reads the internal tick schema. Throws LoadError naming the offending
/// line(s) on any malformed row or header mismatch.
std::vector<DealRecord> read_tick_csv(const std::filesystem::path& path);

/// Keys accepted by apply_setting and config files.
const std::vector<std::string_view>& config_keys();

/// Applies one key=value override; throws UsageError on an unknown key or
/// an unparseable value. Use "none" to clear mu_window / target_deals.
void apply_setting(RunConfig& config, std::string_view key,
                   std::string_view value);

/// Splits "key=value" and forwards to apply_setting.
void apply_assignment(RunConfig& config, std::string_view assignment);

/// Flat JSON object of config keys. A manifest (object with a "config"
/// member) is accepted too, in which case only that member is read.
/// Unknown keys are rejected. Keys not present keep their value in base.
RunConfig parse_config_json(std::string_view text, RunConfig base);

/// True when the config (or the manifest's "config" member) names `key`.
bool config_json_has_key(std::string_view text, std::string_view key);

std::string config_to_json(const RunConfig& config);

struct RunManifest {
  RunConfig config;
  std::string prng_algorithm;
  std::uint64_t final_state_digest{0};
  double initial_price{0.0};
  double initial_sum_bids{0.0};
  double predicted_drift_per_deal{0.0};
  std::uint64_t n_deals{0};
  std::uint64_t steps_run{0};
  bool no_deals{false};
  std::string preset;
  std::vector<std::string> overrides;
};

RunManifest make_manifest(const TickSeries& series, std::string preset,
                          std::vector<std::string> overrides);
std::string manifest_to_json(const RunManifest& manifest);
RunManifest parse_manifest_json(std::string_view text);

/// out.csv -> out.manifest.json
std::filesystem::path manifest_path_for(const std::filesystem::path& csv);

/// Rebuilds the analysable part of a TickSeries from a tick CSV and its
/// manifest.
TickSeries series_from_files(std::vector<DealRecord> records,
                             const RunManifest& manifest);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dealer
