#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dealer/sim.hpp"

namespace dealer {

enum class ExpectedBehavior {
  NoTrend,
  MonotonicUp,
  MonotonicDown,
  EmergentTrends,
  Mingled,
};

std::string_view to_string(ExpectedBehavior b);

struct ScenarioPreset {
  std::string name;
  RunConfig config;
  ExpectedBehavior expected_behavior{ExpectedBehavior::NoTrend};
  std::string notes;
};

/// All presets share N=100, L=1, α=0.01, δ=0.4, target_deals=15000,
/// max_steps=10^7.
const std::vector<ScenarioPreset>& preset_catalog();

/// Throws UsageError listing the catalog for an unknown name.
const ScenarioPreset& preset(std::string_view name);

std::vector<std::string> preset_names();

struct SweepPoint {
  double eps_buyer{0.0};
  std::uint64_t seed{0};
  RunConfig config;
};

/// eps_values x seeds applied to base.params.eps_buyer / seed; eps is the
/// outer loop. Repeated eps or seed values are a UsageError.
std::vector<SweepPoint> sweep(const RunConfig& base,
                              std::span<const double> eps_values,
                              std::span<const std::uint64_t> seeds);

}  // namespace dealer
