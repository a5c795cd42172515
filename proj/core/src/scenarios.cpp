#include "dealer/scenarios.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "dealer/error.hpp"

namespace dealer {
namespace {

RunConfig reference_config(Policy policy) {
  RunConfig c;
  c.params.n_dealers = 100;
  c.params.spread = 1.0;
  c.params.expectation_half_width = 0.01;
  c.params.greed = 0.4;
  c.params.policy = policy;
  c.params.seed = 1;
  c.max_steps = 10'000'000;
  c.target_deals = 15'000;
  return c;
}

ScenarioPreset make(std::string name, Policy policy, double eps_buyer,
                    ExpectedBehavior behavior, std::string notes) {
  ScenarioPreset p{std::move(name), reference_config(policy), behavior,
                   std::move(notes)};
  p.config.params.eps_buyer = eps_buyer;
  return p;
}

std::vector<ScenarioPreset> build_catalog() {
  std::vector<ScenarioPreset> cat;
  cat.push_back(make("fig4-baseline", Policy::Baseline, 0.0,
                     ExpectedBehavior::NoTrend,
                     "Fig. 4(a): original rule, price fluctuates without trend"));
  cat.push_back(make("fig5-up", Policy::Premeditated, -0.002,
                     ExpectedBehavior::MonotonicUp,
                     "Fig. 5: eps_buyer=-0.002, eps_seller=0, slow rise"));
  cat.push_back(make("fig5-down", Policy::Premeditated, 0.002,
                     ExpectedBehavior::MonotonicDown,
                     "Fig. 5: eps_buyer=0.002, eps_seller=0, slow decline"));
  cat.push_back(make("fig7-unpremeditated", Policy::Unpremeditated, 0.0,
                     ExpectedBehavior::EmergentTrends,
                     "Fig. 7: sellers use the full-history mean seller count"));
  auto windowed = make("fig7-windowed", Policy::Unpremeditated, 0.0,
                       ExpectedBehavior::EmergentTrends,
                       "Fig. 7 variant: mean of the last 100 seller counts");
  windowed.config.params.mu_window = 100;
  cat.push_back(std::move(windowed));
  cat.push_back(make("fig8-omega", Policy::Mingled, -0.031,
                     ExpectedBehavior::Mingled,
                     "Fig. 8(a) plot omega: eps_buyer=-0.031"));
  cat.push_back(make("fig8-lambda", Policy::Mingled, 0.031,
                     ExpectedBehavior::Mingled,
                     "Fig. 8(a) plot lambda: eps_buyer=0.031"));
  cat.push_back(make("fig8-gamma", Policy::Mingled, 0.0,
                     ExpectedBehavior::Mingled,
                     "Fig. 8 plot gamma: eps_buyer=0"));
  cat.push_back(make("fig8b-omega", Policy::Mingled, -0.0021,
                     ExpectedBehavior::Mingled,
                     "Fig. 8(b) plot omega: eps_buyer=-0.0021"));
  cat.push_back(make("fig8b-lambda", Policy::Mingled, 0.0021,
                     ExpectedBehavior::Mingled,
                     "Fig. 8(b) plot lambda: eps_buyer=0.0021"));
  cat.push_back(make("fig8c-omega", Policy::Mingled, -0.002,
                     ExpectedBehavior::Mingled,
                     "Fig. 8(c) plot omega: eps_buyer=-0.002"));
  cat.push_back(make("fig8c-lambda", Policy::Mingled, 0.002,
                     ExpectedBehavior::Mingled,
                     "Fig. 8(c) plot lambda: eps_buyer=0.002"));
  return cat;
}

}  // namespace

std::string_view to_string(ExpectedBehavior b) {
  switch (b) {
    case ExpectedBehavior::NoTrend: return "no_trend";
    case ExpectedBehavior::MonotonicUp: return "monotonic_up";
    case ExpectedBehavior::MonotonicDown: return "monotonic_down";
    case ExpectedBehavior::EmergentTrends: return "emergent_trends";
    case ExpectedBehavior::Mingled: return "mingled";
  }
  return "?";
}

const std::vector<ScenarioPreset>& preset_catalog() {
  static const std::vector<ScenarioPreset> catalog = build_catalog();
  return catalog;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : preset_catalog()) names.push_back(p.name);
  return names;
}

const ScenarioPreset& preset(std::string_view name) {
  const auto& cat = preset_catalog();
  const auto it = std::find_if(cat.begin(), cat.end(),
                               [&](const auto& p) { return p.name == name; });
  if (it != cat.end()) return *it;
  std::string msg = "unknown preset '" + std::string(name) + "'; available:";
  for (const auto& p : cat) msg += " " + p.name;
  throw UsageError(msg);
}

std::vector<SweepPoint> sweep(const RunConfig& base,
                              std::span<const double> eps_values,
                              std::span<const std::uint64_t> seeds) {
  if (eps_values.empty()) throw UsageError("sweep: empty eps list");
  if (seeds.empty()) throw UsageError("sweep: empty seed list");
  std::vector<SweepPoint> out;
  out.reserve(eps_values.size() * seeds.size());
  std::set<std::pair<double, std::uint64_t>> seen;
  for (double eps : eps_values) {
    for (std::uint64_t seed : seeds) {
      if (!seen.emplace(eps, seed).second) {
        throw UsageError("sweep: duplicate (eps, seed) pair");
      }
      SweepPoint pt{eps, seed, base};
      pt.config.params.eps_buyer = eps;
      pt.config.params.seed = seed;
      out.push_back(std::move(pt));
    }
  }
  return out;
}

}  // namespace dealer
