#include "dealer/params.hpp"

#include <cmath>
#include <string>

#include "dealer/error.hpp"

namespace dealer {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::Baseline: return "baseline";
    case Policy::Premeditated: return "premeditated";
    case Policy::Unpremeditated: return "unpremeditated";
    case Policy::Mingled: return "mingled";
  }
  return "?";
}

std::string_view to_string(SellerTermMode m) {
  switch (m) {
    case SellerTermMode::CompensationConsistent: return "compensation_consistent";
    case SellerTermMode::StrictPaper: return "strict_paper";
  }
  return "?";
}

Policy parse_policy(std::string_view s) {
  for (Policy p : {Policy::Baseline, Policy::Premeditated,
                   Policy::Unpremeditated, Policy::Mingled}) {
    if (s == to_string(p)) return p;
  }
  throw UsageError("unknown policy '" + std::string(s) +
                   "' (expected baseline|premeditated|unpremeditated|mingled)");
}

SellerTermMode parse_seller_term_mode(std::string_view s) {
  for (SellerTermMode m : {SellerTermMode::CompensationConsistent,
                           SellerTermMode::StrictPaper}) {
    if (s == to_string(m)) return m;
  }
  throw UsageError("unknown seller_term_mode '" + std::string(s) +
                   "' (expected compensation_consistent|strict_paper)");
}

void validate(const ModelParams& p) {
  auto fail = [](const std::string& what) { throw UsageError(what); };
  if (p.n_dealers < 2) fail("n_dealers must be >= 2");
  if (!std::isfinite(p.spread) || p.spread <= 0.0) fail("spread must be > 0");
  if (!std::isfinite(p.greed) || p.greed <= 0.0 || p.greed >= p.spread) {
    fail("greed must satisfy 0 < greed < spread");
  }
  if (!std::isfinite(p.expectation_half_width) ||
      p.expectation_half_width <= 0.0) {
    fail("expectation_half_width must be > 0");
  }
  if (!std::isfinite(p.eps_buyer) || !std::isfinite(p.eps_seller)) {
    fail("eps_buyer and eps_seller must be finite");
  }
  if (p.mu_window && *p.mu_window == 0) fail("mu_window must be >= 1");

  if (p.policy == Policy::Premeditated) {
    const bool upward = p.eps_buyer >= -1.0 && p.eps_buyer <= 0.0 &&
                        p.eps_seller >= 0.0;
    const bool downward = p.eps_buyer >= 0.0 && p.eps_buyer <= 1.0 &&
                          p.eps_seller <= 0.0;
    if (!upward && !downward) {
      fail("premeditated eps must be (-1<=eps_buyer<=0, eps_seller>=0) or "
           "(0<=eps_buyer<=1, eps_seller<=0)");
    }
  }
  if (p.policy == Policy::Mingled &&
      (p.eps_buyer < -1.0 || p.eps_buyer > 1.0)) {
    fail("mingled eps_buyer must lie in [-1, 1]");
  }
}

double predicted_drift_per_deal(const ModelParams& p) {
  switch (p.policy) {
    case Policy::Baseline:
      return 0.0;
    case Policy::Premeditated:
      return p.seller_term_mode == SellerTermMode::CompensationConsistent
                 ? p.greed * (p.eps_seller - p.eps_buyer)
                 : p.greed * (p.eps_seller - 1.0 - p.eps_buyer);
    case Policy::Unpremeditated:
    case Policy::Mingled:
      return 0.0;
  }
  return 0.0;
}

}  // namespace dealer
