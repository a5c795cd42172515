#include "dealer/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dealer/error.hpp"

namespace dealer {
namespace {

void require_outcome(const DealOutcome& outcome, std::size_t n_dealers) {
  if (outcome.sellers.empty()) {
    throw UsageError("deal outcome has no sellers");
  }
  if (outcome.buyer >= n_dealers) {
    throw UsageError("buyer index out of range");
  }
  for (std::size_t s : outcome.sellers) {
    if (s >= n_dealers || s == outcome.buyer) {
      throw UsageError("invalid seller index " + std::to_string(s));
    }
  }
}

std::vector<double> assemble(const DealOutcome& outcome, std::size_t n_dealers,
                             double buyer_delta, double seller_delta) {
  std::vector<double> deltas(n_dealers, 0.0);
  deltas[outcome.buyer] = buyer_delta;
  for (std::size_t s : outcome.sellers) deltas[s] = seller_delta;
  return deltas;
}

void require_mu(double mu_n) {
  if (!(mu_n >= 1.0)) {
    throw UsageError("mu_n must be >= 1, got " + std::to_string(mu_n));
  }
}

}  // namespace

bool deal_condition(std::span<const double> bids, double spread) {
  if (bids.empty()) throw UsageError("deal_condition: empty bid vector");
  const auto [lo, hi] = std::minmax_element(bids.begin(), bids.end());
  return *hi - *lo >= spread;
}

DealOutcome resolve_deal(std::span<const double> bids, double spread) {
  if (!deal_condition(bids, spread)) {
    throw UsageError("resolve_deal: deal condition not satisfied");
  }
  // max_element returns the first maximum, which is the tie-break rule.
  const auto top = std::max_element(bids.begin(), bids.end());
  DealOutcome out;
  out.buyer = static_cast<std::size_t>(top - bids.begin());
  out.price = *top;
  for (std::size_t j = 0; j < bids.size(); ++j) {
    if (j != out.buyer && out.price - bids[j] >= spread) out.sellers.push_back(j);
  }
  return out;
}

std::vector<double> delta_baseline(const DealOutcome& outcome, double greed,
                                   std::size_t n_dealers) {
  require_outcome(outcome, n_dealers);
  const double n = static_cast<double>(outcome.n_sellers());
  return assemble(outcome, n_dealers, -greed, greed / n);
}

std::vector<double> delta_premeditated(const DealOutcome& outcome, double greed,
                                       double eps_buyer, double eps_seller,
                                       SellerTermMode mode,
                                       std::size_t n_dealers) {
  require_outcome(outcome, n_dealers);
  const double n = static_cast<double>(outcome.n_sellers());
  const double seller = mode == SellerTermMode::CompensationConsistent
                            ? greed * (1.0 + eps_seller) / n
                            : greed * eps_seller / n;
  return assemble(outcome, n_dealers, -greed * (1.0 + eps_buyer), seller);
}

std::vector<double> delta_unpremeditated(const DealOutcome& outcome,
                                         double greed, double mu_n,
                                         std::size_t n_dealers) {
  require_mu(mu_n);
  require_outcome(outcome, n_dealers);
  return assemble(outcome, n_dealers, -greed, greed / mu_n);
}

std::vector<double> delta_mingled(const DealOutcome& outcome, double greed,
                                  double eps_buyer, double mu_n,
                                  std::size_t n_dealers) {
  require_mu(mu_n);
  require_outcome(outcome, n_dealers);
  return assemble(outcome, n_dealers, -greed * (1.0 + eps_buyer), greed / mu_n);
}

std::vector<double> delta_for_policy(const DealOutcome& outcome,
                                     const ModelParams& params, double mu_n) {
  switch (params.policy) {
    case Policy::Baseline:
      return delta_baseline(outcome, params.greed, params.n_dealers);
    case Policy::Premeditated:
      return delta_premeditated(outcome, params.greed, params.eps_buyer,
                                params.eps_seller, params.seller_term_mode,
                                params.n_dealers);
    case Policy::Unpremeditated:
      return delta_unpremeditated(outcome, params.greed, mu_n,
                                  params.n_dealers);
    case Policy::Mingled:
      return delta_mingled(outcome, params.greed, params.eps_buyer, mu_n,
                           params.n_dealers);
  }
  throw UsageError("unknown policy");
}

std::vector<double> apply_update(std::span<const double> bids,
                                 std::span<const double> deltas,
                                 std::span<const double> expectations) {
  std::vector<double> next(bids.begin(), bids.end());
  apply_update_in_place(next, deltas, expectations);
  return next;
}

void apply_update_in_place(std::span<double> bids,
                           std::span<const double> deltas,
                           std::span<const double> expectations) {
  if (bids.size() != deltas.size() || bids.size() != expectations.size()) {
    throw UsageError("apply_update: length mismatch (" +
                     std::to_string(bids.size()) + ", " +
                     std::to_string(deltas.size()) + ", " +
                     std::to_string(expectations.size()) + ")");
  }
  for (std::size_t i = 0; i < bids.size(); ++i) {
    bids[i] = bids[i] + deltas[i] + expectations[i];
  }
}

double ordered_sum(std::span<const double> values) {
  // Neumaier compensation; still strictly left to right.
  double total = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = total + v;
    if (std::fabs(total) >= std::fabs(v)) {
      carry += (total - t) + v;
    } else {
      carry += (v - t) + total;
    }
    total = t;
  }
  return total + carry;
}

}  // namespace dealer
