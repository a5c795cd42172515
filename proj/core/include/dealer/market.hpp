#pragma once

// Deal resolution and the post-deal adjustment rules. Everything here is a
// pure function of its arguments.

#include <cstddef>
#include <span>
#include <vector>

#include "dealer/params.hpp"

namespace dealer {

/// One resolved deal: the max-bid buyer, every dealer at least L below it,
/// and the transaction price (the buyer's bid).
struct DealOutcome {
  std::size_t buyer{0};
  std::vector<std::size_t> sellers;  // ascending dealer index
  double price{0.0};

  std::size_t n_sellers() const noexcept { return sellers.size(); }
  bool operator==(const DealOutcome&) const = default;
};

/// max(bids) - min(bids) >= spread. The boundary counts as a deal.
bool deal_condition(std::span<const double> bids, double spread);

/// Buyer is the lowest-index holder of the maximum bid.
DealOutcome resolve_deal(std::span<const double> bids, double spread);

std::vector<double> delta_baseline(const DealOutcome& outcome, double greed,
                                   std::size_t n_dealers);

std::vector<double> delta_premeditated(const DealOutcome& outcome, double greed,
                                       double eps_buyer, double eps_seller,
                                       SellerTermMode mode,
                                       std::size_t n_dealers);

/// Sellers rise by greed / mu_n instead of greed / n. Requires mu_n >= 1.
std::vector<double> delta_unpremeditated(const DealOutcome& outcome,
                                         double greed, double mu_n,
                                         std::size_t n_dealers);

std::vector<double> delta_mingled(const DealOutcome& outcome, double greed,
                                  double eps_buyer, double mu_n,
                                  std::size_t n_dealers);

/// Dispatches on params.policy. mu_n is ignored by Baseline/Premeditated.
std::vector<double> delta_for_policy(const DealOutcome& outcome,
                                     const ModelParams& params, double mu_n);

/// B(t+1) = B(t) + Δ(t) + a, element-wise.
std::vector<double> apply_update(std::span<const double> bids,
                                 std::span<const double> deltas,
                                 std::span<const double> expectations);

/// In-place form used by the time-step loop; same arithmetic as
/// apply_update.
void apply_update_in_place(std::span<double> bids,
                           std::span<const double> deltas,
                           std::span<const double> expectations);

/// Compensated sum in ascending index order.
double ordered_sum(std::span<const double> values);

}  // namespace dealer
