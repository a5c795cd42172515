#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dealer/params.hpp"

namespace dealer {

struct RunConfig {
  ModelParams params{};
  std::uint64_t max_steps{10'000'000};
  /// Stop once this many deals are done; 0 yields an empty series.
  std::optional<std::uint64_t> target_deals{};
  /// Also keep P(t) for every step, not only at deals.
  bool record_every_step{false};

  bool operator==(const RunConfig&) const = default;
};

void validate(const RunConfig& config);

struct DealRecord {
  std::uint64_t deal_index{0};  // 1-based, contiguous
  std::uint64_t step{0};        // step counter value when the deal happened
  double price{0.0};
  std::size_t buyer{0};
  std::size_t n_sellers{0};
  double mu_n_used{0.0};
  double sum_bids{0.0};  // Σ B_i after the update

  bool operator==(const DealRecord&) const = default;
};

struct TickSeries {
  std::vector<DealRecord> records;
  RunConfig config_echo{};
  std::string prng_algorithm;
  std::uint64_t final_state_digest{0};
  double initial_price{0.0};     // max bid at t = 0
  double initial_sum_bids{0.0};  // Σ B_i at t = 0
  std::uint64_t steps_run{0};
  /// Set when max_steps elapsed without a single deal.
  bool no_deals{false};
  /// P(t) per step; populated only when record_every_step is set.
  std::vector<double> step_prices;
};

struct InitialDealers {
  std::vector<double> bids;
  std::vector<double> expectations;
};

/// Bids i.i.d. on (-spread, spread); expectations i.i.d. on
/// (-half_width, half_width), then shifted to zero mean. half_width = 0
/// gives all-zero expectations.
InitialDealers init_dealers(std::uint64_t seed, std::size_t n_dealers,
                            double spread, double expectation_half_width);

/// Mean of the last `window` entries (all entries without a window);
/// nullopt for an empty history.
std::optional<double> mu_of_history(std::span<const std::uint32_t> history,
                                    std::optional<std::size_t> window);

/// FNV-1a over the little-endian IEEE-754 bytes of each bid.
std::uint64_t state_digest(std::span<const double> bids) noexcept;

class MarketState {
 public:
  /// Throws UsageError when the vectors differ in length or the
  /// expectations do not sum to zero within 1e-12 * N.
  MarketState(std::vector<double> bids, std::vector<double> expectations,
              std::optional<std::size_t> mu_window = std::nullopt);

  static MarketState from_seed(const ModelParams& params);

  std::span<const double> bids() const noexcept { return bids_; }
  std::span<const double> expectations() const noexcept {
    return expectations_;
  }
  double price() const noexcept { return price_; }
  std::optional<std::uint64_t> last_deal_step() const noexcept {
    return last_deal_step_;
  }
  std::span<const std::uint32_t> seller_count_history() const noexcept {
    return history_;
  }
  std::uint64_t step_count() const noexcept { return step_; }
  std::uint64_t deals_done() const noexcept { return history_.size(); }

  /// μ_n over past deals, same value as mu_of_history(history, window).
  std::optional<double> current_mu() const noexcept;

  /// One time step: resolve a deal if the condition holds, apply Δ and the
  /// expectations, advance the step counter.
  std::optional<DealRecord> step(const ModelParams& params);

 private:
  void push_seller_count(std::uint32_t n);

  std::vector<double> bids_;
  std::vector<double> expectations_;
  std::vector<double> deltas_;
  double price_{0.0};
  std::optional<std::uint64_t> last_deal_step_{};
  std::vector<std::uint32_t> history_;
  std::optional<std::size_t> mu_window_{};
  std::uint64_t history_total_{0};
  std::uint64_t window_total_{0};
  std::uint64_t step_{0};
};

/// Runs from seeded initial conditions until max_steps or target_deals,
/// whichever comes first. Identical configs give identical series.
TickSeries run(const RunConfig& config);

}  // namespace dealer
