#include "dealer/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "dealer/error.hpp"
#include "dealer/market.hpp"
#include "dealer/rng.hpp"

namespace dealer {

void validate(const RunConfig& config) {
  validate(config.params);
  if (config.max_steps < 1) throw UsageError("max_steps must be >= 1");
}

InitialDealers init_dealers(std::uint64_t seed, std::size_t n_dealers,
                            double spread, double expectation_half_width) {
  if (n_dealers < 2) throw UsageError("n_dealers must be >= 2");
  if (!(spread > 0.0)) throw UsageError("spread must be > 0");
  if (!(expectation_half_width >= 0.0)) {
    throw UsageError("expectation_half_width must be >= 0");
  }

  // Bids first, then expectations, from one stream.
  Xoshiro256 rng(seed);
  InitialDealers out;
  out.bids.reserve(n_dealers);
  out.expectations.reserve(n_dealers);
  for (std::size_t i = 0; i < n_dealers; ++i) {
    out.bids.push_back(rng.next_symmetric(spread));
  }
  if (expectation_half_width == 0.0) {
    out.expectations.assign(n_dealers, 0.0);
    return out;
  }
  for (std::size_t i = 0; i < n_dealers; ++i) {
    out.expectations.push_back(rng.next_symmetric(expectation_half_width));
  }
  const double mean =
      ordered_sum(out.expectations) / static_cast<double>(n_dealers);
  for (double& a : out.expectations) a -= mean;
  return out;
}

std::optional<double> mu_of_history(std::span<const std::uint32_t> history,
                                    std::optional<std::size_t> window) {
  if (history.empty()) return std::nullopt;
  std::size_t count = history.size();
  if (window) count = std::min(count, *window);
  if (count == 0) return std::nullopt;
  std::uint64_t total = 0;
  for (std::size_t i = history.size() - count; i < history.size(); ++i) {
    total += history[i];
  }
  return static_cast<double>(total) / static_cast<double>(count);
}

std::uint64_t state_digest(std::span<const double> bids) noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (double b : bids) {
    const auto bits = std::bit_cast<std::uint64_t>(b);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xFFu;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

MarketState::MarketState(std::vector<double> bids,
                         std::vector<double> expectations,
                         std::optional<std::size_t> mu_window)
    : bids_(std::move(bids)),
      expectations_(std::move(expectations)),
      deltas_(bids_.size(), 0.0),
      mu_window_(mu_window) {
  if (bids_.size() < 2) throw UsageError("market needs at least 2 dealers");
  if (bids_.size() != expectations_.size()) {
    throw UsageError("bids and expectations differ in length");
  }
  if (mu_window_ && *mu_window_ == 0) throw UsageError("mu_window must be >= 1");
  const double n = static_cast<double>(expectations_.size());
  if (std::fabs(ordered_sum(expectations_)) > 1e-12 * n) {
    throw UsageError("expectations must sum to zero");
  }
  price_ = *std::max_element(bids_.begin(), bids_.end());
}

MarketState MarketState::from_seed(const ModelParams& params) {
  auto init = init_dealers(params.seed, params.n_dealers, params.spread,
                           params.expectation_half_width);
  return MarketState(std::move(init.bids), std::move(init.expectations),
                     params.mu_window);
}

std::optional<double> MarketState::current_mu() const noexcept {
  if (history_.empty()) return std::nullopt;
  if (mu_window_) {
    const std::size_t count = std::min(history_.size(), *mu_window_);
    return static_cast<double>(window_total_) / static_cast<double>(count);
  }
  return static_cast<double>(history_total_) /
         static_cast<double>(history_.size());
}

void MarketState::push_seller_count(std::uint32_t n) {
  history_.push_back(n);
  history_total_ += n;
  if (mu_window_) {
    window_total_ += n;
    if (history_.size() > *mu_window_) {
      window_total_ -= history_[history_.size() - 1 - *mu_window_];
    }
  }
}

std::optional<DealRecord> MarketState::step(const ModelParams& params) {
  if (params.n_dealers != bids_.size()) {
    throw UsageError("params.n_dealers does not match market size");
  }
  if (params.mu_window != mu_window_) {
    throw UsageError("params.mu_window does not match market state");
  }

  std::optional<DealRecord> record;
  if (!deal_condition(bids_, params.spread)) {
    std::fill(deltas_.begin(), deltas_.end(), 0.0);
    apply_update_in_place(bids_, deltas_, expectations_);
  } else {
    const DealOutcome outcome = resolve_deal(bids_, params.spread);
    const auto n = static_cast<std::uint32_t>(outcome.n_sellers());
    double mu = static_cast<double>(n);
    if (params.policy == Policy::Unpremeditated ||
        params.policy == Policy::Mingled) {
      // Past deals only; the first deal falls back to its own n.
      mu = current_mu().value_or(static_cast<double>(n));
    }
    const std::vector<double> deltas = delta_for_policy(outcome, params, mu);
    apply_update_in_place(bids_, deltas, expectations_);
    push_seller_count(n);

    price_ = outcome.price;
    last_deal_step_ = step_;
    record = DealRecord{
        .deal_index = history_.size(),
        .step = step_,
        .price = outcome.price,
        .buyer = outcome.buyer,
        .n_sellers = n,
        .mu_n_used = mu,
        .sum_bids = ordered_sum(bids_),
    };
  }
  ++step_;
  return record;
}

TickSeries run(const RunConfig& config) {
  validate(config);

  TickSeries series;
  series.config_echo = config;
  series.prng_algorithm = std::string(Xoshiro256::kAlgorithmId);

  MarketState state = MarketState::from_seed(config.params);
  series.initial_price = state.price();
  series.initial_sum_bids = ordered_sum(state.bids());

  const std::uint64_t target =
      config.target_deals.value_or(std::numeric_limits<std::uint64_t>::max());
  if (config.target_deals) {
    series.records.reserve(static_cast<std::size_t>(
        std::min<std::uint64_t>({*config.target_deals, config.max_steps, 1u << 20})));
  }

  while (state.step_count() < config.max_steps && state.deals_done() < target) {
    auto record = state.step(config.params);
    if (config.record_every_step) series.step_prices.push_back(state.price());
    if (record) series.records.push_back(*record);
  }

  series.steps_run = state.step_count();
  series.final_state_digest = state_digest(state.bids());
  series.no_deals = series.records.empty() && series.steps_run > 0;
  return series;
}

}  // namespace dealer
