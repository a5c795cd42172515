#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dealer {

/// Post-deal adjustment rule applied to the buyer and the sellers.
enum class Policy {
  Baseline,        // buyer -δ, sellers +δ/n
  Premeditated,    // buyer -δ(1+ε_b), sellers per SellerTermMode
  Unpremeditated,  // buyer -δ, sellers +δ/μ_n
  Mingled,         // buyer -δ(1+ε_b), sellers +δ/μ_n
};

/// Seller increment used by the premeditated policy.
enum class SellerTermMode {
  CompensationConsistent,  // δ(1+ε_s)/n, keeps ΣΔ = δ(ε_s - ε_b)
  StrictPaper,             // δ·ε_s/n, as printed
};

std::string_view to_string(Policy p);
std::string_view to_string(SellerTermMode m);
Policy parse_policy(std::string_view s);
SellerTermMode parse_seller_term_mode(std::string_view s);

/// Static constants of one market. Defaults are the reference
/// parameterization N=100, L=1, α=0.01, δ=0.4.
struct ModelParams {
  std::size_t n_dealers{100};
  double spread{1.0};
  double greed{0.4};
  double expectation_half_width{0.01};
  double eps_buyer{0.0};
  double eps_seller{0.0};
  Policy policy{Policy::Baseline};
  std::optional<std::size_t> mu_window{};
  SellerTermMode seller_term_mode{SellerTermMode::CompensationConsistent};
  std::uint64_t seed{1};

  bool operator==(const ModelParams&) const = default;
};

/// Throws UsageError if any invariant is violated. The ε sign constraints
/// only apply to the premeditated policy, and only once an intent is
/// implied by a nonzero ε.
void validate(const ModelParams& params);

/// Expected change of Σ B_i per deal implied by the Δ rule alone. Zero for
/// the μ_n-based policies, whose imbalance is realized rather than fixed.
double predicted_drift_per_deal(const ModelParams& params);

}  // namespace dealer
