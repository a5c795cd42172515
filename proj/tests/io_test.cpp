#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "dealer/error.hpp"
#include "dealer/io.hpp"
#include "dealer/rng.hpp"
#include "dealer/scenarios.hpp"
#include "doctest.h"
#include "test_util.hpp"

TEST_SUITE("io") {
  TEST_CASE("format_double round-trips arbitrary bit patterns") {
    dealer::Xoshiro256 rng(77);
    for (int i = 0; i < 20'000; ++i) {
      const double v = std::bit_cast<double>(rng.next_u64());
      if (!std::isfinite(v)) continue;
      const auto text = dealer::format_double(v);
      double back = 0.0;
      std::from_chars(text.data(), text.data() + text.size(), back);
      REQUIRE(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v));
    }
    CHECK(dealer::format_double(0.1) == "0.1");
    CHECK(dealer::format_double(-0.002) == "-0.002");
  }

  TEST_CASE("tick CSV round trip") {
    auto c = dealer::preset("fig7-unpremeditated").config;
    c.target_deals = 2'000;
    const auto series = dealer::run(c);
    test_util::TempDir dir("ticks");
    std::ostringstream ss;
    dealer::write_tick_csv(ss, series.records);
    CHECK(ss.str().rfind(std::string(dealer::kTickCsvHeader) + "\n", 0) == 0);
    const auto path = dir.write("t.csv", ss.str());
    CHECK(dealer::read_tick_csv(path) == series.records);
  }

  TEST_CASE("tick CSV diagnostics") {
    test_util::TempDir dir("badticks");
    const std::string header = std::string(dealer::kTickCsvHeader) + "\n";
    auto expect_error = [&](const std::string& body, const std::string& needle) {
      const auto p = dir.write("x.csv", body);
      try {
        dealer::read_tick_csv(p);
        FAIL("expected LoadError");
      } catch (const dealer::LoadError& e) {
        CAPTURE(e.what());
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
      }
    };
    expect_error("", "empty");
    expect_error("a,b\n", ":1:");
    expect_error(header + "1,0,0.5,0,1,1,0.1\n2,3,abc,0,1,1,0.1\n", ":3:");
    expect_error(header + "1,0,0.5,0,1,1\n", ":2: expected 7 fields");
    expect_error(header + "2,0,0.5,0,1,1,0.1\n", "contiguous");
    expect_error(header + "1,5,0.5,0,1,1,0.1\n2,5,0.5,0,1,1,0.1\n", "step");
    CHECK_THROWS_AS(dealer::read_tick_csv(dir.path() / "none.csv"),
                    dealer::LoadError);
  }

  TEST_CASE("apply_setting") {
    dealer::RunConfig c;
    dealer::apply_setting(c, "eps_buyer", "-0.002");
    dealer::apply_setting(c, "policy", "mingled");
    dealer::apply_setting(c, "mu_window", "100");
    dealer::apply_setting(c, "seller_term_mode", "strict_paper");
    dealer::apply_setting(c, "seed", "18446744073709551615");
    dealer::apply_assignment(c, "target_deals=123");
    dealer::apply_assignment(c, "record_every_step=true");
    CHECK(c.params.eps_buyer == -0.002);
    CHECK(c.params.policy == dealer::Policy::Mingled);
    CHECK(c.params.mu_window == 100u);
    CHECK(c.params.seller_term_mode == dealer::SellerTermMode::StrictPaper);
    CHECK(c.params.seed == UINT64_MAX);
    CHECK(c.target_deals == 123u);
    CHECK(c.record_every_step);

    dealer::apply_setting(c, "mu_window", "none");
    CHECK_FALSE(c.params.mu_window.has_value());

    CHECK_THROWS_AS(dealer::apply_setting(c, "colour", "1"), dealer::UsageError);
    CHECK_THROWS_AS(dealer::apply_setting(c, "n_dealers", "1.5"), dealer::UsageError);
    CHECK_THROWS_AS(dealer::apply_setting(c, "greed", "abc"), dealer::UsageError);
    CHECK_THROWS_AS(dealer::apply_setting(c, "policy", "random"), dealer::UsageError);
    CHECK_THROWS_AS(dealer::apply_assignment(c, "seed"), dealer::UsageError);
  }

  TEST_CASE("config JSON is strict and round-trips") {
    auto c = dealer::preset("fig7-windowed").config;
    c.params.seed = 99;
    const auto text = dealer::config_to_json(c);
    CHECK(dealer::parse_config_json(text, dealer::RunConfig{}) == c);

    const auto partial =
        dealer::parse_config_json(R"({"policy": "premeditated", "eps_buyer": -0.002})",
                                  dealer::RunConfig{});
    CHECK(partial.params.policy == dealer::Policy::Premeditated);
    CHECK(partial.params.greed == 0.4);

    CHECK_THROWS_AS(dealer::parse_config_json(R"({"greedy": 0.3})", dealer::RunConfig{}),
                    dealer::UsageError);
    CHECK_THROWS_AS(dealer::parse_config_json("[1,2]", dealer::RunConfig{}),
                    dealer::UsageError);
    CHECK_THROWS_AS(dealer::parse_config_json("{oops", dealer::RunConfig{}),
                    dealer::UsageError);
    CHECK(dealer::config_json_has_key(R"({"seed": 3})", "seed"));
    CHECK_FALSE(dealer::config_json_has_key(R"({"greed": 0.3})", "seed"));
  }

  TEST_CASE("manifest round trip and reuse as config") {
    auto c = dealer::preset("fig5-up").config;
    c.target_deals = 300;
    const auto series = dealer::run(c);
    const auto m = dealer::make_manifest(series, "fig5-up", {"target_deals=300"});
    const auto text = dealer::manifest_to_json(m);
    const auto back = dealer::parse_manifest_json(text);
    CHECK(back.config == c);
    CHECK(back.final_state_digest == series.final_state_digest);
    CHECK(back.initial_sum_bids == series.initial_sum_bids);
    CHECK(back.initial_price == series.initial_price);
    CHECK(back.predicted_drift_per_deal == doctest::Approx(0.0008));
    CHECK(back.prng_algorithm == dealer::Xoshiro256::kAlgorithmId);
    CHECK(back.overrides == std::vector<std::string>{"target_deals=300"});
    CHECK(back.n_deals == 300);

    CHECK(dealer::parse_config_json(text, dealer::RunConfig{}) == c);
    CHECK(dealer::config_json_has_key(text, "seed"));
    CHECK_THROWS_AS(dealer::parse_manifest_json("{}"), dealer::LoadError);

    CHECK(dealer::manifest_path_for("out/run.csv") == "out/run.manifest.json");
  }
}
