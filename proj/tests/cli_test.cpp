#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dealer/io.hpp"
#include "dealer/scenarios.hpp"
#include "dealer/sim.hpp"
#include "doctest.h"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code{0};
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dealer_sim");
  std::ostringstream out, err;
  const int code = dealer::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) { return dealer::read_text_file(p); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("simulate writes CSV and manifest deterministically") {
    test_util::TempDir dir("cli_sim");
    const auto a = dir.path() / "a.csv";
    const auto b = dir.path() / "b.csv";
    auto r = invoke({"simulate", "--preset", "fig4-baseline", "--seed", "7",
                     "--set", "target_deals=500", "-o", a.string()});
    REQUIRE(r.code == 0);
    r = invoke({"simulate", "--preset", "fig4-baseline", "--seed", "7", "--set",
                "target_deals=500", "-o", b.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind(std::string(dealer::kTickCsvHeader), 0) == 0);

    const auto m = dealer::parse_manifest_json(slurp(dealer::manifest_path_for(a)));
    CHECK(m.config.params.seed == 7);
    CHECK(m.preset == "fig4-baseline");
    CHECK(m.n_deals == 500);
    CHECK(m.prng_algorithm == dealer::Xoshiro256::kAlgorithmId);
  }

  TEST_CASE("overrides are applied and recorded") {
    test_util::TempDir dir("cli_override");
    const auto out = dir.path() / "up.csv";
    const auto r = invoke({"simulate", "--preset", "fig5-up", "--set",
                           "eps_buyer=0.002", "--set", "target_deals=200", "-o",
                           out.string()});
    REQUIRE(r.code == 0);
    const auto m = dealer::parse_manifest_json(slurp(dealer::manifest_path_for(out)));
    CHECK(m.config.params.eps_buyer == 0.002);
    CHECK(std::find(m.overrides.begin(), m.overrides.end(), "eps_buyer=0.002") !=
          m.overrides.end());
  }

  TEST_CASE("manifest alone reproduces the CSV") {
    test_util::TempDir dir("cli_replay");
    const auto first = dir.path() / "first.csv";
    const auto again = dir.path() / "again.csv";
    REQUIRE(invoke({"simulate", "--preset", "fig7-windowed", "--seed", "3",
                    "--set", "target_deals=800", "-o", first.string()})
                .code == 0);
    REQUIRE(invoke({"simulate", "--config",
                    dealer::manifest_path_for(first).string(), "-o",
                    again.string()})
                .code == 0);
    CHECK(slurp(first) == slurp(again));
  }

  TEST_CASE("seed precedence with DEALER_SIM_SEED") {
    test_util::TempDir dir("cli_env");
    const auto cfg = dir.write("c.json", R"({"target_deals": 50})");
    const auto cfg_seeded = dir.write("s.json", R"({"target_deals": 50, "seed": 4})");
    const auto out = dir.path() / "o.csv";
    auto seed_of = [&] {
      return dealer::parse_manifest_json(slurp(dealer::manifest_path_for(out)))
          .config.params.seed;
    };
    ::setenv("DEALER_SIM_SEED", "31", 1);
    REQUIRE(invoke({"simulate", "--config", cfg.string(), "-o", out.string()}).code == 0);
    CHECK(seed_of() == 31);
    REQUIRE(invoke({"simulate", "--config", cfg_seeded.string(), "-o", out.string()}).code == 0);
    CHECK(seed_of() == 4);
    REQUIRE(invoke({"simulate", "--config", cfg.string(), "--seed", "8", "-o",
                    out.string()}).code == 0);
    CHECK(seed_of() == 8);
    ::unsetenv("DEALER_SIM_SEED");
    REQUIRE(invoke({"simulate", "--config", cfg.string(), "-o", out.string()}).code == 0);
    CHECK(seed_of() == dealer::RunConfig{}.params.seed);
  }

  TEST_CASE("simulate error codes") {
    test_util::TempDir dir("cli_err");
    CHECK(invoke({"simulate", "--preset", "nope"}).code == 2);
    CHECK(invoke({"simulate"}).code == 2);
    CHECK(invoke({"simulate", "--preset", "fig4-baseline", "--set", "greed=2"}).code == 2);
    CHECK(invoke({"simulate", "--preset", "fig4-baseline", "--set", "bogus=1"}).code == 2);
    const auto bad = dir.write("bad.json", R"({"unknown_key": 1})");
    CHECK(invoke({"simulate", "--config", bad.string()}).code == 2);
    CHECK(invoke({"simulate", "--config", (dir.path() / "missing.json").string()}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    // A regular file where a directory is expected.
    const auto blocker = dir.write("blocker", "x");
    CHECK(invoke({"simulate", "--preset", "fig4-baseline", "--set",
                  "target_deals=10", "-o", (blocker / "out.csv").string()})
              .code == 3);
  }

  TEST_CASE("sweep writes one CSV per run and a matching summary") {
    test_util::TempDir dir("cli_sweep");
    const auto r = invoke({"sweep", "--preset", "fig8-gamma", "--eps",
                           "-0.015,0.015", "--seeds", "1,2,3", "--set",
                           "target_deals=1500", "-o", dir.path().string()});
    REQUIRE(r.code == 0);

    const auto summary = slurp(dir.path() / "fig8-gamma_summary.csv");
    std::vector<std::string> lines = split(summary, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == dealer::cli::summary_header());

    const std::vector<std::string> expected_files{
        "fig8-gamma_eps-0.015_seed1.csv", "fig8-gamma_eps-0.015_seed2.csv",
        "fig8-gamma_eps-0.015_seed3.csv", "fig8-gamma_eps0.015_seed1.csv",
        "fig8-gamma_eps0.015_seed2.csv",  "fig8-gamma_eps0.015_seed3.csv"};
    for (std::size_t i = 0; i < expected_files.size(); ++i) {
      const auto row = split(lines[i + 1], ',');
      CAPTURE(lines[i + 1]);
      REQUIRE(row[0] == expected_files[i]);
      CHECK(row[3] == "ok");

      // Recompute the report from the CSV on disk and compare field by field.
      const auto csv = dir.path() / expected_files[i];
      const auto manifest =
          dealer::parse_manifest_json(slurp(dealer::manifest_path_for(csv)));
      const auto report = dealer::trend_report(
          dealer::series_from_files(dealer::read_tick_csv(csv), manifest),
          manifest.predicted_drift_per_deal);
      const auto tail = lines[i + 1].substr(
          row[0].size() + row[1].size() + row[2].size() + row[3].size() + 4);
      CHECK(tail == dealer::cli::report_csv_fields(report));
    }
  }

  TEST_CASE("sweep usage errors") {
    test_util::TempDir dir("cli_sweep_err");
    CHECK(invoke({"sweep", "--preset", "fig4-baseline", "--eps", "", "--seeds",
                  "1", "-o", dir.path().string()}).code == 2);
    CHECK(invoke({"sweep", "--preset", "fig4-baseline", "--eps", "0",
                  "--seeds", "", "-o", dir.path().string()}).code == 2);
    CHECK(invoke({"sweep", "--preset", "nope", "--eps", "0", "--seeds", "1",
                  "-o", dir.path().string()}).code == 2);
  }

  TEST_CASE("sweep reports failed runs with exit 1") {
    test_util::TempDir dir("cli_sweep_fail");
    // Two dealers drawn less than half a spread apart with negligible drift
    // never trade, so that run has no report.
    std::uint64_t quiet = 1;
    while (true) {
      const auto init = dealer::init_dealers(quiet, 2, 1.0, 1e-9);
      if (std::fabs(init.bids[0] - init.bids[1]) < 0.5) break;
      ++quiet;
    }
    std::uint64_t busy = 1;
    while (true) {
      const auto init = dealer::init_dealers(busy, 2, 1.0, 1e-9);
      if (std::fabs(init.bids[0] - init.bids[1]) >= 1.0) break;
      ++busy;
    }
    const auto r = invoke({"sweep", "--preset", "fig4-baseline", "--eps", "0",
                           "--seeds",
                           std::to_string(quiet) + "," + std::to_string(busy),
                           "--set", "n_dealers=2", "--set",
                           "expectation_half_width=1e-9", "--set", "max_steps=10",
                           "-o", dir.path().string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("no deals") != std::string::npos);
    const auto summary = slurp(dir.path() / "fig4-baseline_summary.csv");
    CHECK(summary.find("_seed" + std::to_string(quiet) + ".csv,0," +
                       std::to_string(quiet) + ",failed,") != std::string::npos);
    CHECK(summary.find("_seed" + std::to_string(busy) + ".csv,0," +
                       std::to_string(busy) + ",ok,") != std::string::npos);
  }

  TEST_CASE("analyze round-trips the in-memory report") {
    test_util::TempDir dir("cli_analyze");
    const auto csv = dir.path() / "base.csv";
    REQUIRE(invoke({"simulate", "--preset", "fig4-baseline", "-o", csv.string()}).code == 0);

    const auto series = dealer::run(dealer::preset("fig4-baseline").config);
    const auto report = dealer::trend_report(series, 0.0);
    const auto r = invoke({"analyze", csv.string(), "--json"});
    REQUIRE(r.code == 0);
    CHECK(r.out == dealer::cli::report_json_line(report) + "\n");
    CHECK(*report.conservation_residual < 1e-6);

    const auto text = invoke({"analyze", csv.string()});
    CHECK(text.code == 0);
    CHECK(text.out.find("conservation_residual") != std::string::npos);
    CHECK(text.out.find(dealer::format_double(*report.conservation_residual)) !=
          std::string::npos);
  }

  TEST_CASE("analyze external and error paths") {
    test_util::TempDir dir("cli_ext");
    const auto ext = dir.write("gold.csv", "tick,price\n0,1.0\n1,1.5\n2,2.0\n");
    auto r = invoke({"analyze", "--external", ext.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("ols_slope               0.5") != std::string::npos);
    CHECK(r.out.find("conservation_residual   n/a") != std::string::npos);

    CHECK(invoke({"analyze", (dir.path() / "missing.csv").string()}).code == 2);
    const auto bad = dir.write("bad.csv", "deal_index,step\n1,2\n");
    r = invoke({"analyze", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find(":1:") != std::string::npos);

    const auto ext_bad = dir.write("ext_bad.csv", "0,1\n1,x\n");
    r = invoke({"analyze", "--external", ext_bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("line(s) 2") != std::string::npos);
  }
}
