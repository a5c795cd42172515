#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dealer/error.hpp"
#include "dealer/io.hpp"
#include "dealer/scenarios.hpp"
#include "dealer/sim.hpp"
#include "json.hpp"

namespace dealer::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kSeedEnv = "DEALER_SIM_SEED";

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoFailure("cannot open " + path.string() + " for writing");
  f << contents;
  f.close();
  if (!f) throw IoFailure("write failed for " + path.string());
}

std::string render_csv(const TickSeries& series) {
  std::ostringstream ss;
  write_tick_csv(ss, series.records);
  return ss.str();
}

std::string render_step_prices(const TickSeries& series) {
  std::ostringstream ss;
  ss << "step,price\n";
  for (std::size_t t = 0; t < series.step_prices.size(); ++t) {
    ss << t << ',' << format_double(series.step_prices[t]) << '\n';
  }
  return ss.str();
}

// Writes <csv>, its manifest and, when recorded, <stem>.steps.csv.
void write_run_outputs(const fs::path& csv, const TickSeries& series,
                       const std::string& preset_name,
                       const std::vector<std::string>& overrides) {
  if (csv.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(csv.parent_path(), ec);
    if (ec) throw IoFailure("cannot create " + csv.parent_path().string());
  }
  write_file(csv, render_csv(series));
  write_file(manifest_path_for(csv),
             manifest_to_json(make_manifest(series, preset_name, overrides)));
  if (series.config_echo.record_every_step) {
    auto steps = csv;
    steps.replace_extension(".steps.csv");
    write_file(steps, render_step_prices(series));
  }
}

// Lowest priority seed: only used when nothing more specific set one.
std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv(kSeedEnv);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  RunConfig scratch;
  apply_setting(scratch, "seed", raw);
  return scratch.params.seed;
}

struct ResolvedConfig {
  RunConfig config;
  std::string preset_name;
  std::vector<std::string> overrides;
};

ResolvedConfig resolve_config(const std::string& preset_name,
                              const std::string& config_path,
                              const std::vector<std::string>& sets,
                              std::optional<std::uint64_t> seed_flag) {
  ResolvedConfig r;
  bool seed_explicit = false;
  if (!preset_name.empty() && !config_path.empty()) {
    throw UsageError("--preset and --config are mutually exclusive");
  }
  if (!config_path.empty()) {
    std::string text;
    try {
      text = read_text_file(config_path);
    } catch (const LoadError& e) {
      throw UsageError(e.what());
    }
    r.config = parse_config_json(text, RunConfig{});
    seed_explicit = config_json_has_key(text, "seed");
  } else if (!preset_name.empty()) {
    r.config = preset(preset_name).config;
    r.preset_name = preset_name;
  } else {
    throw UsageError("one of --preset or --config is required");
  }

  if (!seed_explicit) {
    if (auto s = env_seed()) {
      r.config.params.seed = *s;
      r.overrides.push_back("seed=" + std::to_string(*s) + " (" + kSeedEnv + ")");
    }
  }
  for (const auto& s : sets) {
    apply_assignment(r.config, s);
    r.overrides.push_back(s);
  }
  if (seed_flag) {
    r.config.params.seed = *seed_flag;
    r.overrides.push_back("seed=" + std::to_string(*seed_flag));
  }
  validate(r.config);
  return r;
}

template <typename T>
std::vector<T> parse_list(const std::string& raw, const char* what) {
  std::vector<T> out;
  std::string_view rest = raw;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto token = rest.substr(0, comma);
    RunConfig scratch;
    if constexpr (std::is_same_v<T, double>) {
      apply_setting(scratch, "eps_buyer", token);
      out.push_back(scratch.params.eps_buyer);
    } else {
      apply_setting(scratch, "seed", token);
      out.push_back(scratch.params.seed);
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

int cmd_simulate(const std::string& preset_name, const std::string& config_path,
                 const std::vector<std::string>& sets,
                 std::optional<std::uint64_t> seed_flag, std::string out_path,
                 std::ostream& out, std::ostream& err) {
  ResolvedConfig rc;
  try {
    rc = resolve_config(preset_name, config_path, sets, seed_flag);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (out_path.empty()) {
    out_path = (rc.preset_name.empty() ? fs::path(config_path).stem().string()
                                       : rc.preset_name) +
               ".csv";
  }

  const TickSeries series = run(rc.config);
  if (series.no_deals) {
    err << "warning: no deals within " << rc.config.max_steps << " steps\n";
  }
  try {
    write_run_outputs(out_path, series, rc.preset_name, rc.overrides);
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  out << "wrote " << out_path << " (" << series.records.size() << " deals, "
      << series.steps_run << " steps, digest " << std::hex << std::setw(16)
      << std::setfill('0') << series.final_state_digest << std::dec << ")\n";
  return kOk;
}

struct SweepResult {
  std::string file;
  double eps{0.0};
  std::uint64_t seed{0};
  std::optional<TrendReport> report;
  std::string error;
};

int cmd_sweep(const std::string& preset_name, const std::string& eps_raw,
              const std::string& seeds_raw, const std::vector<std::string>& sets,
              const fs::path& out_dir, unsigned jobs, std::ostream& out,
              std::ostream& err) {
  std::vector<SweepPoint> points;
  try {
    if (preset_name.empty()) throw UsageError("--preset is required");
    RunConfig base = preset(preset_name).config;
    for (const auto& s : sets) apply_assignment(base, s);
    const auto eps = parse_list<double>(eps_raw, "eps");
    const auto seeds = parse_list<std::uint64_t>(seeds_raw, "seed");
    points = sweep(base, eps, seeds);
    for (const auto& pt : points) validate(pt.config);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create " << out_dir.string() << '\n';
    return kIo;
  }

  std::vector<SweepResult> results(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const auto& pt = points[i];
      auto& res = results[i];
      res.eps = pt.eps_buyer;
      res.seed = pt.seed;
      res.file = preset_name + "_eps" + format_double(pt.eps_buyer) + "_seed" +
                 std::to_string(pt.seed) + ".csv";
      try {
        const TickSeries series = run(pt.config);
        std::vector<std::string> overrides = sets;
        overrides.push_back("eps_buyer=" + format_double(pt.eps_buyer));
        overrides.push_back("seed=" + std::to_string(pt.seed));
        write_run_outputs(out_dir / res.file, series, preset_name, overrides);
        if (series.records.empty()) {
          res.error = "no deals";
        } else {
          res.report = trend_report(
              series, predicted_drift_per_deal(pt.config.params));
        }
      } catch (const std::exception& e) {
        res.error = e.what();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, points.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }

  std::ostringstream summary;
  summary << summary_header() << '\n';
  int failures = 0;
  for (const auto& r : results) {
    summary << r.file << ',' << format_double(r.eps) << ',' << r.seed << ','
            << (r.report ? "ok" : "failed") << ',';
    if (r.report) {
      summary << report_csv_fields(*r.report);
    } else {
      ++failures;
      err << "run " << r.file << " failed: " << r.error << '\n';
      summary << report_csv_fields(TrendReport{});
    }
    summary << '\n';
  }
  try {
    write_file(out_dir / (preset_name + "_summary.csv"), summary.str());
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  out << "sweep: " << results.size() - failures << "/" << results.size()
      << " runs ok, summary " << (out_dir / (preset_name + "_summary.csv")).string()
      << '\n';
  return failures > 0 ? kRunFailed : kOk;
}

int cmd_analyze(const fs::path& path, bool external, bool as_json,
                double tolerance, std::ostream& out, std::ostream& err) {
  TrendReport report;
  try {
    if (external) {
      const auto series = load_external_series(path, tolerance);
      if (series.nonmonotonic_dropped > 0) {
        err << "warning: dropped " << series.nonmonotonic_dropped
            << " row(s) with non-increasing index\n";
      }
      report = trend_report(series.points);
    } else {
      auto records = read_tick_csv(path);
      if (records.empty()) throw LoadError(path.string() + ": no deal rows");
      const auto mpath = manifest_path_for(path);
      if (fs::exists(mpath)) {
        const auto manifest = parse_manifest_json(read_text_file(mpath));
        report = trend_report(series_from_files(std::move(records), manifest),
                              manifest.predicted_drift_per_deal);
      } else {
        err << "warning: no manifest at " << mpath.string()
            << "; conservation audit unavailable\n";
        TickSeries s;
        s.records = std::move(records);
        report = trend_report(s, 0.0);
        report.conservation_residual.reset();
      }
    }
  } catch (const LoadError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (as_json) {
    out << report_json_line(report) << '\n';
  } else {
    out << report_text(report);
  }
  return kOk;
}

}  // namespace

std::string summary_header() {
  return "run,eps_buyer,seed,status,n_deals,degenerate,ols_slope,"
         "ols_intercept,r_squared,detrended_range,price_std,seller_count_min,"
         "seller_count_max,seller_count_mean,mu_convergence,"
         "conservation_residual";
}

std::string report_csv_fields(const TrendReport& r) {
  std::ostringstream ss;
  ss << r.n_deals << ',' << (r.degenerate ? 1 : 0) << ','
     << format_double(r.ols_slope) << ',' << format_double(r.ols_intercept)
     << ',' << format_double(r.r_squared) << ','
     << format_double(r.detrended_range) << ',' << format_double(r.price_std)
     << ',' << opt_field(r.seller_count_min) << ','
     << opt_field(r.seller_count_max) << ',' << opt_field(r.seller_count_mean)
     << ',' << opt_field(r.mu_convergence) << ','
     << opt_field(r.conservation_residual);
  return ss.str();
}

std::string report_json_line(const TrendReport& r) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  auto opt = [&](const std::optional<double>& v) {
    return v ? num(*v) : json(nullptr);
  };
  json j = json::object();
  j["n_deals"] = r.n_deals;
  j["degenerate"] = r.degenerate;
  j["ols_slope"] = num(r.ols_slope);
  j["ols_intercept"] = num(r.ols_intercept);
  j["r_squared"] = num(r.r_squared);
  j["detrended_range"] = num(r.detrended_range);
  j["price_std"] = num(r.price_std);
  j["seller_count_min"] = opt(r.seller_count_min);
  j["seller_count_max"] = opt(r.seller_count_max);
  j["seller_count_mean"] = opt(r.seller_count_mean);
  j["mu_convergence"] = opt(r.mu_convergence);
  j["conservation_residual"] = opt(r.conservation_residual);
  return j.dump();
}

std::string report_text(const TrendReport& r) {
  std::ostringstream ss;
  auto row = [&](const char* name, const std::string& value) {
    ss << std::left << std::setw(24) << name << value << '\n';
  };
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("n/a");
  };
  row("n_deals", std::to_string(r.n_deals));
  row("degenerate", r.degenerate ? "yes" : "no");
  row("ols_slope", format_double(r.ols_slope));
  row("ols_intercept", format_double(r.ols_intercept));
  row("r_squared", format_double(r.r_squared));
  row("detrended_range", format_double(r.detrended_range));
  row("price_std", format_double(r.price_std));
  row("seller_count_min", opt(r.seller_count_min));
  row("seller_count_max", opt(r.seller_count_max));
  row("seller_count_mean", opt(r.seller_count_mean));
  row("mu_convergence", opt(r.mu_convergence));
  row("conservation_residual", opt(r.conservation_residual));
  return ss.str();
}

int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Threshold dealer market simulator", "dealer_sim"};
  app.require_subcommand(1);

  std::string preset_name, config_path, out_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed_flag;

  auto* sim = app.add_subcommand("simulate", "Run one simulation, write tick CSV and manifest");
  sim->add_option("--preset", preset_name, "Named scenario preset");
  sim->add_option("--config", config_path, "JSON config file or run manifest");
  sim->add_option("--set", sets, "Override key=value (repeatable)");
  sim->add_option("--seed", seed_flag, "PRNG seed (highest priority)");
  sim->add_option("-o,--out", out_path, "Output tick CSV path");

  std::string eps_raw, seeds_raw, out_dir = "sweep_out";
  unsigned jobs = 0;
  auto* sw = app.add_subcommand("sweep", "Run eps x seed grid over a preset");
  sw->add_option("--preset", preset_name)->required();
  sw->add_option("--eps", eps_raw, "Comma-separated eps_buyer values")->required();
  sw->add_option("--seeds", seeds_raw, "Comma-separated seeds")->required();
  sw->add_option("--set", sets, "Override key=value applied to the preset");
  sw->add_option("-o,--out,--out-dir", out_dir, "Output directory");
  sw->add_option("-j,--jobs", jobs, "Parallel runs (0 = hardware threads)");

  std::string analyze_path;
  bool external = false, as_json = false;
  double tolerance = 0.0;
  auto* an = app.add_subcommand("analyze", "Print a trend report for a tick CSV");
  an->add_option("path", analyze_path, "Tick CSV")->required();
  an->add_flag("--external", external, "Two-column (index, price) CSV");
  an->add_flag("--json", as_json, "Single-line JSON record");
  an->add_option("--bad-row-tolerance", tolerance,
                 "Allowed fraction of malformed rows in external files");

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1),
                                     args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (sim->parsed()) {
    return cmd_simulate(preset_name, config_path, sets, seed_flag, out_path,
                        out, err);
  }
  if (sw->parsed()) {
    return cmd_sweep(preset_name, eps_raw, seeds_raw, sets, out_dir, jobs, out,
                     err);
  }
  return cmd_analyze(analyze_path, external, as_json, tolerance, out, err);
}

}  // namespace dealer::cli
