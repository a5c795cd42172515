#include "dealer/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "dealer/error.hpp"
#include "json.hpp"

namespace dealer {
namespace {

using nlohmann::json;

template <typename Int>
Int parse_int(std::string_view key, std::string_view s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError("invalid integer for " + std::string(key) + ": '" +
                     std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("invalid number for " + std::string(key) + ": '" +
                     std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw UsageError("invalid boolean for " + std::string(key) + ": '" +
                   std::string(s) + "'");
}

bool is_none(std::string_view s) { return s == "none" || s == "null" || s.empty(); }

std::string json_scalar_to_setting(const std::string& key, const json& v) {
  switch (v.type()) {
    case json::value_t::string: return v.get<std::string>();
    case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case json::value_t::null: return "none";
    case json::value_t::number_unsigned:
      return std::to_string(v.get<std::uint64_t>());
    case json::value_t::number_integer:
      return std::to_string(v.get<std::int64_t>());
    case json::value_t::number_float: return format_double(v.get<double>());
    default:
      throw UsageError("config key '" + key + "' must be a scalar");
  }
}

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, v, 16);
  std::string s(buf.data(), ptr);
  return std::string(16 - s.size(), '0') + s;
}

std::uint64_t parse_hex64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw LoadError("invalid digest '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_tick_csv(std::ostream& out, std::span<const DealRecord> records) {
  out << kTickCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.deal_index << ',' << r.step << ',' << format_double(r.price) << ','
        << r.buyer << ',' << r.n_sellers << ',' << format_double(r.mu_n_used)
        << ',' << format_double(r.sum_bids) << '\n';
  }
}

std::vector<DealRecord> read_tick_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw LoadError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTickCsvHeader) {
    throw LoadError(path.string() + ":1: expected header '" +
                    std::string(kTickCsvHeader) + "'");
  }

  std::vector<DealRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string_view, 7> fields;
    std::string_view rest = line;
    std::size_t count = 0;
    while (count < fields.size()) {
      const auto comma = rest.find(',');
      fields[count++] = rest.substr(0, comma);
      if (comma == std::string_view::npos) {
        rest = {};
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (count != fields.size() || !rest.empty()) {
      throw LoadError(where + "expected 7 fields");
    }
    try {
      DealRecord r;
      r.deal_index = parse_int<std::uint64_t>("deal_index", fields[0]);
      r.step = parse_int<std::uint64_t>("step", fields[1]);
      r.price = parse_real("price", fields[2]);
      r.buyer = parse_int<std::size_t>("buyer", fields[3]);
      r.n_sellers = parse_int<std::size_t>("n_sellers", fields[4]);
      r.mu_n_used = parse_real("mu_n", fields[5]);
      r.sum_bids = parse_real("sum_bids", fields[6]);
      if (r.deal_index != out.size() + 1) {
        throw UsageError("deal_index not contiguous");
      }
      if (!out.empty() && r.step <= out.back().step) {
        throw UsageError("step not increasing");
      }
      out.push_back(r);
    } catch (const UsageError& e) {
      throw LoadError(where + e.what());
    }
  }
  return out;
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "n_dealers", "spread",           "greed",       "expectation_half_width",
      "eps_buyer", "eps_seller",       "policy",      "mu_window",
      "seed",      "seller_term_mode", "max_steps",   "target_deals",
      "record_every_step"};
  return keys;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  auto& p = c.params;
  if (key == "n_dealers") {
    p.n_dealers = parse_int<std::size_t>(key, value);
  } else if (key == "spread") {
    p.spread = parse_real(key, value);
  } else if (key == "greed") {
    p.greed = parse_real(key, value);
  } else if (key == "expectation_half_width") {
    p.expectation_half_width = parse_real(key, value);
  } else if (key == "eps_buyer") {
    p.eps_buyer = parse_real(key, value);
  } else if (key == "eps_seller") {
    p.eps_seller = parse_real(key, value);
  } else if (key == "policy") {
    p.policy = parse_policy(value);
  } else if (key == "mu_window") {
    p.mu_window = is_none(value)
                      ? std::nullopt
                      : std::optional(parse_int<std::size_t>(key, value));
  } else if (key == "seller_term_mode") {
    p.seller_term_mode = parse_seller_term_mode(value);
  } else if (key == "seed") {
    p.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "max_steps") {
    c.max_steps = parse_int<std::uint64_t>(key, value);
  } else if (key == "target_deals") {
    c.target_deals = is_none(value)
                         ? std::nullopt
                         : std::optional(parse_int<std::uint64_t>(key, value));
  } else if (key == "record_every_step") {
    c.record_every_step = parse_bool(key, value);
  } else {
    std::string msg = "unknown config key '" + std::string(key) + "'; known:";
    for (auto k : config_keys()) msg += " " + std::string(k);
    throw UsageError(msg);
  }
}

void apply_assignment(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw UsageError("expected key=value, got '" + std::string(assignment) + "'");
  }
  apply_setting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

RunConfig parse_config_json(std::string_view text, RunConfig base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  if (doc.contains("config")) {
    const json inner = doc.at("config");
    doc = inner;
    if (!doc.is_object()) throw UsageError("manifest 'config' must be an object");
  }
  for (const auto& [key, value] : doc.items()) {
    apply_setting(base, key, json_scalar_to_setting(key, value));
  }
  return base;
}

bool config_json_has_key(std::string_view text, std::string_view key) {
  const json doc = json::parse(text, nullptr, false);
  if (!doc.is_object()) return false;
  const json& cfg =
      doc.contains("config") && doc["config"].is_object() ? doc["config"] : doc;
  return cfg.contains(std::string(key));
}

namespace {

json config_object(const RunConfig& c) {
  const auto& p = c.params;
  json j = json::object();
  j["n_dealers"] = p.n_dealers;
  j["spread"] = p.spread;
  j["greed"] = p.greed;
  j["expectation_half_width"] = p.expectation_half_width;
  j["eps_buyer"] = p.eps_buyer;
  j["eps_seller"] = p.eps_seller;
  j["policy"] = std::string(to_string(p.policy));
  j["mu_window"] = p.mu_window ? json(*p.mu_window) : json(nullptr);
  j["seller_term_mode"] = std::string(to_string(p.seller_term_mode));
  j["seed"] = p.seed;
  j["max_steps"] = c.max_steps;
  j["target_deals"] = c.target_deals ? json(*c.target_deals) : json(nullptr);
  j["record_every_step"] = c.record_every_step;
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& config) {
  return config_object(config).dump(2) + "\n";
}

RunManifest make_manifest(const TickSeries& series, std::string preset,
                          std::vector<std::string> overrides) {
  RunManifest m;
  m.config = series.config_echo;
  m.prng_algorithm = series.prng_algorithm;
  m.final_state_digest = series.final_state_digest;
  m.initial_price = series.initial_price;
  m.initial_sum_bids = series.initial_sum_bids;
  m.predicted_drift_per_deal = predicted_drift_per_deal(series.config_echo.params);
  m.n_deals = series.records.size();
  m.steps_run = series.steps_run;
  m.no_deals = series.no_deals;
  m.preset = std::move(preset);
  m.overrides = std::move(overrides);
  return m;
}

std::string manifest_to_json(const RunManifest& m) {
  json j = json::object();
  j["config"] = config_object(m.config);
  j["prng_algorithm"] = m.prng_algorithm;
  j["final_state_digest"] = hex64(m.final_state_digest);
  j["initial_price"] = m.initial_price;
  j["initial_sum_bids"] = m.initial_sum_bids;
  j["predicted_drift_per_deal"] = m.predicted_drift_per_deal;
  j["n_deals"] = m.n_deals;
  j["steps_run"] = m.steps_run;
  j["no_deals"] = m.no_deals;
  j["preset"] = m.preset;
  j["overrides"] = m.overrides;
  return j.dump(2) + "\n";
}

RunManifest parse_manifest_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    RunManifest m;
    m.config = parse_config_json(j.at("config").dump(), RunConfig{});
    m.prng_algorithm = j.at("prng_algorithm").get<std::string>();
    m.final_state_digest =
        parse_hex64(j.at("final_state_digest").get<std::string>());
    m.initial_price = j.at("initial_price").get<double>();
    m.initial_sum_bids = j.at("initial_sum_bids").get<double>();
    m.predicted_drift_per_deal = j.at("predicted_drift_per_deal").get<double>();
    m.n_deals = j.at("n_deals").get<std::uint64_t>();
    m.steps_run = j.at("steps_run").get<std::uint64_t>();
    m.no_deals = j.at("no_deals").get<bool>();
    m.preset = j.value("preset", std::string{});
    m.overrides = j.value("overrides", std::vector<std::string>{});
    return m;
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed manifest: ") + e.what());
  } catch (const UsageError& e) {
    throw LoadError(std::string("malformed manifest: ") + e.what());
  }
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".manifest.json");
  return p;
}

TickSeries series_from_files(std::vector<DealRecord> records,
                             const RunManifest& manifest) {
  TickSeries s;
  s.records = std::move(records);
  s.config_echo = manifest.config;
  s.prng_algorithm = manifest.prng_algorithm;
  s.final_state_digest = manifest.final_state_digest;
  s.initial_price = manifest.initial_price;
  s.initial_sum_bids = manifest.initial_sum_bids;
  s.steps_run = manifest.steps_run;
  s.no_deals = manifest.no_deals;
  return s;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dealer
