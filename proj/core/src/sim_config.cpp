#include <charconv>
#include <cmath>
#include <set>

#include <json.hpp>

#include "rbd/errors.hpp"
#include "rbd/sim.hpp"

namespace rbd {

using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys = {"N",          "M",           "qam_order",         "detector",
                                        "k_iterations", "scenario",  "snr_db_list",       "target_bit_errors",
                                        "max_bits",   "master_seed", "min_frames", "snr_convention"};
const std::set<std::string> kScenarioKeys = {"kind", "zeta_t", "zeta_r", "theta_rad", "rx_gains", "tx_gains"};

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "': wrong type (got " + std::string(j.type_name()) + ")");
  }
}

std::uint64_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    throw ConfigError("key '" + key + "': expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::vector<double> get_reals(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("key '" + key + "': expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("key '" + key + "': expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double parse_double(std::string_view text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (text.empty() || r.ec != std::errc{} || r.ptr != end)
    throw ConfigError(what + ": cannot parse number '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

json scalar_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded() || v.is_object() || v.is_array()) return text;
  return v;
}

// Override values are plain text; ';' separates list entries because ','
// separates overrides.
json override_value(const std::string& key, const std::string& text) {
  if (key == "snr_db_list") {
    if (text.find(':') != std::string::npos) return parse_range(text);
    json arr = json::array();
    for (const auto& t : split(text, ';')) arr.push_back(parse_double(t, key));
    return arr;
  }
  if (key == "scenario.rx_gains" || key == "scenario.tx_gains") {
    json arr = json::array();
    for (const auto& t : split(text, ';')) arr.push_back(parse_double(t, key));
    return arr;
  }
  if (text.find(';') != std::string::npos && (key == "detector" || key == "k_iterations")) {
    json arr = json::array();
    for (const auto& t : split(text, ';')) arr.push_back(scalar_value(t));
    return arr;
  }
  return scalar_value(text);
}

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const auto path = split(key, '.');
  if (path.size() == 1) {
    if (!kTopKeys.count(key)) throw ConfigError("override: unknown key '" + key + "'");
    root[key] = override_value(key, value);
  } else if (path.size() == 2 && path[0] == "scenario") {
    if (!kScenarioKeys.count(path[1])) throw ConfigError("override: unknown key '" + key + "'");
    if (!root.contains("scenario")) root["scenario"] = json::object();
    root["scenario"][path[1]] = override_value(key, value);
  } else {
    throw ConfigError("override: unknown key '" + key + "'");
  }
}

ChannelScenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("key 'scenario': expected an object");
  for (const auto& [k, v] : j.items())
    if (!kScenarioKeys.count(k)) throw ConfigError("unknown key 'scenario." + k + "'");
  ChannelScenario s;
  try {
    if (j.contains("kind")) s.kind = parse_scenario_kind(get_as<std::string>(j["kind"], "scenario.kind"));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("key 'scenario.kind': ") + e.what());
  }
  if (j.contains("zeta_t")) s.zeta_t = get_as<double>(j["zeta_t"], "scenario.zeta_t");
  if (j.contains("zeta_r")) s.zeta_r = get_as<double>(j["zeta_r"], "scenario.zeta_r");
  if (j.contains("theta_rad")) s.theta = get_as<double>(j["theta_rad"], "scenario.theta_rad");
  if (j.contains("rx_gains")) s.rx_gains = get_reals(j["rx_gains"], "scenario.rx_gains");
  if (j.contains("tx_gains")) s.tx_gains = get_reals(j["tx_gains"], "scenario.tx_gains");
  return s;
}

SimPlan parse_plan(const json& root) {
  if (!root.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [k, v] : root.items())
    if (!kTopKeys.count(k)) throw ConfigError("unknown key '" + k + "'");

  if (root.contains("snr_convention") &&
      get_as<std::string>(root["snr_convention"], "snr_convention") != kSnrConvention)
    throw ConfigError("key 'snr_convention': only \"" + std::string(kSnrConvention) + "\" is supported");

  SimPlan plan;
  SimConfig& c = plan.base;
  if (root.contains("N")) c.n = get_count(root["N"], "N");
  if (root.contains("M")) c.m = get_count(root["M"], "M");
  if (root.contains("qam_order")) c.qam_order = get_as<int>(root["qam_order"], "qam_order");
  if (root.contains("scenario")) c.scenario = parse_scenario(root["scenario"]);
  if (root.contains("snr_db_list")) c.snr_db_list = get_reals(root["snr_db_list"], "snr_db_list");
  if (root.contains("target_bit_errors")) c.target_bit_errors = get_count(root["target_bit_errors"], "target_bit_errors");
  if (root.contains("max_bits")) c.max_bits = get_count(root["max_bits"], "max_bits");
  if (root.contains("master_seed")) c.master_seed = get_count(root["master_seed"], "master_seed");
  if (root.contains("min_frames")) c.min_frames = get_count(root["min_frames"], "min_frames");

  if (root.contains("detector")) {
    const json& d = root["detector"];
    const json list = d.is_array() ? d : json::array({d});
    for (const auto& v : list) {
      try {
        plan.detectors.push_back(parse_detector(get_as<std::string>(v, "detector")));
      } catch (const DomainError& e) {
        throw ConfigError(std::string("key 'detector': ") + e.what());
      }
    }
    if (plan.detectors.empty()) throw ConfigError("key 'detector': empty list");
  } else {
    plan.detectors = {c.detector};
  }
  if (root.contains("k_iterations")) {
    const json& k = root["k_iterations"];
    const json list = k.is_array() ? k : json::array({k});
    for (const auto& v : list) plan.k_values.push_back(get_as<int>(v, "k_iterations"));
    if (plan.k_values.empty()) throw ConfigError("key 'k_iterations': empty list");
  } else {
    plan.k_values = {c.k_iterations};
  }
  c.detector = plan.detectors.front();
  c.k_iterations = plan.k_values.front();

  for (const auto& cfg : plan.expand()) cfg.validate();
  return plan;
}

}  // namespace

std::vector<double> parse_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("range '" + std::string(text) + "': expected LO:STEP:HI");
  const double lo = parse_double(parts[0], "range");
  const double step = parse_double(parts[1], "range");
  const double hi = parse_double(parts[2], "range");
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ConfigError("range '" + std::string(text) + "': need STEP > 0 and HI >= LO");
  std::vector<double> out;
  const double n = std::floor((hi - lo) / step + 1e-9);
  if (n > 1e6) throw ConfigError("range '" + std::string(text) + "': too many points");
  for (int i = 0; i <= static_cast<int>(n); ++i) out.push_back(lo + i * step);
  return out;
}

std::vector<SimConfig> SimPlan::expand() const {
  std::vector<SimConfig> out;
  for (Detector d : detectors) {
    if (d == Detector::Cholesky) {
      SimConfig c = base;
      c.detector = d;
      c.k_iterations = 0;
      out.push_back(std::move(c));
      continue;
    }
    for (int k : k_values) {
      SimConfig c = base;
      c.detector = d;
      c.k_iterations = k;
      out.push_back(std::move(c));
    }
  }
  return out;
}

SimPlan load_sim_plan(std::string_view json_text, std::span<const std::string> overrides) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& o : overrides) apply_override(root, o);
  return parse_plan(root);
}

std::string describe_plan(const SimPlan& plan) {
  const SimConfig& c = plan.base;
  json j;
  j["N"] = c.n;
  j["M"] = c.m;
  j["qam_order"] = c.qam_order;
  json dets = json::array();
  for (Detector d : plan.detectors) dets.push_back(std::string(to_string(d)));
  j["detector"] = dets.size() == 1 ? dets[0] : dets;
  j["k_iterations"] = plan.k_values.size() == 1 ? json(plan.k_values[0]) : json(plan.k_values);
  j["scenario"] = {{"kind", std::string(to_string(c.scenario.kind))},
                   {"zeta_t", c.scenario.zeta_t},
                   {"zeta_r", c.scenario.zeta_r},
                   {"theta_rad", c.scenario.theta},
                   {"rx_gains", c.scenario.rx_gains},
                   {"tx_gains", c.scenario.tx_gains}};
  j["snr_db_list"] = c.snr_db_list;
  j["target_bit_errors"] = c.target_bit_errors;
  j["max_bits"] = c.max_bits;
  j["master_seed"] = c.master_seed;
  j["min_frames"] = c.min_frames;
  j["snr_convention"] = std::string(kSnrConvention);
  return j.dump(2);
}

}  // namespace rbd
