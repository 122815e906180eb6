#include "uavplan/io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace uavplan {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string type_name(const json& j) { return j.type_name(); }

// Object accessor that rejects keys outside the allowed set up front.
class Fields {
 public:
  Fields(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_, "expected an object, got " + type_name(j));
    std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
      if (!known.contains(item.key())) throw ConfigError(join(path_, item.key()), "unknown key");
    }
  }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }
  [[nodiscard]] std::string at(const char* key) const { return join(path_, key); }
  [[nodiscard]] const json& get(const char* key) const {
    if (!has(key)) throw ConfigError(at(key), "missing required key");
    return j_.at(key);
  }

  [[nodiscard]] double number(const char* key) const { return as_number(get(key), at(key)); }
  [[nodiscard]] std::optional<double> number_opt(const char* key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  [[nodiscard]] std::uint64_t integer(const char* key) const { return as_integer(get(key), at(key)); }
  [[nodiscard]] std::string string(const char* key) const {
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string, got " + type_name(v));
    return v.get<std::string>();
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where, "expected a number, got " + type_name(v));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where, "expected a finite number");
    return d;
  }
  static std::uint64_t as_integer(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) throw ConfigError(where, "expected a non-negative integer");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError(where, "expected a non-negative integer, got " + type_name(v));
  }

 private:
  const json& j_;
  std::string path_;
};

std::pair<double, double> range(const Fields& f, const char* key) {
  const json& v = f.get(key);
  if (!v.is_array() || v.size() != 2) throw ConfigError(f.at(key), "expected [min, max]");
  return {Fields::as_number(v[0], f.at(key) + "[0]"), Fields::as_number(v[1], f.at(key) + "[1]")};
}

// Reads one of two spellings of the same quantity, rejecting both at once.
std::optional<double> either(const Fields& f, const char* linear, const char* other, double (*convert)(double)) {
  if (f.has(linear) && f.has(other)) {
    throw ConfigError(f.at(other), std::string("conflicts with '") + linear + "'; give only one");
  }
  if (f.has(linear)) return f.number(linear);
  if (f.has(other)) return convert(f.number(other));
  return std::nullopt;
}

template <class F>
auto rethrow_as_config(const std::string& where, F&& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  } catch (const ChannelDomainError& e) {
    throw ConfigError(where, e.what());
  }
}

BandwidthPolicy policy_value(const Fields& f, const char* key) {
  const std::string text = f.string(key);
  return rethrow_as_config(f.at(key), [&] { return parse_bandwidth_policy(text); });
}

}  // namespace

ChannelParams parse_channel(const json& section, ChannelParams base, const std::string& path) {
  const Fields f(section, path,
                 {"carrier_frequency_hz", "tx_power_w", "tx_power_dbm", "tx_antenna_gain", "tx_antenna_gain_dbi",
                  "rx_antenna_gain", "rx_antenna_gain_dbi", "noise_spectral_density_w_per_hz", "noise_floor_dbm",
                  "noise_bandwidth_hz", "c1", "c2", "mu_los", "mu_los_db", "mu_nlos", "mu_nlos_db",
                  "los_threshold"});
  if (auto v = f.number_opt("carrier_frequency_hz")) base.carrier_frequency_hz = *v;
  if (auto v = either(f, "tx_power_w", "tx_power_dbm", dbm_to_watt)) base.tx_power_w = *v;
  if (auto v = either(f, "tx_antenna_gain", "tx_antenna_gain_dbi", db_to_linear)) base.tx_antenna_gain = *v;
  if (auto v = either(f, "rx_antenna_gain", "rx_antenna_gain_dbi", db_to_linear)) base.rx_antenna_gain = *v;
  if (f.has("noise_spectral_density_w_per_hz") && f.has("noise_floor_dbm")) {
    throw ConfigError(f.at("noise_floor_dbm"), "conflicts with 'noise_spectral_density_w_per_hz'; give only one");
  }
  if (f.has("noise_bandwidth_hz") && !f.has("noise_floor_dbm")) {
    throw ConfigError(f.at("noise_bandwidth_hz"), "only meaningful together with 'noise_floor_dbm'");
  }
  if (auto v = f.number_opt("noise_spectral_density_w_per_hz")) base.noise_spectral_density = *v;
  if (auto floor = f.number_opt("noise_floor_dbm")) {
    const double bandwidth = f.number_opt("noise_bandwidth_hz").value_or(kChannelWidthHz);
    base.noise_spectral_density =
        rethrow_as_config(f.at("noise_floor_dbm"), [&] { return noise_density_from_floor(*floor, bandwidth); });
  }
  if (auto v = f.number_opt("c1")) base.c1 = *v;
  if (auto v = f.number_opt("c2")) base.c2 = *v;
  if (auto v = either(f, "mu_los", "mu_los_db", db_to_linear)) base.mu_los = *v;
  if (auto v = either(f, "mu_nlos", "mu_nlos_db", db_to_linear)) base.mu_nlos = *v;
  if (auto v = f.number_opt("los_threshold")) base.los_threshold = *v;
  rethrow_as_config(path, [&] {
    base.validate();
    return 0;
  });
  return base;
}

SwarmConfig parse_swarm(const json& section, SwarmConfig base, const std::string& path) {
  const Fields f(section, path,
                 {"particle_count", "max_iterations", "inertia_weight", "cognitive_coeff", "social_coeff",
                  "position_precision_m", "early_stop_patience", "seed"});
  if (f.has("particle_count")) base.particle_count = f.integer("particle_count");
  if (f.has("max_iterations")) base.max_iterations = f.integer("max_iterations");
  if (auto v = f.number_opt("inertia_weight")) base.inertia_weight = *v;
  if (auto v = f.number_opt("cognitive_coeff")) base.cognitive_coeff = *v;
  if (auto v = f.number_opt("social_coeff")) base.social_coeff = *v;
  if (auto v = f.number_opt("position_precision_m")) base.position_precision_m = *v;
  if (f.has("early_stop_patience")) base.early_stop_patience = f.integer("early_stop_patience");
  if (f.has("seed")) base.seed = f.integer("seed");
  rethrow_as_config(path, [&] {
    base.validate();
    return 0;
  });
  return base;
}

ScenarioDocument parse_scenario_document(const json& doc) {
  const Fields f(doc, "", {"label", "seed", "venue", "b_max_hz", "ues", "channel", "pso", "policy"});
  ScenarioDocument out;
  Scenario& s = out.scenario;
  if (f.has("label")) s.label = f.string("label");
  if (f.has("seed")) s.seed = f.integer("seed");

  const Fields venue(f.get("venue"), "venue", {"x", "y", "z_uav"});
  const auto [x0, x1] = range(venue, "x");
  const auto [y0, y1] = range(venue, "y");
  const auto [z0, z1] = range(venue, "z_uav");
  s.venue = {x0, x1, y0, y1, z0, z1};
  if (auto v = f.number_opt("b_max_hz")) s.b_max_hz = *v;

  const json& ues = f.get("ues");
  if (!ues.is_array()) throw ConfigError("ues", "expected an array, got " + type_name(ues));
  for (std::size_t i = 0; i < ues.size(); ++i) {
    const Fields u(ues[i], "ues[" + std::to_string(i) + "]", {"x", "y", "z", "demand_bps", "bandwidth_hz"});
    UserEquipment ue;
    ue.position = {u.number("x"), u.number("y"), u.number_opt("z").value_or(0.0)};
    ue.demand_bps = u.number("demand_bps");
    if (auto b = u.number_opt("bandwidth_hz")) ue.bandwidth_hz = *b;
    s.ues.push_back(ue);
  }

  if (f.has("channel")) out.channel = parse_channel(f.get("channel"), out.channel);
  if (f.has("pso")) out.pso = parse_swarm(f.get("pso"), out.pso);
  if (f.has("policy")) {
    const Fields p(f.get("policy"), "policy", {"bandwidth"});
    if (p.has("bandwidth")) s.bandwidth_policy = policy_value(p, "bandwidth");
  }
  rethrow_as_config("", [&] {
    s.validate();
    return 0;
  });
  return out;
}

RunConfig parse_run_config(const json& doc) {
  const Fields f(doc, "", {"channel", "pso", "policy", "seed", "out"});
  RunConfig out;
  // Sections are checked against defaults now so errors surface with their path.
  if (f.has("channel")) {
    parse_channel(f.get("channel"), {});
    out.channel = f.get("channel");
  }
  if (f.has("pso")) {
    parse_swarm(f.get("pso"), {});
    out.pso = f.get("pso");
  }
  if (f.has("policy")) {
    const Fields p(f.get("policy"), "policy", {"bandwidth", "b_max_hz", "z_uav"});
    if (p.has("bandwidth")) out.policy.bandwidth = policy_value(p, "bandwidth");
    if (auto v = p.number_opt("b_max_hz")) {
      if (!(*v > 0.0)) throw ConfigError(p.at("b_max_hz"), "must be > 0");
      out.policy.b_max_hz = *v;
    }
    if (p.has("z_uav")) {
      const auto [lo, hi] = range(p, "z_uav");
      if (!(lo < hi)) throw ConfigError(p.at("z_uav"), "min must be below max");
      out.policy.z_min = lo;
      out.policy.z_max = hi;
    }
  }
  if (f.has("seed")) out.seed = f.integer("seed");
  if (f.has("out")) out.out = f.string("out");
  return out;
}

void apply_run_config(const RunConfig& config, ScenarioDocument& doc) {
  if (config.channel) doc.channel = parse_channel(*config.channel, doc.channel);
  if (config.pso) doc.pso = parse_swarm(*config.pso, doc.pso);
  config.policy.apply(doc.scenario);
  if (config.seed) doc.pso.seed = *config.seed;
  rethrow_as_config("policy", [&] {
    doc.scenario.validate();
    return 0;
  });
}

json channel_to_json(const ChannelParams& p) {
  return {{"carrier_frequency_hz", p.carrier_frequency_hz},
          {"tx_power_w", p.tx_power_w},
          {"tx_antenna_gain", p.tx_antenna_gain},
          {"rx_antenna_gain", p.rx_antenna_gain},
          {"noise_spectral_density_w_per_hz", p.noise_spectral_density},
          {"c1", p.c1},
          {"c2", p.c2},
          {"mu_los", p.mu_los},
          {"mu_nlos", p.mu_nlos},
          {"los_threshold", p.los_threshold}};
}

json swarm_to_json(const SwarmConfig& c) {
  return {{"particle_count", c.particle_count},
          {"max_iterations", c.max_iterations},
          {"inertia_weight", c.inertia_weight},
          {"cognitive_coeff", c.cognitive_coeff},
          {"social_coeff", c.social_coeff},
          {"position_precision_m", c.position_precision_m},
          {"early_stop_patience", c.early_stop_patience},
          {"seed", c.seed}};
}

json scenario_to_json(const ScenarioDocument& doc) {
  const Scenario& s = doc.scenario;
  json ues = json::array();
  for (const auto& ue : s.ues) {
    ues.push_back({{"x", ue.position.x},
                   {"y", ue.position.y},
                   {"z", ue.position.z},
                   {"demand_bps", ue.demand_bps},
                   {"bandwidth_hz", ue.bandwidth_hz}});
  }
  return {{"label", s.label},
          {"seed", s.seed},
          {"venue",
           {{"x", {s.venue.x_min, s.venue.x_max}},
            {"y", {s.venue.y_min, s.venue.y_max}},
            {"z_uav", {s.venue.z_min, s.venue.z_max}}}},
          {"b_max_hz", s.b_max_hz},
          {"ues", std::move(ues)},
          {"channel", channel_to_json(doc.channel)},
          {"pso", swarm_to_json(doc.pso)},
          {"policy", {{"bandwidth", std::string(to_string(s.bandwidth_policy))}}}};
}

namespace {

json point_json(const Point3& p) { return {{"x", p.x}, {"y", p.y}, {"z", p.z}}; }

json positions_json(const std::vector<Point3>& positions) {
  json out = json::array();
  for (const auto& p : positions) out.push_back(point_json(p));
  return out;
}

}  // namespace

json validation_to_json(const ValidationReport& report) {
  json constraints = json::array();
  for (const auto& c : report.checks) {
    constraints.push_back({{"name", c.name},
                           {"residual", c.residual},
                           {"unit", c.unit},
                           {"violations", c.violations},
                           {"passed", c.passed()}});
  }
  return {{"passed", report.passed()}, {"constraints", std::move(constraints)}};
}

json results_to_json(const Deployment& deployment, const ValidationReport& report) {
  json assoc = json::array();
  for (const auto& link : deployment.links) {
    assoc.push_back(
        {{"ue", link.ue}, {"uav", link.uav}, {"bandwidth_hz", link.bandwidth_hz}, {"rate_bps", link.rate_bps}});
  }
  return {{"uav_count", deployment.uav_count},
          {"positions", positions_json(deployment.uav_positions)},
          {"assoc", std::move(assoc)},
          {"aggregate_bps", deployment.aggregate_throughput_bps},
          {"validation", validation_to_json(report)}};
}

json zones_to_json(const std::vector<CandidateZone>& zones) {
  json out = json::array();
  for (const auto& z : zones) {
    out.push_back({{"members", z.members}, {"witness", point_json(z.witness)}, {"slack_m", z.slack}});
  }
  return out;
}

json pool_to_json(const std::vector<Deployment>& pool, const Deployment& selected) {
  json out = json::array();
  for (const auto& d : pool) {
    out.push_back({{"uav_count", d.uav_count},
                   {"aggregate_bps", d.aggregate_throughput_bps},
                   {"positions", positions_json(d.uav_positions)},
                   {"selected", d == selected}});
  }
  return out;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column), "invalid JSON");
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

ScenarioDocument read_scenario_file(const std::filesystem::path& path) {
  return parse_scenario_document(parse_json_text(read_text_file(path)));
}

RunConfig read_run_config(const std::filesystem::path& path) {
  return parse_run_config(parse_json_text(read_text_file(path)));
}

}  // namespace uavplan
