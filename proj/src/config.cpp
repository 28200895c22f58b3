// Copyright 2026 The mpxcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpx/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "mpx/errors.hpp"

namespace mpx {

namespace {

struct UnitEntry {
  const char* name;
  double factor;
};

const std::vector<UnitEntry>& units(Dim d) {
  static const std::vector<UnitEntry> none = {};
  static const std::vector<UnitEntry> angle = {{"rad", 1.0}, {"deg", std::numbers::pi / 180.0}};
  static const std::vector<UnitEntry> freq = {{"Hz", 1e-6}, {"kHz", 1e-3}, {"MHz", 1.0}, {"GHz", 1e3}};
  static const std::vector<UnitEntry> carrier = {{"Hz", 1e-9}, {"kHz", 1e-6}, {"MHz", 1e-3}, {"GHz", 1.0}};
  static const std::vector<UnitEntry> time = {{"s", 1e6}, {"ms", 1e3}, {"us", 1.0}, {"\xC2\xB5s", 1.0},
                                              {"ns", 1e-3}, {"ps", 1e-6}};
  static const std::vector<UnitEntry> rate = {{"1/s", 1e-6},  {"s^-1", 1e-6}, {"1/ms", 1e-3}, {"ms^-1", 1e-3},
                                              {"1/us", 1.0},  {"us^-1", 1.0}, {"/us", 1.0},   {"1/ns", 1e3},
                                              {"ns^-1", 1e3}, {"/ns", 1e3}};
  static const std::vector<UnitEntry> volt = {{"V", 1.0}, {"mV", 1e-3}, {"uV", 1e-6}};
  static const std::vector<UnitEntry> xi = {{"GHz/V", 1.0}, {"MHz/V", 1e-3}, {"MHz/mV", 1.0}};
  static const std::vector<UnitEntry> mu = {{"1/(mV us)", 1.0}, {"(mV us)^-1", 1.0}, {"1/(V us)", 1e-3},
                                            {"(V us)^-1", 1e-3}};
  switch (d) {
    case Dim::none: return none;
    case Dim::angle: return angle;
    case Dim::frequency: return freq;
    case Dim::carrier: return carrier;
    case Dim::time: return time;
    case Dim::rate: return rate;
    case Dim::voltage: return volt;
    case Dim::xi: return xi;
    case Dim::mu: return mu;
  }
  return none;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& s, size_t& used) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc()) throw ConfigError(fmt::format("expected a number in '{}'", s));
  used = static_cast<size_t>(ptr - s.data());
  return v;
}

struct ParamField {
  const char* name;
  Dim dim;
  double SystemParams::*member;
};

const std::vector<ParamField>& param_fields() {
  static const std::vector<ParamField> f = {
      {"f_ro", Dim::carrier, &SystemParams::f_ro},
      {"f_s", Dim::carrier, &SystemParams::f_s},
      {"f_yn", Dim::carrier, &SystemParams::f_yn},
      {"f_mp", Dim::carrier, &SystemParams::f_mp},
      {"chi_s_yn", Dim::frequency, &SystemParams::chi_s_yn},
      {"chi_s_mp", Dim::frequency, &SystemParams::chi_s_mp},
      {"chi_ro_yn", Dim::frequency, &SystemParams::chi_ro_yn},
      {"chi_yn_yn", Dim::frequency, &SystemParams::chi_yn_yn},
      {"chi_mp_mp", Dim::frequency, &SystemParams::chi_mp_mp},
      {"chi_s_s", Dim::frequency, &SystemParams::chi_s_s},
      {"chi_s_s_yn", Dim::frequency, &SystemParams::chi_s_s_yn},
      {"chi_s_s_mp", Dim::frequency, &SystemParams::chi_s_s_mp},
      {"Gamma_ro", Dim::rate, &SystemParams::Gamma_ro},
      {"Gamma_1_s", Dim::rate, &SystemParams::Gamma_1_s},
      {"Gamma_2_s", Dim::rate, &SystemParams::Gamma_2_s},
      {"Gamma_1_yn", Dim::rate, &SystemParams::Gamma_1_yn},
      {"Gamma_2_yn", Dim::rate, &SystemParams::Gamma_2_yn},
      {"Gamma_1_mp", Dim::rate, &SystemParams::Gamma_1_mp},
      {"Gamma_2_mp", Dim::rate, &SystemParams::Gamma_2_mp},
      {"n_th_s", Dim::none, &SystemParams::n_th_s},
  };
  return f;
}

struct TimingField {
  const char* name;
  double PulseTiming::*member;
};

const std::vector<TimingField>& timing_fields() {
  static const std::vector<TimingField> f = {
      {"displacement_delay", &PulseTiming::displacement_delay},
      {"displacement_duration", &PulseTiming::displacement_duration},
      {"displacement_width", &PulseTiming::displacement_width},
      {"probe_delay", &PulseTiming::probe_delay},
      {"probe_duration", &PulseTiming::probe_duration},
      {"probe_width", &PulseTiming::probe_width},
  };
  return f;
}

std::string scalar(const YAML::Node& n, const std::string& where) {
  if (!n.IsScalar()) throw ConfigError(fmt::format("{}: expected a scalar", where));
  return n.as<std::string>();
}

double quantity(const YAML::Node& n, Dim d, const std::string& where) {
  try {
    return parse_quantity(scalar(n, where), d);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", where, e.what()));
  }
}

bool boolean(const YAML::Node& n, const std::string& where) {
  std::string s = scalar(n, where);
  if (s == "true" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "no" || s == "off") return false;
  throw ConfigError(fmt::format("{}: expected true or false, got '{}'", where, s));
}

long integer(const YAML::Node& n, const std::string& where) {
  std::string s = trim(scalar(n, where));
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", where, s));
  return v;
}

void require_map(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) throw ConfigError(fmt::format("{}: expected a mapping", where));
}

void read_params(const YAML::Node& n, SystemParams& p) {
  require_map(n, "params");
  if (n["preset"]) {
    std::string preset = scalar(n["preset"], "params.preset");
    if (preset == "table") {
      p = table_params();
    } else if (preset == "fitted") {
      p = fitted_params();
    } else {
      throw ConfigError(fmt::format("params.preset: unknown preset '{}'", preset));
    }
  }
  for (auto it = n.begin(); it != n.end(); ++it) {
    std::string key = it->first.as<std::string>();
    std::string where = "params." + key;
    if (key == "preset") continue;
    if (key == "calibration") {
      const YAML::Node& c = it->second;
      require_map(c, where);
      for (auto jt = c.begin(); jt != c.end(); ++jt) {
        std::string ck = jt->first.as<std::string>();
        std::string cw = where + "." + ck;
        if (ck == "mu") {
          p.calibration.mu = quantity(jt->second, Dim::mu, cw);
        } else if (ck == "photons_per_volt") {
          p.calibration.photons_per_volt = 1.0 / parse_quantity(
              "1 / (" + scalar(jt->second, cw) + ")", Dim::none);
        } else if (ck == "xi") {
          p.calibration.xi = quantity(jt->second, Dim::xi, cw);
        } else {
          throw ConfigError(fmt::format("{}: unknown key", cw));
        }
      }
      continue;
    }
    bool found = false;
    for (const auto& f : param_fields()) {
      if (key == f.name) {
        p.*(f.member) = quantity(it->second, f.dim, where);
        found = true;
      }
    }
    if (!found) throw ConfigError(fmt::format("{}: unknown parameter", where));
  }
}

void read_model(const YAML::Node& n, ModelOptions& m) {
  require_map(n, "model");
  for (auto it = n.begin(); it != n.end(); ++it) {
    std::string key = it->first.as<std::string>();
    std::string w = "model." + key;
    const YAML::Node& v = it->second;
    if (key == "storage_dim") m.storage_dim = static_cast<int>(integer(v, w));
    else if (key == "eliminate_spectator") m.eliminate_spectator = boolean(v, w);
    else if (key == "linear_displacement") m.linear_displacement = boolean(v, w);
    else if (key == "thermal") m.thermal = boolean(v, w);
    else if (key == "storage_loss") m.storage_loss = boolean(v, w);
    else if (key == "storage_dephasing") m.storage_dephasing = boolean(v, w);
    else if (key == "comb_tones") m.comb_tones = static_cast<int>(integer(v, w));
    else if (key == "gamma_1_mp_scale") m.gamma_1_mp_scale = quantity(v, Dim::none, w);
    else if (key == "comb_phases") {
      if (!v.IsSequence()) throw ConfigError(w + ": expected a list");
      m.comb_phases.clear();
      for (size_t i = 0; i < v.size(); ++i) m.comb_phases.push_back(quantity(v[i], Dim::angle, w));
    } else {
      throw ConfigError(w + ": unknown key");
    }
  }
}

void read_timing(const YAML::Node& n, PulseTiming& t) {
  require_map(n, "timing");
  for (auto it = n.begin(); it != n.end(); ++it) {
    std::string key = it->first.as<std::string>();
    std::string w = "timing." + key;
    bool found = false;
    for (const auto& f : timing_fields()) {
      if (key != f.name) continue;
      found = true;
      if (key == "probe_delay" && scalar(it->second, w) == "auto") {
        t.probe_delay = -1.0;
      } else {
        t.*(f.member) = quantity(it->second, Dim::time, w);
      }
    }
    if (!found) throw ConfigError(w + ": unknown key");
  }
}

void read_solver(const YAML::Node& n, SolverSettings& s) {
  require_map(n, "solver");
  for (auto it = n.begin(); it != n.end(); ++it) {
    std::string key = it->first.as<std::string>();
    std::string w = "solver." + key;
    if (key == "method") {
      std::string m = scalar(it->second, w);
      if (m == "rk4") s.method = Method::rk4;
      else if (m == "dopri5") s.method = Method::dopri5;
      else throw ConfigError(fmt::format("{}: unknown method '{}'", w, m));
    } else if (key == "dt") {
      s.dt = quantity(it->second, Dim::time, w);
    } else if (key == "rtol") {
      s.rtol = quantity(it->second, Dim::none, w);
    } else if (key == "atol") {
      s.atol = quantity(it->second, Dim::none, w);
    } else if (key == "max_step") {
      s.max_step = quantity(it->second, Dim::time, w);
    } else {
      throw ConfigError(w + ": unknown key");
    }
  }
}

std::vector<double> read_axis(const YAML::Node& v, Dim d, const std::string& w) {
  std::vector<double> out;
  if (v.IsSequence()) {
    for (size_t i = 0; i < v.size(); ++i) out.push_back(quantity(v[i], d, w));
    return out;
  }
  require_map(v, w);
  if (!v["start"] || !v["stop"]) throw ConfigError(w + ": a range needs start and stop");
  double a = quantity(v["start"], d, w + ".start");
  double b = quantity(v["stop"], d, w + ".stop");
  if (v["points"]) {
    long n = integer(v["points"], w + ".points");
    if (n < 1) throw ConfigError(w + ".points: must be >= 1");
    if (n == 1) return {a};
    for (long i = 0; i < n; ++i) out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
  }
  if (!v["step"]) throw ConfigError(w + ": a range needs step or points");
  double h = quantity(v["step"], d, w + ".step");
  if (!(h > 0)) throw ConfigError(w + ".step: must be > 0");
  long n = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
  if (n < 1 || n > 1000000) throw ConfigError(w + ": empty or oversized range");
  for (long i = 0; i < n; ++i) out.push_back(a + h * static_cast<double>(i));
  return out;
}

void set_path(YAML::Node node, const std::vector<std::string>& parts, size_t i, const YAML::Node& value) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = value;
    return;
  }
  if (!node[parts[i]] || !node[parts[i]].IsMap()) node[parts[i]] = YAML::Node(YAML::NodeType::Map);
  set_path(node[parts[i]], parts, i + 1, value);
}

void apply_override(YAML::Node& root, const std::string& kv) {
  size_t eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(fmt::format("override '{}': expected key=value", kv));
  std::string key = trim(kv.substr(0, eq));
  std::string val = trim(kv.substr(eq + 1));
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError(fmt::format("override '{}': empty key segment", kv));
    parts.push_back(part);
  }
  YAML::Node v;
  try {
    v = YAML::Load(val);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("override '{}': {}", kv, e.what()));
  }
  if (v.IsNull()) v = YAML::Node(val);
  set_path(root, parts, 0, v);
}

void emit_quantity(YAML::Emitter& out, const std::string& key, double v, Dim d) {
  out << YAML::Key << key << YAML::Value << format_quantity(v, d);
}

}  // namespace

const char* canonical_unit(Dim d) {
  switch (d) {
    case Dim::none: return "";
    case Dim::angle: return "rad";
    case Dim::frequency: return "MHz";
    case Dim::carrier: return "GHz";
    case Dim::time: return "us";
    case Dim::rate: return "1/us";
    case Dim::voltage: return "V";
    case Dim::xi: return "GHz/V";
    case Dim::mu: return "1/(mV us)";
  }
  return "";
}

double parse_quantity(const std::string& text, Dim d) {
  std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty quantity");
  const std::string inv = ")^-1";
  if (d == Dim::rate && s.front() == '(' && s.size() > inv.size() + 1 &&
      s.compare(s.size() - inv.size(), inv.size(), inv) == 0) {
    double t = parse_quantity(s.substr(1, s.size() - 1 - inv.size()), Dim::time);
    if (!(t > 0)) throw ConfigError(fmt::format("'{}': time constant must be > 0", s));
    return 1.0 / t;
  }
  if (d == Dim::none && s.rfind("1 / (", 0) == 0 && s.back() == ')') {
    // Internal helper form for reciprocal plain numbers with a unit.
    std::string inner = trim(s.substr(5, s.size() - 6));
    size_t used = 0;
    double v = parse_number(inner, used);
    std::string unit = trim(inner.substr(used));
    if (unit.empty() || unit == "1/V") return 1.0 / v;
    if (unit == "1/mV") return 1e-3 / v;
    throw ConfigError(fmt::format("'{}': expected 1/V", inner));
  }
  size_t used = 0;
  double v = parse_number(s, used);
  std::string unit = trim(s.substr(used));
  if (unit.empty()) {
    if (d == Dim::none || d == Dim::angle) return v;
    throw ConfigError(fmt::format("'{}': missing unit, expected {}", s, canonical_unit(d)));
  }
  for (const auto& u : units(d))
    if (unit == u.name) return u.factor == 1.0 ? v : v * u.factor;
  throw ConfigError(fmt::format("'{}': unit '{}' is not a valid {} unit", s, unit,
                                d == Dim::none ? "dimensionless" : canonical_unit(d)));
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string format_quantity(double v, Dim d) {
  const char* u = canonical_unit(d);
  if (*u == '\0') return format_number(v);
  return fmt::format("{} {}", v, u);
}

double ScenarioConfig::get(const std::string& key) const {
  auto it = settings.find(key);
  if (it == settings.end()) throw ConfigError(fmt::format("setting '{}' is not defined for {}", key, scenario));
  return it->second;
}

const std::string& ScenarioConfig::option(const std::string& key) const {
  auto it = options.find(key);
  if (it == options.end()) throw ConfigError(fmt::format("option '{}' is not defined for {}", key, scenario));
  return it->second;
}

bool ScenarioConfig::swept(const std::string& key) const {
  for (const auto& a : sweeps)
    if (a.name == key) return true;
  return false;
}

std::vector<double> ScenarioConfig::axis(const std::string& key) const {
  for (const auto& a : sweeps)
    if (a.name == key) return a.values;
  return {get(key)};
}

const SettingSpec* ScenarioSchema::setting(const std::string& key) const {
  for (const auto& s : settings)
    if (s.key == key) return &s;
  return nullptr;
}

const OptionSpec* ScenarioSchema::option(const std::string& key) const {
  for (const auto& o : options)
    if (o.key == key) return &o;
  return nullptr;
}

ScenarioConfig parse_config(const std::string& yaml, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("config is not valid YAML: {}", e.what()));
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  require_map(root, "config");
  for (const auto& kv : overrides) apply_override(root, kv);

  if (!root["scenario"]) throw ConfigError("config: missing 'scenario'");
  std::string name = scalar(root["scenario"], "scenario");
  const ScenarioSchema& schema = scenario_schema(name);
  ScenarioConfig cfg = schema.defaults;
  cfg.scenario = name;
  for (const auto& s : schema.settings) cfg.settings[s.key] = s.value;
  for (const auto& o : schema.options) cfg.options[o.key] = o.value;

  try {
    for (auto it = root.begin(); it != root.end(); ++it) {
      std::string key = it->first.as<std::string>();
      const YAML::Node& v = it->second;
      if (key == "scenario") continue;
      if (key == "seed") {
        long s = integer(v, "seed");
        if (s < 0) throw ConfigError("seed: must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
      } else if (key == "output") {
        cfg.output = scalar(v, "output");
      } else if (key == "params") {
        read_params(v, cfg.params);
      } else if (key == "model") {
        read_model(v, cfg.model);
      } else if (key == "timing") {
        read_timing(v, cfg.timing);
      } else if (key == "solver") {
        read_solver(v, cfg.solver);
      } else if (key == "settings") {
        require_map(v, "settings");
        for (auto jt = v.begin(); jt != v.end(); ++jt) {
          std::string k = jt->first.as<std::string>();
          const SettingSpec* spec = schema.setting(k);
          if (!spec) throw ConfigError(fmt::format("settings.{}: not a setting of {}", k, name));
          cfg.settings[k] = quantity(jt->second, spec->dim, "settings." + k);
        }
      } else if (key == "options") {
        require_map(v, "options");
        for (auto jt = v.begin(); jt != v.end(); ++jt) {
          std::string k = jt->first.as<std::string>();
          if (!schema.option(k)) throw ConfigError(fmt::format("options.{}: not an option of {}", k, name));
          cfg.options[k] = scalar(jt->second, "options." + k);
        }
      } else if (key == "sweep") {
        require_map(v, "sweep");
        for (auto jt = v.begin(); jt != v.end(); ++jt) {
          std::string k = jt->first.as<std::string>();
          const SettingSpec* spec = schema.setting(k);
          if (!spec) throw ConfigError(fmt::format("sweep.{}: not a setting of {}", k, name));
          std::vector<double> vals = read_axis(jt->second, spec->dim, "sweep." + k);
          auto pos = std::find_if(cfg.sweeps.begin(), cfg.sweeps.end(), [&](const SweepAxis& a) { return a.name == k; });
          if (vals.empty()) {
            if (pos != cfg.sweeps.end()) cfg.sweeps.erase(pos);
          } else if (pos != cfg.sweeps.end()) {
            pos->values = vals;
          } else {
            cfg.sweeps.push_back({k, vals});
          }
        }
      } else {
        throw ConfigError(fmt::format("{}: unknown section", key));
      }
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string serialize_config(const ScenarioConfig& cfg) {
  const ScenarioSchema& schema = scenario_schema(cfg.scenario);
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "scenario" << YAML::Value << cfg.scenario;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  if (!cfg.output.empty()) out << YAML::Key << "output" << YAML::Value << cfg.output;

  out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  for (const auto& f : param_fields()) emit_quantity(out, f.name, cfg.params.*(f.member), f.dim);
  out << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
  emit_quantity(out, "mu", cfg.params.calibration.mu, Dim::mu);
  out << YAML::Key << "photons_per_volt" << YAML::Value
      << fmt::format("{} 1/V", cfg.params.calibration.photons_per_volt);
  emit_quantity(out, "xi", cfg.params.calibration.xi, Dim::xi);
  out << YAML::EndMap << YAML::EndMap;

  const ModelOptions& m = cfg.model;
  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "storage_dim" << YAML::Value << m.storage_dim;
  out << YAML::Key << "eliminate_spectator" << YAML::Value << m.eliminate_spectator;
  out << YAML::Key << "linear_displacement" << YAML::Value << m.linear_displacement;
  out << YAML::Key << "thermal" << YAML::Value << m.thermal;
  out << YAML::Key << "storage_loss" << YAML::Value << m.storage_loss;
  out << YAML::Key << "storage_dephasing" << YAML::Value << m.storage_dephasing;
  out << YAML::Key << "comb_tones" << YAML::Value << m.comb_tones;
  out << YAML::Key << "comb_phases" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double ph : m.comb_phases) out << format_quantity(ph, Dim::angle);
  out << YAML::EndSeq;
  emit_quantity(out, "gamma_1_mp_scale", m.gamma_1_mp_scale, Dim::none);
  out << YAML::EndMap;

  out << YAML::Key << "timing" << YAML::Value << YAML::BeginMap;
  for (const auto& f : timing_fields()) {
    double v = cfg.timing.*(f.member);
    if (std::string(f.name) == "probe_delay" && v < 0) {
      out << YAML::Key << f.name << YAML::Value << "auto";
    } else {
      emit_quantity(out, f.name, v, Dim::time);
    }
  }
  out << YAML::EndMap;

  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "method" << YAML::Value << (cfg.solver.method == Method::rk4 ? "rk4" : "dopri5");
  emit_quantity(out, "dt", cfg.solver.dt, Dim::time);
  emit_quantity(out, "rtol", cfg.solver.rtol, Dim::none);
  emit_quantity(out, "atol", cfg.solver.atol, Dim::none);
  emit_quantity(out, "max_step", cfg.solver.max_step, Dim::time);
  out << YAML::EndMap;

  if (!cfg.settings.empty()) {
    out << YAML::Key << "settings" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : cfg.settings) {
      const SettingSpec* spec = schema.setting(k);
      emit_quantity(out, k, v, spec ? spec->dim : Dim::none);
    }
    out << YAML::EndMap;
  }
  if (!cfg.options.empty()) {
    out << YAML::Key << "options" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : cfg.options) out << YAML::Key << k << YAML::Value << v;
    out << YAML::EndMap;
  }
  // Axes missing from the text fall back to the defaults when parsed, so every default axis is written,
  // with an empty list marking one that was removed.
  bool any_axis = !cfg.sweeps.empty() || !schema.defaults.sweeps.empty();
  out << YAML::Key << "sweep" << YAML::Value;
  if (!any_axis) out << YAML::Flow;
  out << YAML::BeginMap;
  for (const auto& a : cfg.sweeps) {
    const SettingSpec* spec = schema.setting(a.name);
    out << YAML::Key << a.name << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double v : a.values) out << format_quantity(v, spec ? spec->dim : Dim::none);
    out << YAML::EndSeq;
  }
  for (const auto& d : schema.defaults.sweeps) {
    if (cfg.swept(d.name)) continue;
    out << YAML::Key << d.name << YAML::Value << YAML::Flow << YAML::BeginSeq << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

SolverConfig solver_config(const SolverSettings& s) {
  SolverConfig c;
  c.method = s.method;
  c.dt = s.dt;
  c.rtol = s.rtol;
  c.atol = s.atol;
  c.max_step = s.max_step;
  return c;
}

namespace {

int max_photon_probed(const ScenarioConfig& cfg) {
  double area = window_area(cfg.timing.displacement());
  double gain = area * (cfg.model.linear_displacement ? 2.0 * std::numbers::pi : 1.0);
  double n = 0.0;
  auto top = [&](const std::string& key) {
    double m = 0.0;
    if (!cfg.settings.count(key)) return m;
    for (double v : cfg.axis(key)) m = std::max(m, std::abs(v));
    return m;
  };
  n = std::max(n, std::ceil(top("beta") * top("beta")));
  n = std::max(n, std::ceil(top("nbar")));
  n = std::max(n, top("n_max"));
  n = std::max(n, top("fock_n"));
  n = std::max(n, top("channels") - 1.0);
  double eps = std::max(top("eps_max"), cfg.params.calibration.mu * 1e3 * top("V_max_s"));
  n = std::max(n, std::ceil(std::pow(gain * eps, 2)));
  return static_cast<int>(n);
}

}  // namespace

void validate_config(const ScenarioConfig& cfg) {
  const ScenarioSchema& schema = scenario_schema(cfg.scenario);
  try {
    cfg.params.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(fmt::format("params: {}", e.what()));
  }
  if (cfg.params.calibration.mu <= 0 || cfg.params.calibration.photons_per_volt <= 0 ||
      cfg.params.calibration.xi <= 0)
    throw ConfigError("params.calibration: values must be > 0");

  const ModelOptions& m = cfg.model;
  if (m.storage_dim < 2) throw ConfigError("model.storage_dim: must be >= 2");
  if (m.comb_tones < 1) throw ConfigError("model.comb_tones: must be >= 1");
  if (!m.comb_phases.empty() && static_cast<int>(m.comb_phases.size()) != m.comb_tones)
    throw ConfigError(fmt::format("model.comb_phases: expected {} phases, got {}", m.comb_tones, m.comb_phases.size()));
  if (!(m.gamma_1_mp_scale >= 0)) throw ConfigError("model.gamma_1_mp_scale: must be >= 0");

  const PulseTiming& t = cfg.timing;
  if (!(t.displacement_duration > 0) || !(t.displacement_width > 0) || !(t.probe_duration > 0) ||
      !(t.probe_width > 0))
    throw ConfigError("timing: durations and widths must be > 0");
  if (t.displacement_delay < 0) throw ConfigError("timing.displacement_delay: must be >= 0");

  const SolverSettings& s = cfg.solver;
  if (!(s.dt > 0)) throw ConfigError("solver.dt: must be > 0");
  if (!(s.rtol > 0) || !(s.atol > 0)) throw ConfigError("solver: tolerances must be > 0");
  if (!(s.max_step >= 0)) throw ConfigError("solver.max_step: must be >= 0");

  for (const auto& [k, v] : cfg.settings) {
    const SettingSpec* spec = schema.setting(k);
    if (!spec) throw ConfigError(fmt::format("settings.{}: not a setting of {}", k, cfg.scenario));
    if (!std::isfinite(v)) throw ConfigError(fmt::format("settings.{}: must be finite", k));
    if (v < spec->min) throw ConfigError(fmt::format("settings.{}: must be >= {}", k, spec->min));
  }
  for (const auto& [k, v] : cfg.options) {
    const OptionSpec* spec = schema.option(k);
    if (!spec) throw ConfigError(fmt::format("options.{}: not an option of {}", k, cfg.scenario));
    if (std::find(spec->choices.begin(), spec->choices.end(), v) == spec->choices.end())
      throw ConfigError(fmt::format("options.{}: '{}' is not one of the allowed values", k, v));
  }
  for (const auto& a : cfg.sweeps) {
    const SettingSpec* spec = schema.setting(a.name);
    if (!spec) throw ConfigError(fmt::format("sweep.{}: not a setting of {}", a.name, cfg.scenario));
    if (a.values.empty()) throw ConfigError(fmt::format("sweep.{}: no values", a.name));
    for (double v : a.values) {
      if (!std::isfinite(v)) throw ConfigError(fmt::format("sweep.{}: values must be finite", a.name));
      if (v < spec->min) throw ConfigError(fmt::format("sweep.{}: values must be >= {}", a.name, spec->min));
    }
  }
  int probed = max_photon_probed(cfg);
  if (m.storage_dim < probed + 6)
    throw ConfigError(fmt::format("model.storage_dim: {} is below the {} needed for photon number {} plus 6",
                                  m.storage_dim, probed + 6, probed));
}

}  // namespace mpx
