#include "forster/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "forster/errors.hpp"
#include "forster/units.hpp"

namespace forster {

const std::vector<KeySpec>& config_keys() {
  using D = Dimension;
  static const std::vector<KeySpec> keys = {
      {"experiment", D::Text, ""},
      {"n", D::Count, "70"},
      {"R", D::Length, "10 um"},
      {"window", D::Frequency, "2 GHz"},
      {"next_nearest", D::Flag, "true"},
      {"decay", D::Flag, "true"},
      {"temperature", D::Temperature, "300 K"},
      {"F_S", D::Field, "0.1763 V/cm"},
      {"F_RF", D::Field, "0.05 V/cm"},
      {"nu", D::Frequency, "50 MHz"},
      {"T_ex", D::Time, "20 ns"},
      {"T_wait1", D::Time, "20 ns"},
      {"T_RF", D::Time, "1.27 us"},
      {"T_wait2", D::Time, "20 ns"},
      {"T_deex", D::Time, "20 ns"},
      {"T_int", D::Time, "0.635 us"},
      {"duration", D::Time, "3 us"},
      {"sample_step", D::Time, "2 ns"},
      {"phi_target", D::Angle, "1 pi"},
      {"rtol", D::Number, "1e-9"},
      {"atol", D::Number, "1e-11"},
      {"scan_start", D::Field, "0.02 V/cm"},
      {"scan_stop", D::Field, "0.195 V/cm"},
      {"scan_step", D::Field, "1 mV/cm"},
      {"peak_min_height", D::Number, "0.05"},
      {"sidelobe_window", D::Frequency, "3 MHz"},
      {"s_max", D::Count, "3"},
      {"seed", D::Count, "1"},
      {"budget", D::Count, "2000"},
      {"anneal_temperature", D::Number, "1e-3"},
      {"anneal_cooling", D::Number, "0.95"},
      {"anneal_stage", D::Count, "20"},
      {"proposal_scale", D::Number, "0.02"},
      {"nm_tolerance", D::Number, "1e-4"},
      {"F_RF_min", D::Field, "0.02 V/cm"},
      {"F_RF_max", D::Field, "0.07 V/cm"},
      {"nu_span", D::Frequency, "2 MHz"},
      {"nu_scan_step", D::Frequency, "0 MHz"},
      {"wait_max", D::Time, "200 ns"},
      {"phi_targets", D::Angle, "0.25 0.5 0.75 1 pi", true},
      {"temperatures", D::Temperature, "300 4 K", true},
      {"F_RF_starts", D::Field, "0.0389 0.03409 0.0416 0.05 V/cm", true},
      {"nu_starts", D::Frequency, "46.75 47.1 48.35 50 MHz", true},
      {"T_wait1_starts", D::Time, "20 20 20 20 ns", true},
      {"T_wait2_starts", D::Time, "20 20 20 20 ns", true},
      {"sensitivity_budget", D::Points, "0.1 pp"},
      {"output_dir", D::Text, "default"},
      {"constants", D::Text, "default"},
  };
  return keys;
}

namespace {

const KeySpec* find_spec(const std::string& key) {
  for (const auto& k : config_keys()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

double unit_factor(Dimension dim, const std::string& unit, bool& ok) {
  ok = true;
  static const std::map<Dimension, std::map<std::string, double>> table = {
      {Dimension::Length, {{"um", 1.0}, {"nm", 1e-3}, {"mm", 1e3}, {"m", 1e6}}},
      {Dimension::Field, {{"V/cm", 1.0}, {"mV/cm", 1e-3}, {"V/m", 1e-2}}},
      {Dimension::Frequency, {{"MHz", 1.0}, {"kHz", 1e-3}, {"GHz", 1e3}, {"Hz", 1e-6}}},
      {Dimension::Time, {{"us", 1.0}, {"ns", 1e-3}, {"ms", 1e3}, {"s", 1e6}}},
      {Dimension::Temperature, {{"K", 1.0}}},
      {Dimension::Angle, {{"rad", 1.0}, {"pi", units::pi}, {"deg", units::pi / 180.0}}},
      {Dimension::Points, {{"pp", 1e-2}, {"%", 1e-2}}},
  };
  const auto d = table.find(dim);
  if (d == table.end()) {
    ok = unit.empty();
    return 1.0;
  }
  const auto u = d->second.find(unit);
  if (u == d->second.end()) {
    ok = false;
    return 0.0;
  }
  return u->second;
}

std::string dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Length: return "length (um, nm, mm, m)";
    case Dimension::Field: return "field (V/cm, mV/cm, V/m)";
    case Dimension::Frequency: return "frequency (MHz, kHz, GHz, Hz)";
    case Dimension::Time: return "time (us, ns, ms, s)";
    case Dimension::Temperature: return "temperature (K)";
    case Dimension::Angle: return "angle (rad, pi, deg)";
    case Dimension::Points: return "fidelity points (pp, %)";
    default: return "dimensionless";
  }
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ' ' || ch == '\t' || ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<double> parse_quantity(const std::string& text, Dimension dim, bool list,
                                   const std::string& where) {
  auto t = tokens(text);
  if (t.empty()) throw ConfigError(where + ": missing value");
  std::string unit;
  const bool dimensional = dim != Dimension::Count && dim != Dimension::Number;
  if (dimensional) {
    if (t.size() < 2) throw ConfigError(where + ": missing unit, expected " + dimension_name(dim));
    unit = t.back();
    t.pop_back();
  }
  bool ok = false;
  const double factor = unit_factor(dim, unit, ok);
  if (!ok) throw ConfigError(where + ": unit '" + unit + "' is not a " + dimension_name(dim));
  if (!list && t.size() != 1) throw ConfigError(where + ": expected a single value");
  std::vector<double> out;
  for (const auto& tok : t) {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw ConfigError(where + ": malformed number '" + tok + "'");
    }
    if (dim == Dimension::Count && v != std::floor(v)) {
      throw ConfigError(where + ": expected an integer, got '" + tok + "'");
    }
    out.push_back(v * factor);
  }
  return out;
}

RunConfig RunConfig::parse(std::istream& in, const std::string& source) {
  RunConfig c;
  c.source_ = source;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const auto col = [&](std::size_t pos) { return std::to_string(pos + 1); };
    const std::string here = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw ConfigError(here + ":" + col(line.find_first_not_of(" \t")) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto* spec = find_spec(key);
    if (!spec) throw ConfigError(here + ":" + col(line.find(key)) + ": unknown key '" + key + "'");
    if (c.set_.count(key)) throw ConfigError(here + ":" + col(line.find(key)) + ": duplicate key '" + key + "'");
    const std::string where = here + ":" + col(eq + 1 + line.substr(eq + 1).find_first_not_of(" \t"));
    if (value.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
    if (spec->dim != Dimension::Text && spec->dim != Dimension::Flag) {
      parse_quantity(value, spec->dim, spec->list, where);
    }
    if (spec->dim == Dimension::Flag && value != "true" && value != "false") {
      throw ConfigError(where + ": expected true or false for '" + key + "'");
    }
    static const std::vector<std::string> kinds = {"stark-scan", "dynamics",    "gate",
                                                   "fidelity",   "optimize",    "sensitivity",
                                                   "floquet-map"};
    if (key == "experiment" && std::find(kinds.begin(), kinds.end(), value) == kinds.end()) {
      throw ConfigError(where + ": unknown experiment '" + value + "'");
    }
    c.set_[key] = value;
  }
  if (!c.set_.count("experiment")) {
    throw ConfigError(source + ": missing required key 'experiment'");
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse(in, path.string());
}

const std::string& RunConfig::raw(const std::string& key) const {
  const auto* spec = find_spec(key);
  if (!spec) throw ConfigError("unknown key '" + key + "'");
  const auto it = set_.find(key);
  if (it != set_.end()) return it->second;
  if (spec->fallback.empty()) throw ConfigError(source_ + ": missing required key '" + key + "'");
  return spec->fallback;
}

std::string RunConfig::text(const std::string& key) const { return raw(key); }

double RunConfig::number(const std::string& key) const {
  const auto* spec = find_spec(key);
  if (!spec) throw ConfigError("unknown key '" + key + "'");
  return parse_quantity(raw(key), spec->dim, false, source_ + ": " + key).front();
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  const auto* spec = find_spec(key);
  if (!spec) throw ConfigError("unknown key '" + key + "'");
  return parse_quantity(raw(key), spec->dim, true, source_ + ": " + key);
}

int RunConfig::count(const std::string& key) const {
  return static_cast<int>(std::lround(number(key)));
}

bool RunConfig::flag(const std::string& key) const { return raw(key) == "true"; }

void RunConfig::set(const std::string& key, const std::string& value) {
  // Validate through the file parser so overrides obey the same rules.
  std::istringstream one(key == "experiment" ? "experiment = " + value + "\n"
                                             : key + " = " + value + "\nexperiment = gate\n");
  parse(one, "override");
  set_[key] = value;
}

void RunConfig::write_resolved(std::ostream& out) const {
  out << "# resolved configuration (defaults included)\n";
  for (const auto& k : config_keys()) {
    out << k.key << " = " << raw(k.key) << (set_.count(k.key) ? "" : "  # default") << "\n";
  }
}

}  // namespace forster
