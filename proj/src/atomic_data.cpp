#include "forster/atomic_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "forster/errors.hpp"
#include "forster/matrix_elements.hpp"
#include "forster/units.hpp"

namespace forster {

char orbital_letter(int l) {
  static constexpr char letters[] = "SPDFGHIK";
  if (l < 0 || l > 7) throw InvalidLevelError("orbital quantum number out of range");
  return letters[l];
}

namespace {

std::string half_integer(int two_x, bool sign) {
  std::string s;
  if (sign) s += two_x < 0 ? "-" : "+";
  const int a = std::abs(two_x);
  s += (a % 2 == 0) ? std::to_string(a / 2) : std::to_string(a) + "/2";
  return s;
}

}  // namespace

std::string series_key(int l, int two_j) {
  return std::string(1, orbital_letter(l)) + half_integer(two_j, false);
}

RydbergLevel RydbergLevel::make(int n, int l, double j, double mj) {
  RydbergLevel lv{n, l, static_cast<int>(std::lround(2 * j)), static_cast<int>(std::lround(2 * mj))};
  if (std::abs(2 * j - lv.two_j) > 1e-9 || std::abs(2 * mj - lv.two_mj) > 1e-9) {
    throw InvalidLevelError("j and mj must be half-integers");
  }
  validate(lv);
  return lv;
}

void validate(const RydbergLevel& lv) {
  std::ostringstream msg;
  if (lv.n < 1) {
    msg << "principal quantum number must be positive, got " << lv.n;
  } else if (lv.l < 0 || lv.l >= lv.n) {
    msg << "orbital quantum number l=" << lv.l << " not allowed for n=" << lv.n;
  } else if (lv.two_j != 2 * lv.l + 1 && lv.two_j != 2 * lv.l - 1) {
    msg << "j=" << lv.two_j / 2.0 << " incompatible with l=" << lv.l;
  } else if (std::abs(lv.two_mj) > lv.two_j || (lv.two_j - lv.two_mj) % 2 != 0) {
    msg << "mj=" << lv.two_mj / 2.0 << " incompatible with j=" << lv.two_j / 2.0;
  } else {
    return;
  }
  throw InvalidLevelError(msg.str());
}

std::string RydbergLevel::term_label() const {
  return std::to_string(n) + series_key(l, two_j);
}

std::string RydbergLevel::label() const {
  return term_label() + "(" + half_integer(two_mj, true) + ")";
}

AtomicConstants AtomicConstants::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingDataError("cannot open constants file " + path.string());
  return parse(in, path.string());
}

AtomicConstants AtomicConstants::parse(std::istream& in, const std::string& source) {
  AtomicConstants c;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw ConfigError(source + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) fail("expected 'key = value'");
    std::istringstream keys(line.substr(0, eq));
    std::string key;
    keys >> key;
    std::istringstream vals(line.substr(eq + 1));
    std::vector<std::string> tokens;
    for (std::string t; vals >> t;) tokens.push_back(t);
    if (tokens.empty()) fail("missing value for " + key);

    std::vector<double> nums;
    auto numbers = [&](std::size_t lo, std::size_t hi) {
      if (tokens.size() < lo || tokens.size() > hi) fail("wrong number of values for " + key);
      nums.clear();
      for (const auto& t : tokens) {
        try {
          std::size_t used = 0;
          nums.push_back(std::stod(t, &used));
          if (used != t.size()) fail("malformed number '" + t + "'");
        } catch (const std::logic_error&) {
          fail("malformed number '" + t + "'");
        }
      }
    };

    const auto dot = key.find('.');
    const std::string head = key.substr(0, dot);
    const std::string tail = dot == std::string::npos ? "" : key.substr(dot + 1);
    if (key == "species") {
      c.species_ = tokens.front();
    } else if (key == "version") {
      c.version_ = tokens.front();
    } else if (key == "rydberg_constant_ghz") {
      numbers(1, 1);
      c.rydberg_ghz_ = nums[0];
    } else if (head == "defect") {
      numbers(1, 3);
      nums.resize(3, 0.0);
      c.defects_[tail] = {nums[0], nums[1], nums[2]};
    } else if (head == "lifetime") {
      numbers(2, 2);
      c.lifetimes_[tail] = {nums[0], nums[1]};
    } else if (head == "blackbody") {
      numbers(4, 4);
      c.blackbody_[tail] = {nums[0], nums[1], nums[2], nums[3]};
    } else if (head == "polarizability") {
      numbers(1, 1);
      c.polarizability_[tail] = nums[0];
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (c.species_.empty()) throw ConfigError(source + ": missing species header");
  if (c.version_.empty()) throw ConfigError(source + ": missing version header");
  if (c.rydberg_ghz_ <= 0) throw ConfigError(source + ": missing rydberg_constant_ghz");
  return c;
}

AtomicConstants AtomicConstants::rubidium87() {
  if (const char* env = std::getenv("FORSTER_CONSTANTS"); env && *env) return load(env);
  return load(std::filesystem::path(FORSTER_DATA_DIR) / "rb87.constants");
}

bool AtomicConstants::has_series(int l, int two_j) const {
  return defects_.count(series_key(l, two_j)) > 0;
}

const DefectSeries& AtomicConstants::defects(int l, int two_j) const {
  const auto it = defects_.find(series_key(l, two_j));
  if (it == defects_.end()) {
    throw MissingDataError("no quantum defects for series " + series_key(l, two_j) + " of " +
                           species_);
  }
  return it->second;
}

const LifetimeFit& AtomicConstants::lifetime_fit(int l, int two_j) const {
  const auto it = lifetimes_.find(series_key(l, two_j));
  if (it == lifetimes_.end()) {
    throw MissingDataError("no lifetime fit for series " + series_key(l, two_j));
  }
  return it->second;
}

std::optional<BlackbodyFit> AtomicConstants::blackbody_fit(int l, int two_j) const {
  const auto it = blackbody_.find(series_key(l, two_j));
  if (it == blackbody_.end()) return std::nullopt;
  return it->second;
}

namespace {
std::string override_key(const RydbergLevel& lv) {
  return lv.term_label() + "." + half_integer(std::abs(lv.two_mj), false);
}
}  // namespace

std::optional<double> AtomicConstants::polarizability_override(const RydbergLevel& lv) const {
  const auto it = polarizability_.find(override_key(lv));
  if (it == polarizability_.end()) return std::nullopt;
  return it->second;
}

void AtomicConstants::set_polarizability_override(const RydbergLevel& lv, double value) {
  polarizability_[override_key(lv)] = value;
}

double quantum_defect(const RydbergLevel& lv, const AtomicConstants& c) {
  validate(lv);
  const DefectSeries& d = c.defects(lv.l, lv.two_j);
  const double x = 1.0 / ((lv.n - d.d0) * (lv.n - d.d0));
  return d.d0 + d.d2 * x + d.d4 * x * x;
}

double effective_n(const RydbergLevel& lv, const AtomicConstants& c) {
  const double ns = lv.n - quantum_defect(lv, c);
  if (ns <= 0) throw InvalidLevelError("effective quantum number not positive for " + lv.label());
  return ns;
}

double level_energy_ghz(const RydbergLevel& lv, const AtomicConstants& c) {
  const double ns = effective_n(lv, c);
  return -c.rydberg_constant_ghz() / (ns * ns);
}

double radiative_lifetime_us(const RydbergLevel& lv, const AtomicConstants& c) {
  const double ns = effective_n(lv, c);
  const LifetimeFit& f = c.lifetime_fit(lv.l, lv.two_j);
  return f.tau_ns * std::pow(ns, f.exponent) * units::ns_to_us;
}

double blackbody_rate_per_us(const RydbergLevel& lv, double temperature_k,
                             const AtomicConstants& c) {
  if (temperature_k < 0) throw PhysicsError("negative temperature");
  if (temperature_k == 0) return 0.0;
  const auto fit = c.blackbody_fit(lv.l, lv.two_j);
  if (!fit) throw MissingDataError("no blackbody fit for series " + series_key(lv.l, lv.two_j));
  const double ns = effective_n(lv, c);
  const double arg = 315780.0 * fit->b / (std::pow(ns, fit->c) * temperature_k);
  const double rate_s = fit->a / std::pow(ns, fit->d) * 2.14e10 / std::expm1(arg);
  return rate_s / units::s_to_us;
}

double effective_lifetime_us(const RydbergLevel& lv, double temperature_k,
                             const AtomicConstants& c) {
  const double gamma = 1.0 / radiative_lifetime_us(lv, c) + blackbody_rate_per_us(lv, temperature_k, c);
  return 1.0 / gamma;
}

namespace {

double polarizability_sum(const RydbergLevel& lv, const AtomicConstants& c, double window_ghz) {
  const double e0 = level_energy_ghz(lv, c);
  double alpha = 0.0;
  for (int lp : {lv.l - 1, lv.l + 1}) {
    if (lp < 0) continue;
    for (int two_jp : {2 * lp - 1, 2 * lp + 1}) {
      if (two_jp < 1 || std::abs(two_jp - lv.two_j) > 2) continue;
      if (std::abs(lv.two_mj) > two_jp) continue;
      if (!c.has_series(lp, two_jp)) {
        throw MissingDataError("polarizability of " + lv.label() + " needs series " +
                               series_key(lp, two_jp));
      }
      // Binding energies are monotonic in n, so stop once past the window.
      const int first = std::max(lp + 1, static_cast<int>(c.defects(lp, two_jp).d0) + 2);
      for (int np = first;; ++np) {
        const RydbergLevel k{np, lp, two_jp, lv.two_mj};
        const double ek = level_energy_ghz(k, c);
        if (ek - e0 > window_ghz) break;
        if (ek - e0 < -window_ghz) continue;
        const double d = dipole_element(lv, 0, k, c) * units::dipole_field_mhz;
        alpha += 2.0 * d * d / ((e0 - ek) * units::ghz_to_mhz);
      }
    }
  }
  return alpha;
}

}  // namespace

double polarizability(const RydbergLevel& lv, const AtomicConstants& c,
                      const PolarizabilityOptions& opt) {
  validate(lv);
  if (const auto o = c.polarizability_override(lv)) return *o;
  const double a = polarizability_sum(lv, c, opt.window_ghz);
  if (opt.check_convergence) {
    const double b = polarizability_sum(lv, c, 2.0 * opt.window_ghz);
    if (std::abs(b - a) > opt.convergence_tol * std::abs(b)) {
      std::ostringstream msg;
      msg << "polarizability of " << lv.label() << " not converged: " << a << " vs " << b
          << " on doubling the window";
      throw NonConvergenceError(msg.str());
    }
  }
  return a;
}

}  // namespace forster
