#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace forster {

// A fine-structure Rydberg sublevel |n l j mj>. j and mj are stored doubled.
struct RydbergLevel {
  int n = 0;
  int l = 0;
  int two_j = 1;
  int two_mj = 1;

  static RydbergLevel make(int n, int l, double j, double mj);

  double j() const { return two_j / 2.0; }
  double mj() const { return two_mj / 2.0; }
  // Same level with the projection dropped (mj set to +j).
  RydbergLevel term() const { return {n, l, two_j, two_j}; }
  bool same_term(const RydbergLevel& o) const {
    return n == o.n && l == o.l && two_j == o.two_j;
  }
  // "70P3/2" and "70P3/2(+1/2)".
  std::string term_label() const;
  std::string label() const;

  auto operator<=>(const RydbergLevel&) const = default;
};

// Throws InvalidLevelError when the quantum numbers are inconsistent.
void validate(const RydbergLevel& level);
char orbital_letter(int l);
std::string series_key(int l, int two_j);  // "S1/2", "P3/2", ...

struct DefectSeries {
  double d0 = 0.0;
  double d2 = 0.0;
  double d4 = 0.0;
};

// tau0 = tau_ns * n*^exponent (nanoseconds).
struct LifetimeFit {
  double tau_ns = 0.0;
  double exponent = 0.0;
};

// Blackbody depopulation rate A / n*^D * 2.14e10 / (exp(315780 B / (n*^C T)) - 1) s^-1.
struct BlackbodyFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

class AtomicConstants {
 public:
  static AtomicConstants load(const std::filesystem::path& path);
  static AtomicConstants parse(std::istream& in, const std::string& source);
  // Bundled table, or the file named by FORSTER_CONSTANTS when that is set.
  static AtomicConstants rubidium87();

  const std::string& species() const { return species_; }
  const std::string& version() const { return version_; }
  double rydberg_constant_ghz() const { return rydberg_ghz_; }

  bool has_series(int l, int two_j) const;
  const DefectSeries& defects(int l, int two_j) const;
  const LifetimeFit& lifetime_fit(int l, int two_j) const;
  std::optional<BlackbodyFit> blackbody_fit(int l, int two_j) const;
  std::optional<double> polarizability_override(const RydbergLevel& level) const;

  void set_polarizability_override(const RydbergLevel& level, double value);

 private:
  std::string species_;
  std::string version_;
  double rydberg_ghz_ = 0.0;
  std::map<std::string, DefectSeries> defects_;
  std::map<std::string, LifetimeFit> lifetimes_;
  std::map<std::string, BlackbodyFit> blackbody_;
  std::map<std::string, double> polarizability_;
};

// Rydberg-Ritz quantum defect and effective principal quantum number.
double quantum_defect(const RydbergLevel& level, const AtomicConstants& c);
double effective_n(const RydbergLevel& level, const AtomicConstants& c);
// Binding energy -Ry/n*^2 in GHz.
double level_energy_ghz(const RydbergLevel& level, const AtomicConstants& c);

// Radiative (0 K) lifetime, blackbody depopulation rate and the combined
// effective lifetime. Lifetimes in microseconds, rates in 1/us.
double radiative_lifetime_us(const RydbergLevel& level, const AtomicConstants& c);
double blackbody_rate_per_us(const RydbergLevel& level, double temperature_k,
                             const AtomicConstants& c);
double effective_lifetime_us(const RydbergLevel& level, double temperature_k,
                             const AtomicConstants& c);

struct PolarizabilityOptions {
  double window_ghz = 200.0;
  // Relative change allowed when the window is doubled.
  double convergence_tol = 1e-3;
  bool check_convergence = true;
};

// Static scalar+tensor polarizability along the field axis in MHz/(V/cm)^2,
// with the Stark shift written as alpha * F^2 / 2. Computed from a
// second-order sum over dipole-coupled levels inside the energy window
// unless the constants table carries an override for the level.
double polarizability(const RydbergLevel& level, const AtomicConstants& c,
                      const PolarizabilityOptions& opt = {});

}  // namespace forster
