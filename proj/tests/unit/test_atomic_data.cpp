#include <gtest/gtest.h>

#include <sstream>

#include "forster/angular.hpp"
#include "forster/atomic_data.hpp"
#include "forster/errors.hpp"
#include "forster/matrix_elements.hpp"
#include "../oracle/numerov.hpp"

using namespace forster;

namespace {

const AtomicConstants& rb() {
  static const AtomicConstants c = AtomicConstants::rubidium87();
  return c;
}

const auto S70 = RydbergLevel::make(70, 0, 0.5, 0.5);
const auto S71 = RydbergLevel::make(71, 0, 0.5, 0.5);
const auto P1 = RydbergLevel::make(70, 1, 0.5, 0.5);
const auto P3 = RydbergLevel::make(70, 1, 1.5, 0.5);
const auto P3m = RydbergLevel::make(70, 1, 1.5, 1.5);

// Rydberg-Ritz evaluated independently of the library.
double ritz(int n, double d0, double d2) {
  const double ry = 3289821.194552;
  const double d = d0 + d2 / ((n - d0) * (n - d0));
  return -ry / ((n - d) * (n - d));
}

}  // namespace

TEST(Levels, InvalidLevelsRejected) {
  EXPECT_THROW(RydbergLevel::make(70, 1, 2.5, 0.5), InvalidLevelError);
  EXPECT_THROW(RydbergLevel::make(70, 0, 0.5, 1.5), InvalidLevelError);
  EXPECT_THROW(RydbergLevel::make(2, 2, 1.5, 0.5), InvalidLevelError);
  EXPECT_EQ(P3.label(), "70P3/2(+1/2)");
}

TEST(Energies, RydbergRitzOracle) {
  for (int n : {69, 70, 71}) {
    EXPECT_NEAR(level_energy_ghz(RydbergLevel::make(n, 0, 0.5, 0.5), rb()), ritz(n, 3.1311804, 0.1784), 1e-9);
    EXPECT_NEAR(level_energy_ghz(RydbergLevel::make(n, 1, 1.5, 0.5), rb()), ritz(n, 2.6416737, 0.2950), 1e-9);
  }
  EXPECT_NEAR(level_energy_ghz(S70, rb()), -735.7419, 1e-3);
  EXPECT_NEAR(level_energy_ghz(S71, rb()), -714.2203, 1e-3);
  EXPECT_NEAR(level_energy_ghz(P1, rb()), -725.3722, 1e-3);
  EXPECT_NEAR(level_energy_ghz(P3, rb()), -725.0877, 1e-3);
}

TEST(Energies, TwoBodyDefectNegative) {
  EXPECT_EQ(level_energy_ghz(P3, rb()) - level_energy_ghz(P3, rb()), 0.0);
  // Two-body defect taken as initial minus final pair energy.
  const double defect = 2 * level_energy_ghz(P3, rb()) - level_energy_ghz(S70, rb()) - level_energy_ghz(S71, rb());
  EXPECT_LT(defect, 0.0);
  // Three-body defect, final minus initial.
  const double three = level_energy_ghz(S70, rb()) + level_energy_ghz(S71, rb()) + level_energy_ghz(P1, rb()) -
                       3 * level_energy_ghz(P3, rb());
  EXPECT_NEAR(three * 1e3, -71.251, 0.01);
}

TEST(Energies, MonotoneAndConcaveInN) {
  for (int l : {0, 1}) {
    double prev = level_energy_ghz(RydbergLevel::make(20, l, 0.5, 0.5), rb());
    double prev_gap = 1e300;
    for (int n = 21; n < 150; ++n) {
      const double e = level_energy_ghz(RydbergLevel::make(n, l, 0.5, 0.5), rb());
      EXPECT_GT(e, prev);
      EXPECT_LT(e - prev, prev_gap);
      prev_gap = e - prev;
      prev = e;
    }
  }
}

TEST(Energies, MissingSeriesNamed) {
  std::istringstream in("species = test\nversion = 1\nrydberg_constant_ghz = 3289821.194552\ndefect.S1/2 = 3.13 0.17\n");
  const auto c = AtomicConstants::parse(in, "inline");
  try {
    level_energy_ghz(P3, c);
    FAIL();
  } catch (const MissingDataError& e) {
    EXPECT_NE(std::string(e.what()).find("P3/2"), std::string::npos);
  }
}

TEST(Constants, MalformedLineReportsLocation) {
  std::istringstream in("species = test\ndefect.S1/2 = abc\n");
  try {
    AtomicConstants::parse(in, "inline");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
}

TEST(Lifetimes, FrozenValues) {
  EXPECT_NEAR(radiative_lifetime_us(P3, rb()), 769.58, 0.05);
  EXPECT_NEAR(effective_lifetime_us(P3, 300, rb()), 195.10, 0.05);
  EXPECT_NEAR(effective_lifetime_us(S70, 300, rb()), 132.74, 0.05);
  EXPECT_EQ(blackbody_rate_per_us(P3, 0.0, rb()), 0.0);
  EXPECT_GT(effective_lifetime_us(S70, 0, rb()), effective_lifetime_us(S70, 300, rb()));
  EXPECT_GT(effective_lifetime_us(RydbergLevel::make(80, 0, 0.5, 0.5), 300, rb()),
            effective_lifetime_us(S70, 300, rb()));
  EXPECT_THROW(effective_lifetime_us(S70, -1, rb()), PhysicsError);
}

TEST(Lifetimes, DecreasingInTemperature) {
  for (const auto& lv : {S70, S71, P1, P3}) {
    double prev = effective_lifetime_us(lv, 0.0, rb());
    for (double t = 1; t <= 300; t += 1) {
      const double tau = effective_lifetime_us(lv, t, rb());
      EXPECT_LT(tau, prev) << lv.label() << " " << t;
      prev = tau;
    }
  }
}

// Blackbody depopulation as a brute-force sum of thermally stimulated dipole
// rates over neighbouring levels, using this library's own matrix elements.
TEST(Lifetimes, BlackbodyRateSumOracle) {
  const double c_au = 137.035999084, hartree_ghz = 6579683.920502, t_au = 2.4188843265857e-17;
  const double kb = 3.166811563e-6;
  auto sum = [&](const RydbergLevel& lv, double temp) {
    double total = 0.0;
    const double e0 = level_energy_ghz(lv, rb());
    for (int lp : {lv.l - 1, lv.l + 1}) {
      if (lp < 0) continue;
      for (int tjp : {2 * lp - 1, 2 * lp + 1}) {
        if (tjp < 1 || std::abs(tjp - lv.two_j) > 2) continue;
        const double sixj = wigner_6j_2x(2 * lv.l, lv.two_j, 1, tjp, 2 * lp, 2);
        for (int np = std::max(lp + 1, lv.n - 40); np < lv.n + 40; ++np) {
          const auto other = RydbergLevel::make(np, lp, tjp / 2.0, tjp / 2.0);
          const double w = std::abs(level_energy_ghz(other, rb()) - e0) / hartree_ghz;
          const double r = radial_matrix_element(lv, other, rb());
          const double a = 4 * w * w * w / (3 * c_au * c_au * c_au) * (tjp + 1) * std::max(lv.l, lp) * sixj * sixj * r * r / t_au;
          total += a / std::expm1(w / (kb * temp));
        }
      }
    }
    return total * 1e-6;
  };
  // The P-series fits were refit to this sum; the S series keeps its literature fit.
  EXPECT_NEAR(blackbody_rate_per_us(P1, 300, rb()) / sum(P1, 300), 1.0, 0.05);
  EXPECT_NEAR(blackbody_rate_per_us(P3, 300, rb()) / sum(P3, 300), 1.0, 0.05);
  EXPECT_NEAR(blackbody_rate_per_us(S70, 300, rb()) / sum(S70, 300), 1.0, 0.10);
}

TEST(Polarizability, FrozenValuesAndSymmetry) {
  EXPECT_NEAR(polarizability(S70, rb()), -523.716, 0.01);
  EXPECT_NEAR(polarizability(S71, rb()), -577.860, 0.01);
  EXPECT_NEAR(polarizability(P1, rb()), -3426.856, 0.05);
  EXPECT_NEAR(polarizability(P3, rb()), -4134.625, 0.05);
  EXPECT_NEAR(polarizability(P3m, rb()), -3485.370, 0.05);
  EXPECT_DOUBLE_EQ(polarizability(P3, rb()), polarizability(RydbergLevel::make(70, 1, 1.5, -0.5), rb()));
  EXPECT_DOUBLE_EQ(polarizability(P3m, rb()), polarizability(RydbergLevel::make(70, 1, 1.5, -1.5), rb()));
  EXPECT_NE(polarizability(P3m, rb()), polarizability(P3, rb()));
}

TEST(Polarizability, WindowDoublingConverged) {
  PolarizabilityOptions narrow{200.0, 1e-3, false}, wide{400.0, 1e-3, false};
  const double a = polarizability(S70, rb(), narrow), b = polarizability(S70, rb(), wide);
  EXPECT_LT(std::abs(a / b - 1), 1e-3);
}

TEST(Polarizability, NonConvergenceDetected) {
  PolarizabilityOptions tiny{10.0, 1e-3, true};
  EXPECT_THROW(polarizability(S70, rb(), tiny), NonConvergenceError);
}

TEST(Polarizability, OverrideTakesPrecedence) {
  auto c = rb();
  c.set_polarizability_override(P3, -4000.0);
  EXPECT_EQ(polarizability(P3, c), -4000.0);
}

TEST(RadialElements, NumerovOracleWithinOnePercent) {
  // Frozen from the Numerov oracle at step 5e-4.
  struct Row {
    RydbergLevel a, b;
    double frozen;
  };
  const std::vector<Row> rows = {{S70, P3, 5081.357}, {S71, P3, 4953.509}, {S70, P1, 5162.685}, {S71, P1, 4864.779}};
  for (const auto& r : rows) {
    EXPECT_NEAR(oracle::radial(r.a.n, r.a.l, r.a.two_j, r.b.n, r.b.l, r.b.two_j) / r.frozen, 1.0, 1e-5);
    const double k = std::abs(radial_matrix_element(r.a, r.b, rb()));
    EXPECT_LT(std::abs(k / r.frozen - 1), 0.01) << r.a.label() << " " << r.b.label() << " " << k;
  }
}

TEST(RadialElements, SelectionRule) {
  EXPECT_THROW(radial_matrix_element(S70, S71, rb()), SelectionRuleError);
  EXPECT_EQ(angular_factor(S70, 0, RydbergLevel::make(70, 1, 1.5, 1.5)), 0.0);
  EXPECT_DOUBLE_EQ(std::abs(radial_matrix_element(S70, P3, rb())), std::abs(radial_matrix_element(P3, S70, rb())));
}
