#include <gtest/gtest.h>

#include <cmath>

#include "forster/collective_basis.hpp"
#include "forster/errors.hpp"
#include "forster/hamiltonian.hpp"
#include "forster/matrix_elements.hpp"
#include "forster/atomic_data.hpp"

using namespace forster;

namespace {

const AtomicConstants& rb() {
  static const AtomicConstants c = AtomicConstants::rubidium87();
  return c;
}

const CollectiveBasis& interaction() {
  static const CollectiveBasis b = build_interaction_basis({}, rb());
  return b;
}

const LevelTable& table() {
  static const LevelTable t = build_level_table(interaction().inventory(), 300.0, rb());
  return t;
}

// Both M = 3/2 and M = 1/2 sectors in one basis.
CollectiveBasis mixed_basis() {
  const auto& a = interaction();
  std::vector<CollectiveState> states = a.states();
  std::vector<double> e = a.energies_mhz();
  const auto& inv = a.inventory();
  for (const auto& x : inv) {
    for (const auto& y : inv) {
      for (const auto& z : inv) {
        if (x.two_mj + y.two_mj + z.two_mj != 1) continue;
        if (x.n + y.n + z.n != 211 || x.l + y.l + z.l != 2) continue;
        states.push_back({{x, y, z}});
        e.push_back(0.0);
      }
    }
  }
  return CollectiveBasis(states, e, inv, a.options());
}

}  // namespace

TEST(Basis, InteractionSectorSize) {
  const auto& b = interaction();
  EXPECT_EQ(b.size(), 59u);
  EXPECT_EQ(b[b.reference_index()], reference_state(70));
  EXPECT_TRUE(b.find(forster_final_state(70)).has_value());
  for (const auto& s : b.states()) {
    EXPECT_EQ(s.two_M(), 3);
    EXPECT_EQ(s.rydberg_count(), 3);
  }
}

TEST(Basis, WindowControlsSize) {
  BasisOptions o;
  o.window_ghz = 0.01;
  const auto small = build_interaction_basis(o, rb());
  EXPECT_LT(small.size(), interaction().size());
  EXPECT_TRUE(small.find(reference_state(70)).has_value());
}

TEST(Basis, LogicalExtension) {
  const auto ext = extend_with_logical(interaction(), rb());
  EXPECT_EQ(ext.size(), 151u);
  int zero_rydberg = 0;
  for (const auto& s : ext.states()) zero_rydberg += s.rydberg_count() == 0;
  EXPECT_EQ(zero_rydberg, 8);
}

TEST(Ddi, RealSymmetricAndSerialMatches) {
  ModelOptions o;
  const auto d = ddi_matrix(interaction(), table(), o);
  const auto s = ddi_matrix_serial(interaction(), table(), o);
  EXPECT_EQ((d - s).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((d - d.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(d.cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < d.rows(); ++i) EXPECT_EQ(d(i, i), 0.0);
}

TEST(Ddi, CubicDistanceScaling) {
  for (bool nn : {false, true}) {
    ModelOptions a, b;
    a.next_nearest = b.next_nearest = nn;
    a.separation_um = 10.0;
    b.separation_um = 20.0;
    const auto da = ddi_matrix(interaction(), table(), a);
    const auto db = ddi_matrix(interaction(), table(), b);
    for (Eigen::Index i = 0; i < da.size(); ++i) {
      if (da(i) == 0.0) {
        EXPECT_EQ(db(i), 0.0);
      } else {
        EXPECT_NEAR(db(i) * 8.0 / da(i), 1.0, 1e-12);
      }
    }
  }
}

TEST(Ddi, ProjectionBlocksExact) {
  const auto b = mixed_basis();
  ASSERT_GT(b.size(), interaction().size());
  const auto d = ddi_matrix(b, table(), {});
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[i].two_M() != b[j].two_M()) {
        EXPECT_EQ(d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 0.0);
      }
    }
  }
  const auto s = RydbergLevel::make(70, 0, 0.5, 0.5);
  const auto p = RydbergLevel::make(70, 1, 1.5, 1.5);
  const auto q = RydbergLevel::make(70, 1, 1.5, 0.5);
  EXPECT_EQ(ddi_element(p, p, s, q, 10.0, rb()), 0.0);
}

TEST(Ddi, PairElementSymmetric) {
  const auto s = RydbergLevel::make(70, 0, 0.5, 0.5);
  const auto s1 = RydbergLevel::make(71, 0, 0.5, 0.5);
  const auto p = RydbergLevel::make(70, 1, 1.5, 0.5);
  const double a = ddi_element(p, p, s, s1, 10.0, rb());
  const double b = ddi_element(s, s1, p, p, 10.0, rb());
  EXPECT_NE(a, 0.0);
  EXPECT_NEAR(a, b, 1e-15 * std::abs(a));
}

TEST(Hamiltonian, ApplyMatchesDenseEvaluate) {
  ModelOptions o;
  const auto h = assemble(interaction(), table(), o);
  const FieldDrive drive{0.17, 0.05, 50.0, 0.0};
  const double t = 0.0123;
  const auto dense = h.evaluate(t, drive, std::nullopt);
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(h.size()));
  Eigen::VectorXcd y(x.size());
  h.apply(t, drive, std::nullopt, x.data(), y.data());
  const Eigen::VectorXcd expect = std::complex<double>(0, -2 * M_PI) * (dense * x);
  EXPECT_LT((y - expect).norm(), 1e-9 * expect.norm());
}

TEST(Hamiltonian, DecayOnlyWhenEnabled) {
  ModelOptions on, off;
  off.include_decay = false;
  const auto a = assemble(interaction(), table(), on);
  const auto b = assemble(interaction(), table(), off);
  EXPECT_GT(a.decay_per_us.minCoeff(), 0.0);
  EXPECT_EQ(b.decay_per_us.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, SignFlipOfFieldInvariant) {
  ModelOptions o;
  const auto h = assemble(interaction(), table(), o);
  const auto a = h.evaluate(0.0, {0.17, 0.0, 0.0, 0.0}, std::nullopt);
  const auto b = h.evaluate(0.0, {-0.17, 0.0, 0.0, 0.0}, std::nullopt);
  EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, StructureOfEvaluate) {
  ModelOptions o;
  const auto h = assemble(interaction(), table(), o);
  const FieldDrive drive{0.1763, 0.05, 50.0, 0.0};
  for (double t : {0.0, 0.0037, 0.011}) {
    const auto m = h.evaluate(t, drive, std::nullopt);
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    EXPECT_LT((herm - herm.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      EXPECT_LE(m(i, i).imag(), 0.0);
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (i != j) EXPECT_EQ(m(i, j).imag(), 0.0);
      }
    }
    // One RF period later.
    EXPECT_LT((h.evaluate(t + 1.0 / 50.0, drive, std::nullopt) - m).cwiseAbs().maxCoeff(), 1e-9);
  }
  const FieldDrive dc{0.1763, 0.0, 50.0, 0.0};
  EXPECT_EQ((h.evaluate(0.0, dc, std::nullopt) - h.evaluate(0.37, dc, std::nullopt)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, ReferenceStarkShiftByHand) {
  ModelOptions o;
  o.frame = Frame::ZeroField;
  const auto h = assemble(interaction(), table(), o);
  const auto r = static_cast<Eigen::Index>(interaction().reference_index());
  const double alpha = polarizability(target_level(70), rb());
  const auto m = h.evaluate(0.005, {0.1805, 0.05, 50.0, 0.0}, std::nullopt);  // cos(2 pi 50 MHz t) = 0
  EXPECT_NEAR(m(r, r).real(), 1.5 * alpha * 0.1805 * 0.1805, 1e-6);
  ModelOptions tracking;
  const auto ht = assemble(interaction(), table(), tracking);
  EXPECT_NEAR(ht.evaluate(0.005, {0.1805, 0.05, 50.0, 0.0}, std::nullopt)(r, r).real(), 0.0, 1e-9);
}

TEST(Ddi, NextNearestPairToggle) {
  ModelOptions with, without;
  without.next_nearest = false;
  const auto a = ddi_matrix(interaction(), table(), with);
  const auto b = ddi_matrix(interaction(), table(), without);
  EXPECT_GT((a - b).cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (b(i) != 0.0) EXPECT_NE(a(i), 0.0);
  }
  const auto mixed = mixed_basis();
  const auto d = ddi_matrix(mixed, table(), without);
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    for (std::size_t j = 0; j < mixed.size(); ++j) {
      if (mixed[i].two_M() != mixed[j].two_M()) EXPECT_EQ(d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 0.0);
    }
  }
}
