#include <gtest/gtest.h>

#include <cmath>

#include "forster/collective_basis.hpp"
#include "forster/dynamics.hpp"
#include "forster/errors.hpp"
#include "forster/integrator.hpp"

using namespace forster;

namespace {

const AtomicConstants& rb() {
  static const AtomicConstants c = AtomicConstants::rubidium87();
  return c;
}

struct Model {
  CollectiveBasis basis;
  LevelTable table;
};

const Model& model() {
  static const Model m = [] {
    Model x;
    x.basis = build_interaction_basis({}, rb());
    x.table = build_level_table(x.basis.inventory(), 300.0, rb());
    return x;
  }();
  return m;
}

StaticHamiltonian hamiltonian(bool decay) {
  ModelOptions o;
  o.include_decay = decay;
  o.frame = Frame::ZeroField;
  return assemble(model().basis, model().table, o);
}

Eigen::VectorXcd reference() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(model().basis.size()));
  psi[static_cast<Eigen::Index>(model().basis.reference_index())] = 1.0;
  return psi;
}

const Segment rf_segment{"rf", 1.0, {0.1763, 0.05, 50.0, 0.0}, std::nullopt};

StaticHamiltonian two_level(double g_mhz, double gamma) {
  StaticHamiltonian h;
  h.energy_mhz = Eigen::VectorXd::Zero(2);
  h.stark_mhz = Eigen::VectorXd::Zero(2);
  h.decay_per_us = Eigen::VectorXd::Constant(2, gamma);
  Eigen::MatrixXd d(2, 2);
  d << 0, g_mhz, g_mhz, 0;
  h.ddi = SparseMatrix::from_dense(d);
  return h;
}

}  // namespace

TEST(Integrator, TwoLevelRabiOracle) {
  const double g = 1.3, gamma = 0.2;
  Eigen::VectorXcd psi(2);
  psi << 1.0, 0.0;
  IntegratorOptions o;
  const auto tr = propagate(two_level(g, gamma), {{"free", 2.0, {}, std::nullopt}}, psi, 0.0, o, 0.05);
  ASSERT_EQ(tr.times.size(), 41u);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    const double c = std::cos(2 * M_PI * g * t);
    EXPECT_NEAR(std::norm(tr.states[k][0]), c * c * std::exp(-gamma * t), 1e-9);
    EXPECT_NEAR(tr.states[k].squaredNorm(), std::exp(-gamma * t), 1e-9);
  }
}

TEST(Integrator, NormNonIncreasingWithDecay) {
  const auto tr = propagate(hamiltonian(true), {rf_segment}, reference(), 0.0, {}, 0.002);
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    EXPECT_LE(tr.states[k].squaredNorm(), tr.states[k - 1].squaredNorm() + 1e-9);
  }
  EXPECT_LT(tr.final_state().squaredNorm(), 1.0);
}

TEST(Integrator, NormConservedWithoutDecay) {
  const auto tr = propagate(hamiltonian(false), {rf_segment}, reference(), 0.0, {}, 0.002);
  for (const auto& s : tr.states) EXPECT_NEAR(s.squaredNorm(), 1.0, 1e-8);
}

TEST(Integrator, SelfConvergenceUnderToleranceHalving) {
  const auto h = hamiltonian(true);
  IntegratorOptions ref;
  ref.rtol = 1e-12;
  ref.atol = 1e-14;
  const auto exact = propagate_final(h, {rf_segment}, reference(), 0.0, ref);
  double prev = 1e300;
  for (double rtol : {1e-6, 5e-7, 2.5e-7}) {
    IntegratorOptions o;
    o.rtol = rtol;
    o.atol = rtol * 1e-2;
    const double err = (propagate_final(h, {rf_segment}, reference(), 0.0, o) - exact).norm();
    EXPECT_LT(err, 100 * rtol);
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(Integrator, SegmentsAndSamplesHitExactly) {
  const Segment a{"a", 0.3, {}, std::nullopt}, b{"b", 0.25, {}, std::nullopt};
  const auto tr = propagate(two_level(0.5, 0.0), {a, b}, Eigen::VectorXcd::Unit(2, 0), 1.0, {}, 0.1);
  EXPECT_DOUBLE_EQ(tr.times.front(), 1.0);
  EXPECT_DOUBLE_EQ(tr.times.back(), 1.55);
  EXPECT_EQ(tr.segment.back(), 1);
}

TEST(Dynamics, TransferFractionCountsUpperS) {
  const auto& b = model().basis;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.size()));
  psi[static_cast<Eigen::Index>(b.index_of(forster_final_state(70)))] = 1.0;
  EXPECT_NEAR(transfer_fraction(b, psi), 1.0, 1e-15);
  EXPECT_EQ(transfer_fraction(b, reference()), 0.0);
}

TEST(Dynamics, RabiFeaturesIgnoreRipple) {
  std::vector<double> t, y;
  for (int k = 0; k <= 1500; ++k) {
    t.push_back(0.002 * k);
    y.push_back(0.5 + 0.45 * std::cos(2 * M_PI * t.back() / 1.2) + 0.02 * std::sin(2 * M_PI * 50 * t.back()));
  }
  const auto f = rabi_features(t, y);
  ASSERT_TRUE(f.found);
  EXPECT_NEAR(f.first_min_time, 0.6, 0.02);
  EXPECT_NEAR(f.period, 1.2, 0.02);
  EXPECT_NEAR(f.return_max, 0.97, 0.01);
}

TEST(Dynamics, UnwrapRemovesJumps) {
  std::vector<double> wrapped;
  for (int k = 0; k < 100; ++k) wrapped.push_back(std::remainder(0.3 * k, 2 * M_PI));
  const auto u = unwrap(wrapped);
  for (int k = 0; k < 100; ++k) EXPECT_NEAR(u[k], 0.3 * k, 1e-12);
}

TEST(Dynamics, WeightedPhaseNeedsAmplitude) {
  Trajectory tr;
  tr.times = {0.0};
  tr.states = {Eigen::VectorXcd::Zero(3)};
  EXPECT_THROW(weighted_phase(tr, 0, 1), PhysicsError);
  tr.states[0][0] = std::polar(0.6, 0.4);
  tr.states[0][1] = std::polar(0.8, 0.4);
  EXPECT_NEAR(weighted_phase(tr, 0, 1)[0], 0.4, 1e-12);
}

TEST(Dynamics, LossBudgetSplitsDecayAndLeakage) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Unit(3, 0);
  Eigen::VectorXcd b(3);
  b << std::sqrt(0.8), std::sqrt(0.1), 0.0;
  const auto l = loss_budget(a, b, {0});
  EXPECT_NEAR(l.decay, 0.1, 1e-12);
  EXPECT_NEAR(l.leakage, 0.1, 1e-12);
}
