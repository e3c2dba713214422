#include <gtest/gtest.h>

#include <random>

#include "forster/errors.hpp"
#include "forster/fidelity.hpp"

using namespace forster;

TEST(Fidelity, ProductStateSet) {
  const auto p = product_states();
  ASSERT_EQ(p.size(), 216u);
  for (const auto& s : p) EXPECT_NEAR(s.psi.norm(), 1.0, 1e-14);
  EXPECT_EQ(single_qubit_states().size(), 6u);
}

TEST(Fidelity, IdealGateIsUnity) {
  for (double phi : {0.0, M_PI / 4, M_PI / 2, 3 * M_PI / 4, M_PI}) {
    const auto u = ideal_gate(phi);
    EXPECT_NEAR(average_gate_fidelity(u, phi).average, 1.0, 1e-12);
    EXPECT_NEAR(average_gate_fidelity(u, phi, {true}).average, 1.0, 1e-12);
    EXPECT_NEAR(average_gate_fidelity(LogicalMatrix::Identity(), 0.0).average, 1.0, 1e-12);
    const auto shifted = (std::polar(1.0, 1.234) * u).eval();
    EXPECT_NEAR(average_gate_fidelity(shifted, phi).average, 1.0, 1e-12);
  }
}

TEST(Fidelity, WrongPhaseLowersFidelity) {
  const auto r = average_gate_fidelity(ideal_gate(M_PI / 2), M_PI);
  EXPECT_LT(r.average, 0.99);
  EXPECT_NEAR(r.computational_average, 1.0, 1e-12);
  EXPECT_EQ(r.per_state.size(), 216u);
  EXPECT_LE(r.worst, r.average);
}

TEST(Fidelity, ShortcutMatchesGeneralPath) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXcd sim(8), ref(8);
    for (int k = 0; k < 8; ++k) {
      sim[k] = {g(rng), g(rng)};
      ref[k] = {g(rng), g(rng)};
    }
    sim *= u(rng) / sim.norm();
    ref /= ref.norm();
    const double a = single_state_fidelity(sim, ref);
    const double b = density_fidelity(sim * sim.adjoint(), ref * ref.adjoint());
    EXPECT_NEAR(a, b, 1e-12);
  }
}

TEST(Fidelity, GeneralPathMatchesForLossyGate) {
  LogicalMatrix u = ideal_gate(M_PI);
  for (int k = 0; k < 8; ++k) u(k, k) *= std::polar(0.97 + 0.003 * k, 0.01 * k);
  const auto a = average_gate_fidelity(u, M_PI);
  const auto b = average_gate_fidelity(u, M_PI, {true});
  const auto c = average_gate_fidelity_serial(u, M_PI);
  EXPECT_NEAR(a.average, b.average, 1e-12);
  EXPECT_EQ(a.average, c.average);
}

TEST(Fidelity, InvalidInputsRejected) {
  Eigen::VectorXcd ref = Eigen::VectorXcd::Zero(8);
  ref[0] = 1.0;
  Eigen::VectorXcd big = 1.5 * ref;
  EXPECT_THROW(single_state_fidelity(big, ref), PhysicsError);
  EXPECT_THROW(single_state_fidelity(ref, big), PhysicsError);
}
