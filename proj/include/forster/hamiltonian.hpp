#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "forster/atomic_data.hpp"
#include "forster/collective_basis.hpp"

namespace forster {

using cd = std::complex<double>;

// F(t) = dc + rf cos(2 pi nu (t - rf_t0)), V/cm with t in us and nu in MHz.
struct FieldDrive {
  double dc_v_cm = 0.0;
  double rf_v_cm = 0.0;
  double rf_mhz = 0.0;
  double rf_t0_us = 0.0;

  double field(double t_us) const;
  bool rf_on() const { return rf_v_cm != 0.0 && rf_mhz > 0.0; }
};

// |1> <-> |R> coupling (Omega/2)(e^{i phase}|R><1| + h.c.). rabi_mhz = Omega / 2pi.
struct LaserDrive {
  double rabi_mhz = 0.0;
  double phase_rad = 0.0;

  static LaserDrive pi_pulse(double duration_us, double phase_rad);
};

// Energies are measured in a frame that subtracts the target-level energy
// for every Rydberg atom. Tracking additionally removes the instantaneous
// Stark shift of the target level, which is what a laser locked to the
// Stark-shifted single-atom line sees.
enum class Frame { ZeroField, Tracking };

struct ModelOptions {
  double separation_um = 10.0;
  double temperature_k = 300.0;
  bool next_nearest = true;
  bool include_decay = true;
  Frame frame = Frame::Tracking;
  PolarizabilityOptions polarizability{};
};

// Compressed-row real symmetric matrix.
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col;
  std::vector<double> val;

  static SparseMatrix from_dense(const Eigen::MatrixXd& m);
  Eigen::MatrixXd to_dense() const;
  std::size_t nnz() const { return val.size(); }
};

struct LaserLink {
  std::size_t ground = 0;
  std::size_t excited = 0;
};

// Time-independent pieces of H(t) = E + S F(t)^2 + V + H_laser - i Gamma / 4pi,
// all in MHz (Gamma in 1/us).
struct StaticHamiltonian {
  Eigen::VectorXd energy_mhz;
  Eigen::VectorXd stark_mhz;  // coefficient of F^2, MHz/(V/cm)^2
  Eigen::VectorXd decay_per_us;
  SparseMatrix ddi;
  std::vector<LaserLink> laser;

  std::size_t size() const { return static_cast<std::size_t>(energy_mhz.size()); }

  // Dense effective Hamiltonian at time t in MHz.
  Eigen::MatrixXcd evaluate(double t_us, const FieldDrive& drive,
                            const std::optional<LaserDrive>& laser) const;
  // out = -i 2pi H_eff(t) in, the Schroedinger right-hand side in 1/us.
  void apply(double t_us, const FieldDrive& drive, const std::optional<LaserDrive>& laser,
             const cd* in, cd* out) const;

  // Sub-Hamiltonian on the listed states; couplings leaving the set are dropped.
  StaticHamiltonian restrict(const std::vector<std::size_t>& idx) const;
  // Interaction scaled by a common factor, e.g. (R0/R)^3.
  StaticHamiltonian with_ddi_scale(double factor) const;
};

// Per-level single-atom data that enters the collective Hamiltonian.
struct LevelTable {
  std::vector<RydbergLevel> levels;
  std::vector<double> polarizability;  // MHz/(V/cm)^2, shift alpha F^2 / 2
  std::vector<double> decay_per_us;
  // dipole[(a * L + b) * 3 + q + 1] = <a| r_q |b> in e a0
  std::vector<double> dipole;

  std::size_t index(const RydbergLevel& lv) const;
  double d(std::size_t a, int q, std::size_t b) const {
    return dipole[(a * levels.size() + b) * 3 + static_cast<std::size_t>(q + 1)];
  }
};

LevelTable build_level_table(const std::vector<RydbergLevel>& inventory, double temperature_k,
                             const AtomicConstants& c, const PolarizabilityOptions& pol = {});

// Dense DDI matrix in MHz. The OpenMP version splits rows across threads;
// the serial one is the reference used by the tests.
Eigen::MatrixXd ddi_matrix(const CollectiveBasis& basis, const LevelTable& table,
                           const ModelOptions& opt);
Eigen::MatrixXd ddi_matrix_serial(const CollectiveBasis& basis, const LevelTable& table,
                                  const ModelOptions& opt);

StaticHamiltonian assemble(const CollectiveBasis& basis, const LevelTable& table,
                           const ModelOptions& opt);
StaticHamiltonian assemble(const CollectiveBasis& basis, const AtomicConstants& c,
                           const ModelOptions& opt);

}  // namespace forster
