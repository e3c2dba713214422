#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "forster/collective_basis.hpp"
#include "forster/hamiltonian.hpp"
#include "forster/integrator.hpp"
#include "forster/units.hpp"

namespace forster {

using LogicalMatrix = Eigen::Matrix<cd, 8, 8>;

// Logical register |c1 c2 t>, index 4 c1 + 2 c2 + t. The controls sit on
// the outer atoms of the chain (atoms 1 and 3) and the target on atom 2.
std::array<Ground, 3> chain_ground_state(int logical);
std::string logical_label(int logical);

struct PulseSchedule {
  double t_ex_us = 0.020;
  double t_wait1_us = 0.020;
  double t_rf_us = 1.27;
  double t_wait2_us = 0.020;
  double t_deex_us = 0.020;
  // dc_v_cm is held for the whole sequence; RF acts only during t_rf.
  FieldDrive drive{0.1805, 0.05, 50.0, 0.0};
  double ex_phase_rad = 0.0;
  double deex_phase_rad = units::pi;

  void validate() const;  // throws PhysicsError
  double total_us() const { return t_ex_us + t_wait1_us + t_rf_us + t_wait2_us + t_deex_us; }
  double rf_start_us() const { return t_ex_us + t_wait1_us; }
  std::vector<Segment> segments() const;
};

struct GateModel {
  int n = 70;
  double window_ghz = 2.0;
  ModelOptions physics{};
  IntegratorOptions integrator{1e-9, 1e-11};
};

struct InputRun {
  int input = 0;
  std::vector<std::size_t> states;  // basis indices of the block
  std::size_t logical_pos = 0;      // position of |input> inside the block
  std::size_t rydberg_pos = 0;      // laser partner with every |1> excited
  Eigen::VectorXcd final_state;
  std::optional<Trajectory> trajectory;
  double loss = 0.0;      // norm removed by decay
  double leakage = 0.0;   // surviving norm outside |input>
};

struct GateResult {
  LogicalMatrix propagator = LogicalMatrix::Zero();
  std::array<InputRun, 8> inputs;
  PulseSchedule schedule;
  double phi_target = 0.0;

  // arg U[x,x] - arg U[0,0], wrapped into (-pi, pi].
  double phase(int x) const;
};

struct GateRunOptions {
  bool record = false;
  double sample_dt_us = 0.002;
};

class GateEngine {
 public:
  GateEngine(const AtomicConstants& c, const GateModel& model);

  const CollectiveBasis& basis() const { return basis_; }
  const StaticHamiltonian& hamiltonian() const { return h_; }
  const GateModel& model() const { return model_; }
  const LevelTable& levels() const { return table_; }

  // Common factor on every dipole-dipole coupling, (R0/R)^3 for a rescaled chain.
  void set_ddi_scale(double factor);
  double ddi_scale() const { return ddi_scale_; }

  InputRun run_input(int x, const PulseSchedule& s, const GateRunOptions& o = {}) const;
  // The eight inputs are propagated concurrently; run_serial is the
  // single-threaded reference.
  GateResult run(const PulseSchedule& s, double phi_target, const GateRunOptions& o = {}) const;
  GateResult run_serial(const PulseSchedule& s, double phi_target, const GateRunOptions& o = {}) const;

 private:
  struct Block {
    std::vector<std::size_t> states;
    StaticHamiltonian h;
    std::size_t logical_pos = 0;
    std::size_t rydberg_pos = 0;
  };
  GateModel model_;
  CollectiveBasis basis_;
  LevelTable table_;
  StaticHamiltonian h_;
  std::array<Block, 8> blocks_;
  double ddi_scale_ = 1.0;
};

// Wraps into (-pi, pi].
double wrap_phase(double x);

// H_target U H_target with ideal Hadamards on the target.
LogicalMatrix compose_toffoli(const LogicalMatrix& u);
std::array<double, 8> toffoli_populations(const GateResult& r, int input);

// Population of the combined state H_target|input> during the sequence,
// for every basis state of the two blocks involved.
struct ToffoliTrace {
  std::vector<double> times;
  std::vector<std::size_t> states;          // basis indices
  std::vector<std::vector<double>> population;  // [state][sample]
  std::array<double, 8> final_populations{};
};
ToffoliTrace toffoli_trace(const GateResult& r, int input);

struct WaitTuning {
  double t_wait1_us = 0.0;
  double t_wait2_us = 0.0;
  double residual_111 = 0.0;  // wrapped phase error of |111>, rad
  double residual_011 = 0.0;  // wrapped phase of |011>, rad
  int evaluations = 0;
};
struct WaitTuningOptions {
  double lower_us = 0.0;
  double upper_us = 0.2;
  double tolerance_rad = 1e-3;
  int max_evaluations = 200;
};
// Minimizes |dphi(111) - phi| + |dphi(011)| over both waits inside the
// bounds. Throws NoSolutionError, carrying the best point in its message,
// when the residual stays above the tolerance.
WaitTuning tune_waits(const GateEngine& engine, const PulseSchedule& templ, double phi_target,
                      const WaitTuningOptions& opt = {});
// Same search without the tolerance check.
WaitTuning best_waits(const GateEngine& engine, const PulseSchedule& templ, double phi_target,
                      const WaitTuningOptions& opt = {});

void write_gate_report(std::ostream& out, const GateResult& r);

}  // namespace forster
