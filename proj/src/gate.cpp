#include "forster/gate.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "forster/dynamics.hpp"
#include "forster/errors.hpp"
#include "forster/optimizer.hpp"

namespace forster {

std::array<Ground, 3> chain_ground_state(int x) {
  if (x < 0 || x > 7) throw PhysicsError("logical index out of range");
  auto g = [](int bit) { return bit ? Ground::One : Ground::Zero; };
  return {g((x >> 2) & 1), g(x & 1), g((x >> 1) & 1)};
}

std::string logical_label(int x) {
  return "|" + std::to_string((x >> 2) & 1) + std::to_string((x >> 1) & 1) + std::to_string(x & 1) + ">";
}

double wrap_phase(double x) {
  double y = std::remainder(x, units::two_pi);
  if (y <= -units::pi) y += units::two_pi;
  return y;
}

void PulseSchedule::validate() const {
  auto fail = [](const std::string& w) { throw PhysicsError("inconsistent pulse schedule: " + w); };
  if (!(t_ex_us > 0) || !(t_deex_us > 0)) fail("laser pulses need positive durations");
  if (t_wait1_us < 0 || t_wait2_us < 0 || t_rf_us < 0) fail("negative segment duration");
  if (drive.rf_v_cm < 0) fail("negative RF amplitude");
  if (drive.rf_v_cm > 0 && !(drive.rf_mhz > 0)) fail("RF amplitude without a positive frequency");
}

std::vector<Segment> PulseSchedule::segments() const {
  validate();
  const FieldDrive dc{drive.dc_v_cm, 0.0, 0.0, 0.0};
  FieldDrive rf = drive;
  rf.rf_t0_us = rf_start_us();
  std::vector<Segment> s;
  s.push_back({"excitation", t_ex_us, dc, LaserDrive::pi_pulse(t_ex_us, ex_phase_rad)});
  if (t_wait1_us > 0) s.push_back({"wait1", t_wait1_us, dc, std::nullopt});
  if (t_rf_us > 0) s.push_back({"rf", t_rf_us, rf, std::nullopt});
  if (t_wait2_us > 0) s.push_back({"wait2", t_wait2_us, dc, std::nullopt});
  s.push_back({"deexcitation", t_deex_us, dc, LaserDrive::pi_pulse(t_deex_us, deex_phase_rad)});
  return s;
}

double GateResult::phase(int x) const {
  return wrap_phase(std::arg(propagator(x, x)) - std::arg(propagator(0, 0)));
}

GateEngine::GateEngine(const AtomicConstants& c, const GateModel& model) : model_(model) {
  BasisOptions bo;
  bo.n = model.n;
  bo.window_ghz = model.window_ghz;
  basis_ = extend_with_logical(build_interaction_basis(bo, c), c);
  table_ = build_level_table(basis_.inventory(), model.physics.temperature_k, c,
                             model.physics.polarizability);
  h_ = assemble(basis_, table_, model.physics);
  const RydbergLevel r = target_level(model.n);
  for (int x = 0; x < 8; ++x) {
    const auto g = chain_ground_state(x);
    Block& b = blocks_[x];
    b.states = basis_.select([&](const CollectiveState& s) {
      for (int p = 0; p < 3; ++p) {
        if (g[p] == Ground::Zero) {
          if (s.atoms[p] != AtomState{Ground::Zero}) return false;
        } else if (s.atoms[p] == AtomState{Ground::Zero}) {
          return false;
        }
      }
      return true;
    });
    CollectiveState logical{{g[0], g[1], g[2]}};
    CollectiveState excited = logical;
    for (auto& a : excited.atoms) {
      if (a == AtomState{Ground::One}) a = r;
    }
    const auto li = basis_.index_of(logical);
    const auto ri = basis_.index_of(excited);
    for (std::size_t k = 0; k < b.states.size(); ++k) {
      if (b.states[k] == li) b.logical_pos = k;
      if (b.states[k] == ri) b.rydberg_pos = k;
    }
    b.h = h_.restrict(b.states);
  }
}

void GateEngine::set_ddi_scale(double factor) {
  if (!(factor > 0)) throw PhysicsError("DDI scale must be positive");
  const double ratio = factor / ddi_scale_;
  for (auto& b : blocks_) b.h = b.h.with_ddi_scale(ratio);
  ddi_scale_ = factor;
}

InputRun GateEngine::run_input(int x, const PulseSchedule& s, const GateRunOptions& o) const {
  if (x < 0 || x > 7) throw PhysicsError("logical index out of range");
  const Block& b = blocks_[x];
  InputRun run;
  run.input = x;
  run.states = b.states;
  run.logical_pos = b.logical_pos;
  run.rydberg_pos = b.rydberg_pos;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.states.size()));
  psi[static_cast<Eigen::Index>(b.logical_pos)] = 1.0;
  const auto segs = s.segments();
  if (o.record) {
    run.trajectory = propagate(b.h, segs, psi, 0.0, model_.integrator, o.sample_dt_us);
    run.final_state = run.trajectory->final_state();
  } else {
    run.final_state = propagate_final(b.h, segs, psi, 0.0, model_.integrator);
  }
  const auto budget = loss_budget(psi, run.final_state, {b.logical_pos});
  run.loss = budget.decay;
  run.leakage = budget.leakage;
  return run;
}

namespace {

GateResult assemble_result(std::array<InputRun, 8> runs, const PulseSchedule& s, double phi) {
  GateResult r;
  r.schedule = s;
  r.phi_target = phi;
  for (int x = 0; x < 8; ++x) {
    r.propagator(x, x) = runs[x].final_state[static_cast<Eigen::Index>(runs[x].logical_pos)];
  }
  r.inputs = std::move(runs);
  return r;
}

}  // namespace

GateResult GateEngine::run_serial(const PulseSchedule& s, double phi, const GateRunOptions& o) const {
  std::array<InputRun, 8> runs;
  for (int x = 0; x < 8; ++x) runs[x] = run_input(x, s, o);
  return assemble_result(std::move(runs), s, phi);
}

GateResult GateEngine::run(const PulseSchedule& s, double phi, const GateRunOptions& o) const {
  s.validate();
  std::array<InputRun, 8> runs;
  std::array<std::string, 8> errors;
#pragma omp parallel for schedule(dynamic)
  for (int x = 0; x < 8; ++x) {
    try {
      runs[x] = run_input(x, s, o);
    } catch (const std::exception& e) {
      errors[x] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw NonConvergenceError("gate propagation failed: " + e);
  }
  return assemble_result(std::move(runs), s, phi);
}

LogicalMatrix compose_toffoli(const LogicalMatrix& u) {
  LogicalMatrix h = LogicalMatrix::Zero();
  const double a = 1.0 / std::sqrt(2.0);
  for (int x = 0; x < 8; ++x) {
    h(x, x) = (x & 1) ? -a : a;
    h(x ^ 1, x) = a;
  }
  return h * u * h;
}

std::array<double, 8> toffoli_populations(const GateResult& r, int input) {
  if (input < 0 || input > 7) throw PhysicsError("logical index out of range");
  const LogicalMatrix t = compose_toffoli(r.propagator);
  std::array<double, 8> p{};
  for (int y = 0; y < 8; ++y) p[y] = std::norm(t(y, input));
  return p;
}

ToffoliTrace toffoli_trace(const GateResult& r, int input) {
  ToffoliTrace tr;
  tr.final_populations = toffoli_populations(r, input);
  const double a = 1.0 / std::sqrt(2.0);
  // H on the target: |b> -> (|0> + (-1)^b |1>)/sqrt2
  const int x0 = input & ~1, x1 = input | 1;
  const double w0 = a, w1 = (input & 1) ? -a : a;
  const InputRun& r0 = r.inputs[x0];
  const InputRun& r1 = r.inputs[x1];
  if (!r0.trajectory || !r1.trajectory) {
    throw PhysicsError("Toffoli trace needs a gate run with recorded trajectories");
  }
  tr.times = r0.trajectory->times;
  for (const auto* run : {&r0, &r1}) {
    const double w = run == &r0 ? w0 : w1;
    for (std::size_t k = 0; k < run->states.size(); ++k) {
      tr.states.push_back(run->states[k]);
      std::vector<double> p;
      for (const auto& s : run->trajectory->states) p.push_back(w * w * std::norm(s[static_cast<Eigen::Index>(k)]));
      tr.population.push_back(std::move(p));
    }
  }
  return tr;
}

namespace {

std::pair<double, double> wait_residuals(const GateEngine& e, PulseSchedule s, double phi,
                                         double w1, double w2) {
  s.t_wait1_us = w1;
  s.t_wait2_us = w2;
  const auto r111 = e.run_input(7, s);
  const auto r011 = e.run_input(3, s);
  const cd u111 = r111.final_state[static_cast<Eigen::Index>(r111.logical_pos)];
  const cd u011 = r011.final_state[static_cast<Eigen::Index>(r011.logical_pos)];
  return {wrap_phase(std::arg(u111) - phi), wrap_phase(std::arg(u011))};
}

}  // namespace

WaitTuning best_waits(const GateEngine& e, const PulseSchedule& templ, double phi,
                      const WaitTuningOptions& opt) {
  if (!(opt.upper_us > opt.lower_us) || opt.lower_us < 0) {
    throw PhysicsError("wait bounds must satisfy 0 <= lower < upper");
  }
  WaitTuning best;
  double best_cost = HUGE_VAL;
  int evals = 0;
  auto cost = [&](const std::vector<double>& w) {
    ++evals;
    const auto [a, b] = wait_residuals(e, templ, phi, w[0], w[1]);
    const double c = std::abs(a) + std::abs(b);
    if (c < best_cost) {
      best_cost = c;
      best.t_wait1_us = w[0];
      best.t_wait2_us = w[1];
      best.residual_111 = a;
      best.residual_011 = b;
    }
    return c;
  };
  NelderMeadConfig cfg;
  cfg.initial_step = 0.1;
  cfg.tolerance = 1e-6;
  cfg.max_evaluations = opt.max_evaluations;
  const std::vector<double> lo{opt.lower_us, opt.lower_us}, hi{opt.upper_us, opt.upper_us};
  const double mid = 0.5 * (opt.lower_us + opt.upper_us);
  for (const auto& start : {std::vector<double>{templ.t_wait1_us, templ.t_wait2_us},
                            std::vector<double>{mid, mid}}) {
    if (best_cost < opt.tolerance_rad) break;
    nelder_mead(cost, start, lo, hi, cfg);
  }
  best.evaluations = evals;
  return best;
}

WaitTuning tune_waits(const GateEngine& e, const PulseSchedule& templ, double phi,
                      const WaitTuningOptions& opt) {
  const WaitTuning w = best_waits(e, templ, phi, opt);
  if (std::abs(w.residual_111) + std::abs(w.residual_011) > opt.tolerance_rad) {
    std::ostringstream msg;
    msg << "no wait times in [" << opt.lower_us << ", " << opt.upper_us
        << "] us reach the phase targets; best T_wait1 = " << w.t_wait1_us
        << " us, T_wait2 = " << w.t_wait2_us << " us, residuals " << w.residual_111 << " and "
        << w.residual_011 << " rad";
    throw NoSolutionError(msg.str());
  }
  return w;
}

void write_gate_report(std::ostream& out, const GateResult& r) {
  const auto& s = r.schedule;
  out << std::setprecision(8);
  out << "phi_target_rad " << r.phi_target << "\n";
  out << "F_S_V_per_cm " << s.drive.dc_v_cm << "\nF_RF_V_per_cm " << s.drive.rf_v_cm
      << "\nnu_MHz " << s.drive.rf_mhz << "\n";
  out << "T_ex_us " << s.t_ex_us << "\nT_wait1_us " << s.t_wait1_us << "\nT_RF_us " << s.t_rf_us
      << "\nT_wait2_us " << s.t_wait2_us << "\nT_deex_us " << s.t_deex_us << "\n";
  out << "input,magnitude,phase_rad,decay_loss,leakage\n";
  for (int x = 0; x < 8; ++x) {
    out << logical_label(x) << "," << std::abs(r.propagator(x, x)) << "," << r.phase(x) << ","
        << r.inputs[x].loss << "," << r.inputs[x].leakage << "\n";
  }
}

}  // namespace forster
