#include "forster/integrator.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "forster/errors.hpp"

namespace forster {
namespace {

namespace odeint = boost::numeric::odeint;
using state_type = std::vector<cd>;

struct Rhs {
  const StaticHamiltonian* h;
  const Segment* seg;
  void operator()(const state_type& x, state_type& dxdt, double t) const {
    h->apply(t, seg->drive, seg->laser, x.data(), dxdt.data());
  }
};

double step_cap(const Segment& s, const IntegratorOptions& opt) {
  double cap = opt.max_step_us > 0 ? opt.max_step_us : 1e300;
  if (opt.max_step_us <= 0 && s.drive.rf_on()) cap = 1.0 / (20.0 * s.drive.rf_mhz);
  return cap;
}

Eigen::VectorXcd to_eigen(const state_type& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Trajectory run(const StaticHamiltonian& h, const std::vector<Segment>& segments,
               const Eigen::VectorXcd& initial, double t0, const IntegratorOptions& opt,
               double sample_dt, bool record) {
  if (static_cast<std::size_t>(initial.size()) != h.size()) {
    throw PhysicsError("initial state dimension does not match the Hamiltonian");
  }
  if (!(opt.rtol > 0) || !(opt.atol > 0)) throw PhysicsError("tolerances must be positive");
  Trajectory tr;
  for (const auto& s : segments) {
    if (s.duration_us < 0) throw PhysicsError("segment '" + s.name + "' has negative duration");
    tr.segment_names.push_back(s.name);
  }
  state_type x(initial.data(), initial.data() + initial.size());
  auto stepper = odeint::make_controlled(opt.atol, opt.rtol,
                                         odeint::runge_kutta_fehlberg78<state_type>());
  auto keep = [&](double t, int seg) {
    tr.times.push_back(t);
    tr.states.push_back(to_eigen(x));
    tr.segment.push_back(seg);
  };
  keep(t0, 0);

  double t = t0;
  double dt = opt.initial_step_us;
  std::size_t steps = 0;
  // Index of the next uniform sample after t0.
  long next_k = 1;
  for (std::size_t si = 0; si < segments.size(); ++si) {
    const Segment& seg = segments[si];
    const double t_end = t + seg.duration_us;
    const double cap = step_cap(seg, opt);
    const Rhs rhs{&h, &seg};
    const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
    while (t < t_end - eps) {
      double target = t_end;
      bool is_sample = false;
      if (record && sample_dt > 0) {
        const double ts = t0 + next_k * sample_dt;
        if (ts < t_end - eps) {
          target = ts;
          is_sample = true;
        }
      }
      double dt_try = std::min({dt, cap, target - t});
      const bool clamped = dt_try < dt;
      const auto res = stepper.try_step(rhs, x, t, dt_try);
      if (++steps > opt.max_steps) throw NonConvergenceError("integrator step budget exhausted");
      if (res == odeint::success) {
        ++tr.accepted_steps;
        dt = clamped ? std::max(dt, dt_try) : dt_try;
        if (std::abs(t - target) <= eps) {
          t = target;
          if (is_sample) {
            keep(t, static_cast<int>(si));
            ++next_k;
          }
        }
      } else {
        ++tr.rejected_steps;
        dt = dt_try;
        if (dt < opt.min_step_us) {
          std::ostringstream msg;
          msg << "step size underflow at t = " << t << " us in segment '" << seg.name << "'";
          throw StepUnderflowError(msg.str());
        }
      }
    }
    t = t_end;
    if (record) {
      // A uniform sample that coincides with the boundary is not repeated.
      while (sample_dt > 0 && t0 + next_k * sample_dt <= t_end + eps) ++next_k;
      keep(t, static_cast<int>(si));
    }
  }
  if (!record) keep(t, static_cast<int>(segments.empty() ? 0 : segments.size() - 1));
  for (const auto& v : x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NonConvergenceError("non-finite amplitude in propagated state");
    }
  }
  return tr;
}

}  // namespace

Trajectory propagate(const StaticHamiltonian& h, const std::vector<Segment>& segments,
                     const Eigen::VectorXcd& initial, double t0, const IntegratorOptions& opt,
                     double sample_dt) {
  return run(h, segments, initial, t0, opt, sample_dt, true);
}

Eigen::VectorXcd propagate_final(const StaticHamiltonian& h, const std::vector<Segment>& segments,
                                 const Eigen::VectorXcd& initial, double t0,
                                 const IntegratorOptions& opt) {
  return run(h, segments, initial, t0, opt, 0.0, false).final_state();
}

}  // namespace forster
