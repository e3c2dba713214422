#include "forster/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>

#include "forster/errors.hpp"

namespace forster {
namespace {

void check_box(const std::vector<double>& start, const std::vector<double>& lo,
               const std::vector<double>& hi) {
  if (start.empty() || lo.size() != start.size() || hi.size() != start.size()) {
    throw PhysicsError("optimizer start and bounds must have the same non-zero size");
  }
  for (std::size_t i = 0; i < start.size(); ++i) {
    if (!(hi[i] > lo[i])) throw PhysicsError("degenerate optimizer bounds");
  }
}

std::vector<double> clamp(std::vector<double> x, const std::vector<double>& lo,
                          const std::vector<double>& hi) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return x;
}

struct BudgetStop {};

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& start,
                             const std::vector<double>& lo, const std::vector<double>& hi,
                             const NelderMeadConfig& cfg) {
  check_box(start, lo, hi);
  const std::size_t n = start.size();
  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return f(x);
  };
  std::vector<std::vector<double>> p(n + 1, clamp(start, lo, hi));
  for (std::size_t i = 0; i < n; ++i) {
    const double step = cfg.initial_step * (hi[i] - lo[i]);
    p[i + 1][i] = p[0][i] + step <= hi[i] ? p[0][i] + step : p[0][i] - step;
  }
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) v[i] = eval(p[i]);
  std::vector<std::size_t> order(n + 1);

  auto affine = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = c[j] + t * (w[j] - c[j]);
    return clamp(x, lo, hi);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<std::vector<double>> ps;
    std::vector<double> vs;
    for (auto k : order) {
      ps.push_back(p[k]);
      vs.push_back(v[k]);
    }
    p.swap(ps);
    v.swap(vs);

    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter, std::abs(p[i][j] - p[0][j]) / (hi[j] - lo[j]));
      }
    }
    if (diameter < cfg.tolerance) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= cfg.max_evaluations) break;

    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) c[j] += p[i][j] / static_cast<double>(n);
    }
    const auto xr = affine(c, p[n], -1.0);
    const double fr = eval(xr);
    if (fr < v[0]) {
      const auto xe = affine(c, p[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        p[n] = xe;
        v[n] = fe;
      } else {
        p[n] = xr;
        v[n] = fr;
      }
    } else if (fr < v[n - 1]) {
      p[n] = xr;
      v[n] = fr;
    } else {
      const bool outside = fr < v[n];
      const auto xc = outside ? affine(c, xr, 0.5) : affine(c, p[n], 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, v[n])) {
        p[n] = xc;
        v[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          p[i] = affine(p[0], p[i], 0.5);
          v[i] = eval(p[i]);
        }
      }
    }
  }
  res.x = p[0];
  res.value = v[0];
  return res;
}

OptimizationResult optimize(const OptimizationProblem& prob) {
  check_box(prob.start, prob.lower, prob.upper);
  if (!prob.objective) throw PhysicsError("optimization problem has no objective");
  if (prob.budget < 1) throw PhysicsError("optimization budget must be positive");
  const auto& lo = prob.lower;
  const auto& hi = prob.upper;
  OptimizationResult out;
  int count = 0;
  char stage = 'n';
  double best = -HUGE_VAL;

  auto record = [&](const std::vector<double>& x, double value, bool accepted, double temp,
                    double delta) {
    Evaluation e;
    e.iteration = count;
    e.stage = stage;
    e.x = x;
    e.value = value;
    e.accepted = accepted;
    e.temperature = temp;
    e.delta = delta;
    out.log.push_back(std::move(e));
    if (value > best) {
      best = value;
      out.best_x = x;
      out.best_value = value;
    }
  };
  auto evaluate = [&](const std::vector<double>& x) {
    if (count >= prob.budget) throw BudgetStop{};
    ++count;
    return prob.objective(x);
  };

  std::vector<double> current = clamp(prob.start, lo, hi);
  double current_value = 0.0;
  try {
    current_value = evaluate(current);
    out.start_value = current_value;
    record(current, current_value, true, 0.0, 0.0);

    // Restart from the best vertex while the simplex keeps converging with
    // a gain: a collapsed simplex stalls on curved resonance ridges.
    const int nm_end = count + std::min(prob.nelder_mead.max_evaluations, prob.budget - count);
    const std::size_t restart_cost = 2 * prob.start.size() + 2;
    while (nm_end - count > static_cast<int>(restart_cost)) {
      NelderMeadConfig nm = prob.nelder_mead;
      nm.max_evaluations = nm_end - count;
      const auto nmres = nelder_mead(
          [&](const std::vector<double>& x) {
            const double v = evaluate(x);
            record(x, v, v > best, 0.0, 0.0);
            return -v;
          },
          current, lo, hi, nm);
      const double gain = -nmres.value - current_value;
      if (gain > 0.0) {
        current = nmres.x;
        current_value = -nmres.value;
      }
      if (!nmres.converged || gain <= prob.nelder_mead.restart_gain) break;
    }

    stage = 'a';
    std::mt19937_64 rng(prob.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double temp = prob.annealing.initial_temperature;
    int in_stage = 0;
    while (true) {
      std::vector<double> x = current;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = hi[i] - lo[i];
        double y = x[i] + prob.annealing.proposal_scale * w * normal(rng);
        // Reflect at the walls, then clamp whatever still overshoots.
        if (y < lo[i]) y = 2 * lo[i] - y;
        if (y > hi[i]) y = 2 * hi[i] - y;
        x[i] = std::clamp(y, lo[i], hi[i]);
      }
      const double u = uniform(rng);
      const double v = evaluate(x);
      const double delta = current_value - v;
      const bool accept = delta <= 0.0 || (temp > 0.0 && u < std::exp(-delta / temp));
      record(x, v, accept, temp, delta);
      if (accept) {
        current = x;
        current_value = v;
      }
      if (++in_stage == prob.annealing.proposals_per_stage) {
        in_stage = 0;
        temp *= prob.annealing.cooling;
      }
    }
  } catch (const BudgetStop&) {
    out.budget_exhausted = true;
  }
  return out;
}

void write_evaluation_log(std::ostream& out, const OptimizationProblem& p,
                          const OptimizationResult& r) {
  out << "# budget = " << p.budget << "\n# seed = " << p.seed << "\n";
  out << "# best_value = " << std::setprecision(12) << r.best_value << "\n";
  out << "iteration,stage";
  for (const auto& n : p.names) out << "," << n;
  out << ",fidelity,accepted,temperature\n";
  for (const auto& e : r.log) {
    out << e.iteration << "," << (e.stage == 'n' ? "nelder-mead" : "anneal");
    for (double x : e.x) out << "," << x;
    out << "," << e.value << "," << (e.accepted ? 1 : 0) << "," << e.temperature << "\n";
  }
}

SensitivityResult sensitivity_scan(const std::function<double(double)>& f, double budget,
                                   const SensitivityOptions& opt) {
  if (!(budget > 0)) throw PhysicsError("sensitivity budget must be positive");
  if (!(opt.initial_guess > 0)) throw PhysicsError("sensitivity initial guess must be positive");
  SensitivityResult res;
  auto eval = [&](double d) {
    ++res.evaluations;
    return f(d);
  };
  res.f0 = eval(0.0);
  auto side = [&](double sign) {
    double lo = 0.0, hi = opt.initial_guess;
    double last_drop = 0.0;
    int k = 0;
    while (true) {
      const double drop = res.f0 - eval(sign * hi);
      if (drop < last_drop) res.monotone = false;
      if (drop >= budget) break;
      last_drop = drop;
      lo = hi;
      hi *= 2.0;
      if (++k > opt.max_doublings) {
        throw NonConvergenceError("fidelity drop never reaches the sensitivity budget");
      }
    }
    while (hi - lo > opt.relative_precision * hi) {
      const double mid = 0.5 * (lo + hi);
      if (res.f0 - eval(sign * mid) >= budget) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  res.plus = side(1.0);
  res.minus = side(-1.0);
  res.half_width = std::min(res.plus, res.minus);
  return res;
}

}  // namespace forster
