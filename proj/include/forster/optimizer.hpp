#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace forster {

using Objective = std::function<double(const std::vector<double>&)>;

struct NelderMeadConfig {
  // Initial simplex edge as a fraction of each bound width.
  double initial_step = 0.05;
  // Stop when every vertex lies within this fraction of the bound width of the best one.
  double tolerance = 1e-4;
  int max_evaluations = 400;
  // optimize() restarts a converged simplex while a run improves by more than this.
  double restart_gain = 1e-6;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;  // minimized value
  int evaluations = 0;
  bool converged = false;
};

// Bounded Nelder-Mead minimization; trial points are clamped into the box.
NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& start,
                             const std::vector<double>& lower, const std::vector<double>& upper,
                             const NelderMeadConfig& cfg);

struct AnnealingConfig {
  double initial_temperature = 1e-3;
  double cooling = 0.95;
  int proposals_per_stage = 20;
  // Gaussian proposal width as a fraction of each bound width.
  double proposal_scale = 0.02;
};

struct OptimizationProblem {
  Objective objective;  // maximized
  std::vector<std::string> names;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> start;
  NelderMeadConfig nelder_mead{};
  AnnealingConfig annealing{};
  int budget = 2000;
  std::uint64_t seed = 1;
};

struct Evaluation {
  int iteration = 0;
  char stage = 'n';  // 'n' Nelder-Mead, 'a' annealing
  std::vector<double> x;
  double value = 0.0;
  bool accepted = false;
  double temperature = 0.0;
  double delta = 0.0;  // value(current) - value(proposal), positive when worse
};

struct OptimizationResult {
  std::vector<double> best_x;
  double best_value = 0.0;
  double start_value = 0.0;
  std::vector<Evaluation> log;
  bool budget_exhausted = false;
};

// Nelder-Mead from the start point (restarted while it keeps gaining), then simulated annealing from its
// result until the budget is spent. Returns the best point ever evaluated.
OptimizationResult optimize(const OptimizationProblem& p);

void write_evaluation_log(std::ostream& out, const OptimizationProblem& p,
                          const OptimizationResult& r);

struct SensitivityResult {
  double plus = 0.0;   // first crossing for positive perturbations
  double minus = 0.0;  // first crossing for negative perturbations
  double half_width = 0.0;
  double f0 = 0.0;
  bool monotone = true;
  int evaluations = 0;
};

struct SensitivityOptions {
  double initial_guess = 1e-3;
  double relative_precision = 1e-2;
  int max_doublings = 40;
};

// f(delta) is the objective with the parameter shifted by delta. Finds the
// smallest |delta| on each side at which f(0) - f(delta) reaches the budget;
// half_width is the smaller side.
SensitivityResult sensitivity_scan(const std::function<double(double)>& f, double budget,
                                   const SensitivityOptions& opt = {});

}  // namespace forster
