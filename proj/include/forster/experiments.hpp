#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "forster/config.hpp"
#include "forster/dynamics.hpp"
#include "forster/fidelity.hpp"
#include "forster/floquet.hpp"
#include "forster/gate.hpp"
#include "forster/optimizer.hpp"

namespace forster {

AtomicConstants constants_for(const RunConfig& cfg);
GateModel gate_model(const RunConfig& cfg, double temperature_k);
PulseSchedule schedule_from(const RunConfig& cfg);
IntegratorOptions integrator_from(const RunConfig& cfg);

struct ScanAnalysis {
  ScanResult scan;
  PeakAnalysis peaks;
  StarkPair pair;
  double f_rf = 0.0;
  double nu = 0.0;
  double grid = 0.0;
  double right_peak = -1.0;  // highest-field peak of the order +1 doublet
  // |measured next centre - centre shifted by one nu| for consecutive doublets
  std::vector<double> spacing_errors;
  double seconds = 0.0;
};
ScanAnalysis run_stark_scan(const RunConfig& cfg);

struct RabiAnalysis {
  std::vector<double> times;
  std::vector<double> initial;   // |RRR> population
  std::vector<double> transfer;  // (n+1)S fraction
  std::vector<double> norm;
  RabiFeatures features;
  double seconds = 0.0;
};
RabiAnalysis run_rabi(const RunConfig& cfg);

struct WorkingPoint {
  double f_rf = 0.0;
  double nu = 0.0;
  double wait1 = 0.0;
  double wait2 = 0.0;
};
PulseSchedule apply(const PulseSchedule& base, const WorkingPoint& w);

struct OptimizerSettings {
  int budget = 2000;
  std::uint64_t seed = 1;
  double f_rf_min = 0.02;
  double f_rf_max = 0.07;
  // Half-width of the search box in nu - dk F_RF^2 / 2, centred on the start.
  double nu_span = 2.0;
  double wait_max = 0.2;
  double nm_tolerance = 1e-4;
  // Step of the coarse resonance scan in nu before the local search; 0 skips it.
  double nu_scan_step = 0.0;
  AnnealingConfig annealing{};
};
OptimizerSettings optimizer_settings(const RunConfig& cfg);

struct GateOptimization {
  double phi = 0.0;
  double temperature_k = 0.0;
  WorkingPoint start;
  WorkingPoint best;
  double start_fidelity = 0.0;
  int scan_evaluations = 0;
  FidelityReport report;
  OptimizationProblem problem;
  OptimizationResult result;
  double seconds = 0.0;
};
// Maximizes the average fidelity over (F_RF, nu, T_wait1, T_wait2).
GateOptimization optimize_gate(const GateEngine& engine, const PulseSchedule& base, double phi,
                               const WorkingPoint& start, const OptimizerSettings& s);

struct SensitivityEntry {
  std::string parameter;
  std::string unit;
  double reference = 0.0;  // reference half-width
  SensitivityResult result;
};
// Half-widths for R, interaction time, F_S, F_RF and nu at a working point.
std::vector<SensitivityEntry> run_sensitivity(GateEngine& engine, const PulseSchedule& working,
                                              double phi, double budget);

struct ExperimentOutput {
  std::filesystem::path dir;
  std::vector<std::string> summary;
  std::map<std::string, double> metrics;
};

// Runs the configured experiment, writing CSV data, a summary and the
// resolved config into out_dir.
ExperimentOutput run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct Check {
  std::string name;
  double value = 0.0;
  double low = 0.0;
  double high = 0.0;
  bool pass = false;
};
struct Reproduction {
  ExperimentOutput output;
  std::vector<Check> checks;
};
std::vector<std::string> figure_ids();
Reproduction reproduce(const std::string& figure, const std::filesystem::path& out_dir);

// FORSTER_OUTPUT_DIR or ./forster-out.
std::filesystem::path default_output_dir();

}  // namespace forster
