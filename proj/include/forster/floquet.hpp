#pragma once

#include <cstddef>
#include <vector>

#include "forster/collective_basis.hpp"
#include "forster/hamiltonian.hpp"
#include "forster/integrator.hpp"

namespace forster {

// Integer-order Bessel function for any sign of order and argument.
double bessel_j(int order, double x);

// Fourier amplitudes a_s of exp(i 2pi k int (F^2 - <F^2>) dt) for a state with
// Stark coefficient k (MHz/(V/cm)^2, shift k F^2) in F = F_S + F_RF cos(2pi nu t).
struct SidebandSpectrum {
  int s_max = 0;
  std::vector<double> amplitude;  // amplitude[s + s_max]
  double x1 = 0.0;                // modulation depth at nu
  double x2 = 0.0;                // modulation depth at 2 nu
  double truncation = 0.0;        // 1 - sum a_s^2 over the kept orders

  double at(int s) const { return amplitude[static_cast<std::size_t>(s + s_max)]; }
};
SidebandSpectrum sideband_amplitudes(double stark_mhz, const FieldDrive& drive, int s_max);

// Energy difference E_final - E_initial of two collective states versus the
// static field, including the cycle-averaged RF shift.
struct StarkPair {
  double delta0_mhz = 0.0;  // zero-field E_f - E_i
  double delta_k = 0.0;     // k_f - k_i, MHz/(V/cm)^2
  double detuning(double f_dc, double f_rf) const {
    return delta0_mhz + delta_k * (f_dc * f_dc + 0.5 * f_rf * f_rf);
  }
};
StarkPair stark_pair(const CollectiveBasis& basis, const LevelTable& table,
                     const CollectiveState& initial, const CollectiveState& final_state);

struct Crossing {
  int order = 0;  // E_f - E_i = order * nu
  double field_v_cm = 0.0;
};

struct StarkMap {
  std::vector<double> fields;
  std::vector<int> orders;
  // Photon-dressed replicas E + s nu of the initial and final state, MHz.
  std::vector<std::vector<double>> initial_mhz;
  std::vector<std::vector<double>> final_mhz;
  std::vector<Crossing> crossings;
};
StarkMap stark_map(const StarkPair& pair, const std::vector<double>& fields, double f_rf,
                   double nu_mhz, int s_max);
// Closed-form resonance field of order s; negative when it does not exist.
double resonance_field(const StarkPair& pair, double f_rf, double nu_mhz, int order);

struct ScanResult {
  std::vector<double> fields;
  std::vector<double> transfer;
};
// Transfer fraction after t_int from |RRR> for every static field of the
// grid, with the RF field of `rf` superimposed. The OpenMP version
// distributes grid points over threads and gives identical numbers.
ScanResult resonance_scan(const StaticHamiltonian& h, const CollectiveBasis& basis,
                          const std::vector<double>& fields, const FieldDrive& rf, double t_int_us,
                          const IntegratorOptions& opt);
ScanResult resonance_scan_serial(const StaticHamiltonian& h, const CollectiveBasis& basis,
                                 const std::vector<double>& fields, const FieldDrive& rf,
                                 double t_int_us, const IntegratorOptions& opt);

struct Peak {
  double field_v_cm = 0.0;
  double height = 0.0;
  int order = 0;
};
struct Doublet {
  int order = 0;
  Peak low, high;
  double center_v_cm = 0.0;  // sqrt of the mean F^2, i.e. the centre in detuning
  double splitting_mhz = 0.0;
};
struct PeakOptions {
  double min_height = 0.05;
  // Peaks closer than this (in detuning) to a higher one are treated as its
  // finite-time side lobes.
  double sidelobe_window_mhz = 3.0;
};
struct PeakAnalysis {
  std::vector<Peak> peaks;
  std::vector<Doublet> doublets;
};
PeakAnalysis find_doublets(const ScanResult& scan, const StarkPair& pair, double f_rf,
                           double nu_mhz, const PeakOptions& opt = {});

}  // namespace forster
