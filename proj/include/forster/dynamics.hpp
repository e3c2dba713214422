#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "forster/collective_basis.hpp"
#include "forster/integrator.hpp"

namespace forster {

// Population summed over the listed basis indices.
double population(const Eigen::VectorXcd& psi, const std::vector<std::size_t>& idx);
std::vector<double> population_series(const Trajectory& tr, const std::vector<std::size_t>& idx);

// Population-weighted number of (n+1)S atoms per state.
double transfer_fraction(const CollectiveBasis& basis, const Eigen::VectorXcd& psi);

// Removes 2pi jumps between consecutive samples.
std::vector<double> unwrap(const std::vector<double>& wrapped);
// Unwrapped phase of one amplitude along the trajectory.
std::vector<double> phase_series(const Trajectory& tr, std::size_t index);

// Norm lost to decay and population that ended outside the target set.
struct LossBudget {
  double decay = 0.0;
  double leakage = 0.0;
};
LossBudget loss_budget(const Eigen::VectorXcd& initial, const Eigen::VectorXcd& final_state,
                       const std::vector<std::size_t>& target);

// Oscillation of a population that starts near 1: time of the first
// minimum, time and height of the following maximum. Extrema are refined by
// a parabola through the neighbouring samples.
struct RabiFeatures {
  double first_min_time = 0.0;
  double first_min_value = 0.0;
  double period = 0.0;
  double return_max = 0.0;
  bool found = false;
};
RabiFeatures rabi_features(const std::vector<double>& times, const std::vector<double>& pop);

struct CsvColumn {
  std::string name;
  std::vector<double> values;
};
// Writes '# key = value' metadata lines, a header row and the data rows.
void write_csv(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& meta,
               const std::vector<CsvColumn>& columns);

// Time plus population and unwrapped phase of each listed state.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const CollectiveBasis& basis,
                          const std::vector<std::size_t>& states,
                          const std::vector<std::pair<std::string, std::string>>& meta = {});

}  // namespace forster

namespace forster {

// |a|^2-weighted mean of the unwrapped phases of a logical state and the
// Rydberg state it is laser-coupled to. Throws PhysicsError when both
// amplitudes vanish at a sample.
std::vector<double> weighted_phase(const Trajectory& tr, std::size_t logical, std::size_t rydberg);

}  // namespace forster
