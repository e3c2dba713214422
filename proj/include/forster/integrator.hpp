#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "forster/hamiltonian.hpp"

namespace forster {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  // Largest step in us; 0 picks 1/(20 nu) while the RF field is on.
  double max_step_us = 0.0;
  double min_step_us = 1e-12;
  double initial_step_us = 1e-4;
  std::size_t max_steps = 100'000'000;
};

// Piece of a schedule with a fixed drive and optional laser coupling.
struct Segment {
  std::string name;
  double duration_us = 0.0;
  FieldDrive drive;
  std::optional<LaserDrive> laser;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  std::vector<int> segment;  // segment index of each sample
  std::vector<std::string> segment_names;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  const Eigen::VectorXcd& final_state() const { return states.back(); }
};

// Integrates i dc/dt = 2pi H(t) c through the segments starting at t0.
// Samples are taken at t0, on the grid t0 + k sample_dt_us when that is
// positive, and at every segment boundary. Throws StepUnderflowError when
// the step size collapses below min_step_us.
Trajectory propagate(const StaticHamiltonian& h, const std::vector<Segment>& segments,
                     const Eigen::VectorXcd& initial, double t0_us, const IntegratorOptions& opt,
                     double sample_dt_us = 0.0);

// Final state only.
Eigen::VectorXcd propagate_final(const StaticHamiltonian& h, const std::vector<Segment>& segments,
                                 const Eigen::VectorXcd& initial, double t0_us,
                                 const IntegratorOptions& opt);

}  // namespace forster
