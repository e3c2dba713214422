#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

#include "forster/gate.hpp"

namespace forster {

using LogicalVector = Eigen::Matrix<cd, 8, 1>;

// |<ref|sim>| for a subnormalized pure simulated state and a unit reference.
double single_state_fidelity(const Eigen::VectorXcd& sim, const Eigen::VectorXcd& ref);
// Tr sqrt(sqrt(rho_et) rho_sim sqrt(rho_et)) for general density matrices.
double density_fidelity(const Eigen::MatrixXcd& rho_sim, const Eigen::MatrixXcd& rho_et);

// The six single-qubit states 0, 1, +, -, +i, -i.
const std::vector<std::pair<std::string, Eigen::Vector2cd>>& single_qubit_states();

struct ProductState {
  std::string label;  // "c1,c2,t"
  LogicalVector psi;
};
// All 216 products, control 1 slowest.
std::vector<ProductState> product_states();

// diag(1, ..., 1, e^{i phi}).
LogicalMatrix ideal_gate(double phi);

struct FidelityOptions {
  // Evaluate every state through density matrices instead of the overlap.
  bool general_path = false;
};

struct FidelityReport {
  std::vector<std::string> labels;
  std::vector<double> per_state;
  double average = 0.0;
  double worst = 0.0;
  std::string worst_label;
  double computational_average = 0.0;  // over the 8 basis products only
  double phi_target = 0.0;
  double temperature_k = 0.0;
};

FidelityReport average_gate_fidelity(const LogicalMatrix& u, double phi,
                                     const FidelityOptions& opt = {});
FidelityReport average_gate_fidelity_serial(const LogicalMatrix& u, double phi,
                                            const FidelityOptions& opt = {});

void write_fidelity_csv(std::ostream& out, const FidelityReport& r);

}  // namespace forster
