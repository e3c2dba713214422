#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "forster/atomic_data.hpp"

namespace forster {

// Ground-state qubit levels.
enum class Ground { Zero, One };

using AtomState = std::variant<Ground, RydbergLevel>;

bool is_rydberg(const AtomState& s);
std::string atom_label(const AtomState& s);

// Product state of the three atoms, listed in chain order (atom 2 in the middle).
struct CollectiveState {
  std::array<AtomState, 3> atoms;

  int rydberg_count() const;
  int two_M() const;  // twice the summed projection of the Rydberg atoms
  std::string label() const;
  bool operator==(const CollectiveState&) const = default;
};

struct BasisOptions {
  int n = 70;
  double window_ghz = 2.0;
  // Twice the total projection of the fully excited sector.
  int two_M = 3;
};

// The ten single-atom sublevels: nS, (n+1)S, nP1/2 with mj = +-1/2 and
// nP3/2 with all four projections.
std::vector<RydbergLevel> default_inventory(int n);
// Laser-excited Rydberg level nP3/2 mj = +1/2.
RydbergLevel target_level(int n);

class CollectiveBasis {
 public:
  CollectiveBasis() = default;
  CollectiveBasis(std::vector<CollectiveState> states, std::vector<double> energies_mhz,
                  std::vector<RydbergLevel> inventory, BasisOptions options);

  std::size_t size() const { return states_.size(); }
  const CollectiveState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<CollectiveState>& states() const { return states_; }
  // Zero-field energy relative to one target-level energy per Rydberg atom, MHz.
  const std::vector<double>& energies_mhz() const { return energies_mhz_; }
  const std::vector<RydbergLevel>& inventory() const { return inventory_; }
  const BasisOptions& options() const { return options_; }

  std::optional<std::size_t> find(const CollectiveState& s) const;
  std::size_t index_of(const CollectiveState& s) const;  // throws PhysicsError
  std::size_t reference_index() const;                  // |RRR>

  std::vector<std::size_t> select(const std::function<bool(const CollectiveState&)>& pred) const;

  void dump_csv(std::ostream& out) const;

 private:
  std::vector<CollectiveState> states_;
  std::vector<double> energies_mhz_;
  std::vector<RydbergLevel> inventory_;
  BasisOptions options_;
  std::map<std::string, std::size_t> index_;
};

// Fully excited sector with the configured total projection whose zero-field
// energies lie within the window of the reference state |RRR>.
CollectiveBasis build_interaction_basis(const BasisOptions& opt, const AtomicConstants& c);

// Adds the ground-state, single-excitation and pair sectors that a laser
// driving |1> <-> |R> on each atom can reach.
CollectiveBasis extend_with_logical(const CollectiveBasis& base, const AtomicConstants& c);

CollectiveState reference_state(int n);
// |nS; nP1/2; (n+1)S> with every projection +1/2, chain-ordered.
CollectiveState forster_final_state(int n);
// One nS, one nP1/2 and one (n+1)S atom in any order and projection.
bool in_final_manifold(const CollectiveState& s, int n);

}  // namespace forster
