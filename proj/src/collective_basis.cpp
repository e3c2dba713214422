#include "forster/collective_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "forster/errors.hpp"
#include "forster/units.hpp"

namespace forster {

bool is_rydberg(const AtomState& s) { return std::holds_alternative<RydbergLevel>(s); }

std::string atom_label(const AtomState& s) {
  if (const auto* g = std::get_if<Ground>(&s)) return *g == Ground::Zero ? "0" : "1";
  return std::get<RydbergLevel>(s).label();
}

int CollectiveState::rydberg_count() const {
  return static_cast<int>(std::count_if(atoms.begin(), atoms.end(), is_rydberg));
}

int CollectiveState::two_M() const {
  int m = 0;
  for (const auto& a : atoms) {
    if (const auto* r = std::get_if<RydbergLevel>(&a)) m += r->two_mj;
  }
  return m;
}

std::string CollectiveState::label() const {
  return "|" + atom_label(atoms[0]) + ";" + atom_label(atoms[1]) + ";" + atom_label(atoms[2]) + ">";
}

std::vector<RydbergLevel> default_inventory(int n) {
  std::vector<RydbergLevel> inv;
  for (int m : {-1, 1}) inv.push_back({n, 0, 1, m});
  for (int m : {-1, 1}) inv.push_back({n + 1, 0, 1, m});
  for (int m : {-1, 1}) inv.push_back({n, 1, 1, m});
  for (int m : {-3, -1, 1, 3}) inv.push_back({n, 1, 3, m});
  for (const auto& lv : inv) validate(lv);
  return inv;
}

RydbergLevel target_level(int n) { return {n, 1, 3, 1}; }

CollectiveState reference_state(int n) {
  const auto r = target_level(n);
  return {{r, r, r}};
}

CollectiveState forster_final_state(int n) {
  return {{RydbergLevel{n, 0, 1, 1}, RydbergLevel{n, 1, 1, 1}, RydbergLevel{n + 1, 0, 1, 1}}};
}

bool in_final_manifold(const CollectiveState& s, int n) {
  int ns = 0, np = 0, ns1 = 0;
  for (const auto& a : s.atoms) {
    const auto* r = std::get_if<RydbergLevel>(&a);
    if (!r) return false;
    if (r->n == n && r->l == 0) ++ns;
    if (r->n == n + 1 && r->l == 0) ++ns1;
    if (r->n == n && r->l == 1 && r->two_j == 1) ++np;
  }
  return ns == 1 && np == 1 && ns1 == 1;
}

CollectiveBasis::CollectiveBasis(std::vector<CollectiveState> states,
                                 std::vector<double> energies_mhz,
                                 std::vector<RydbergLevel> inventory, BasisOptions options)
    : states_(std::move(states)),
      energies_mhz_(std::move(energies_mhz)),
      inventory_(std::move(inventory)),
      options_(options) {
  for (std::size_t i = 0; i < states_.size(); ++i) index_[states_[i].label()] = i;
}

std::optional<std::size_t> CollectiveBasis::find(const CollectiveState& s) const {
  const auto it = index_.find(s.label());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CollectiveBasis::index_of(const CollectiveState& s) const {
  const auto i = find(s);
  if (!i) throw PhysicsError("state " + s.label() + " is not in the basis");
  return *i;
}

std::size_t CollectiveBasis::reference_index() const {
  return index_of(reference_state(options_.n));
}

std::vector<std::size_t> CollectiveBasis::select(
    const std::function<bool(const CollectiveState&)>& pred) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (pred(states_[i])) out.push_back(i);
  }
  return out;
}

void CollectiveBasis::dump_csv(std::ostream& out) const {
  out << "# n = " << options_.n << "\n";
  out << "# window_ghz = " << options_.window_ghz << "\n";
  out << "index,label,rydberg_atoms,two_M,energy_mhz\n";
  out.precision(10);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    out << i << "," << states_[i].label() << "," << states_[i].rydberg_count() << ","
        << states_[i].two_M() << "," << energies_mhz_[i] << "\n";
  }
}

namespace {

struct Entry {
  CollectiveState state;
  double energy;
};

CollectiveBasis finish(std::vector<Entry> entries, std::vector<RydbergLevel> inventory,
                       const BasisOptions& opt) {
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    const int ra = a.state.rydberg_count(), rb = b.state.rydberg_count();
    return std::tie(ra, a.energy) < std::tie(rb, b.energy) ||
           (ra == rb && a.energy == b.energy && a.state.label() < b.state.label());
  });
  std::vector<CollectiveState> states;
  std::vector<double> energies;
  for (auto& e : entries) {
    states.push_back(std::move(e.state));
    energies.push_back(e.energy);
  }
  return CollectiveBasis(std::move(states), std::move(energies), std::move(inventory), opt);
}

// Energies of each inventory level relative to the target level, MHz.
std::vector<double> relative_energies(const std::vector<RydbergLevel>& inv, int n,
                                      const AtomicConstants& c) {
  const double er = level_energy_ghz(target_level(n), c);
  std::vector<double> e;
  for (const auto& lv : inv) e.push_back((level_energy_ghz(lv, c) - er) * units::ghz_to_mhz);
  return e;
}

}  // namespace

CollectiveBasis build_interaction_basis(const BasisOptions& opt, const AtomicConstants& c) {
  if (!(opt.window_ghz >= 0)) throw EmptyBasisError("energy window must be non-negative");
  const auto inv = default_inventory(opt.n);
  const auto e = relative_energies(inv, opt.n, c);
  const double window = opt.window_ghz * units::ghz_to_mhz;
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    for (std::size_t j = 0; j < inv.size(); ++j) {
      for (std::size_t k = 0; k < inv.size(); ++k) {
        if (inv[i].two_mj + inv[j].two_mj + inv[k].two_mj != opt.two_M) continue;
        const double en = e[i] + e[j] + e[k];
        if (std::abs(en) > window) continue;
        entries.push_back({{{inv[i], inv[j], inv[k]}}, en});
      }
    }
  }
  auto basis = finish(std::move(entries), inv, opt);
  if (!basis.find(reference_state(opt.n))) {
    throw EmptyBasisError("window excludes the reference state " +
                          reference_state(opt.n).label());
  }
  return basis;
}

CollectiveBasis extend_with_logical(const CollectiveBasis& base, const AtomicConstants& c) {
  const BasisOptions& opt = base.options();
  const auto& inv = base.inventory();
  const auto e = relative_energies(inv, opt.n, c);
  const double window = opt.window_ghz * units::ghz_to_mhz;
  // Each Rydberg atom carries the projection of the laser-excited level.
  const int two_m_atom = target_level(opt.n).two_mj;

  std::vector<Entry> entries;
  for (std::size_t i = 0; i < base.size(); ++i) entries.push_back({base[i], base.energies_mhz()[i]});

  const Ground g[2] = {Ground::Zero, Ground::One};
  for (int mask = 0; mask < 8; ++mask) {
    // mask bit p set: atom p is Rydberg-excited.
    const int count = __builtin_popcount(static_cast<unsigned>(mask));
    if (count == 3) continue;
    std::vector<int> ryd, gnd;
    for (int p = 0; p < 3; ++p) ((mask >> p) & 1 ? ryd : gnd).push_back(p);
    const int ng = static_cast<int>(gnd.size());
    for (int gl = 0; gl < (1 << ng); ++gl) {
      // Rydberg atoms can only come from |1>; the ground atoms take any value.
      std::array<AtomState, 3> atoms;
      for (int q = 0; q < ng; ++q) atoms[gnd[q]] = g[(gl >> q) & 1];
      if (ryd.empty()) {
        entries.push_back({{atoms}, 0.0});
        continue;
      }
      std::vector<std::size_t> pick(ryd.size(), 0);
      while (true) {
        int two_m = 0;
        double en = 0.0;
        for (std::size_t r = 0; r < ryd.size(); ++r) {
          atoms[ryd[r]] = inv[pick[r]];
          two_m += inv[pick[r]].two_mj;
          en += e[pick[r]];
        }
        if (two_m == count * two_m_atom && std::abs(en) <= window) {
          entries.push_back({{atoms}, en});
        }
        std::size_t r = 0;
        while (r < pick.size() && ++pick[r] == inv.size()) pick[r++] = 0;
        if (r == pick.size()) break;
      }
    }
  }
  return finish(std::move(entries), inv, opt);
}

}  // namespace forster
