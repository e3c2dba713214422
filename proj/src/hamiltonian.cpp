#include "forster/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "forster/angular.hpp"
#include "forster/errors.hpp"
#include "forster/matrix_elements.hpp"
#include "forster/units.hpp"

namespace forster {

double FieldDrive::field(double t) const {
  if (!rf_on()) return dc_v_cm;
  return dc_v_cm + rf_v_cm * std::cos(units::two_pi * rf_mhz * (t - rf_t0_us));
}

LaserDrive LaserDrive::pi_pulse(double duration_us, double phase_rad) {
  if (!(duration_us > 0)) throw PhysicsError("laser pulse duration must be positive");
  return {1.0 / (2.0 * duration_us), phase_rad};
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& m) {
  SparseMatrix s;
  s.n = static_cast<std::size_t>(m.rows());
  s.row_ptr.assign(1, 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) {
        s.col.push_back(static_cast<int>(j));
        s.val.push_back(m(i, j));
      }
    }
    s.row_ptr.push_back(static_cast<int>(s.col.size()));
  }
  return s;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) m(static_cast<Eigen::Index>(i), col[k]) = val[k];
  }
  return m;
}

Eigen::MatrixXcd StaticHamiltonian::evaluate(double t, const FieldDrive& drive,
                                             const std::optional<LaserDrive>& laser_drive) const {
  const double f = drive.field(t);
  Eigen::MatrixXcd h = ddi.to_dense().cast<cd>();
  for (std::size_t i = 0; i < size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    h(k, k) += cd(energy_mhz[k] + stark_mhz[k] * f * f, -decay_per_us[k] / (4.0 * units::pi));
  }
  if (laser_drive) {
    const cd up = 0.5 * laser_drive->rabi_mhz * std::polar(1.0, laser_drive->phase_rad);
    for (const auto& l : laser) {
      h(static_cast<Eigen::Index>(l.excited), static_cast<Eigen::Index>(l.ground)) += up;
      h(static_cast<Eigen::Index>(l.ground), static_cast<Eigen::Index>(l.excited)) += std::conj(up);
    }
  }
  return h;
}

void StaticHamiltonian::apply(double t, const FieldDrive& drive,
                              const std::optional<LaserDrive>& laser_drive, const cd* in,
                              cd* out) const {
  const double f2 = [&] {
    const double f = drive.field(t);
    return f * f;
  }();
  const double w = units::two_pi;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    const double e = w * (energy_mhz[i] + stark_mhz[i] * f2);
    double re = 0.0, im = 0.0;
    for (int k = ddi.row_ptr[i]; k < ddi.row_ptr[i + 1]; ++k) {
      re += ddi.val[k] * in[ddi.col[k]].real();
      im += ddi.val[k] * in[ddi.col[k]].imag();
    }
    // -i 2pi (e c + V c) - Gamma/2 c
    const cd c = in[i];
    out[i] = cd(e * c.imag() + w * im - 0.5 * decay_per_us[i] * c.real(),
                -e * c.real() - w * re - 0.5 * decay_per_us[i] * c.imag());
  }
  if (laser_drive) {
    const cd up = cd(0.0, -w) * (0.5 * laser_drive->rabi_mhz) * std::polar(1.0, laser_drive->phase_rad);
    const cd down = cd(0.0, -w) * (0.5 * laser_drive->rabi_mhz) * std::polar(1.0, -laser_drive->phase_rad);
    for (const auto& l : laser) {
      out[l.excited] += up * in[l.ground];
      out[l.ground] += down * in[l.excited];
    }
  }
}

StaticHamiltonian StaticHamiltonian::restrict(const std::vector<std::size_t>& idx) const {
  StaticHamiltonian s;
  const auto m = static_cast<Eigen::Index>(idx.size());
  s.energy_mhz.resize(m);
  s.stark_mhz.resize(m);
  s.decay_per_us.resize(m);
  std::vector<int> map(size(), -1);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= size()) throw PhysicsError("restriction index out of range");
    map[idx[k]] = static_cast<int>(k);
    s.energy_mhz[static_cast<Eigen::Index>(k)] = energy_mhz[static_cast<Eigen::Index>(idx[k])];
    s.stark_mhz[static_cast<Eigen::Index>(k)] = stark_mhz[static_cast<Eigen::Index>(idx[k])];
    s.decay_per_us[static_cast<Eigen::Index>(k)] = decay_per_us[static_cast<Eigen::Index>(idx[k])];
  }
  s.ddi.n = idx.size();
  s.ddi.row_ptr.assign(1, 0);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t i = idx[k];
    std::vector<std::pair<int, double>> row;
    for (int p = ddi.row_ptr[i]; p < ddi.row_ptr[i + 1]; ++p) {
      if (map[ddi.col[p]] >= 0) row.emplace_back(map[ddi.col[p]], ddi.val[p]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      s.ddi.col.push_back(c);
      s.ddi.val.push_back(v);
    }
    s.ddi.row_ptr.push_back(static_cast<int>(s.ddi.col.size()));
  }
  for (const auto& l : laser) {
    if (map[l.ground] >= 0 && map[l.excited] >= 0) {
      s.laser.push_back({static_cast<std::size_t>(map[l.ground]), static_cast<std::size_t>(map[l.excited])});
    }
  }
  return s;
}

StaticHamiltonian StaticHamiltonian::with_ddi_scale(double factor) const {
  StaticHamiltonian s = *this;
  for (auto& v : s.ddi.val) v *= factor;
  return s;
}

std::size_t LevelTable::index(const RydbergLevel& lv) const {
  const auto it = std::find(levels.begin(), levels.end(), lv);
  if (it == levels.end()) throw PhysicsError("level " + lv.label() + " missing from level table");
  return static_cast<std::size_t>(it - levels.begin());
}

LevelTable build_level_table(const std::vector<RydbergLevel>& inventory, double temperature_k,
                             const AtomicConstants& c, const PolarizabilityOptions& pol) {
  LevelTable t;
  t.levels = inventory;
  const std::size_t L = inventory.size();
  for (const auto& lv : inventory) {
    t.polarizability.push_back(polarizability(lv, c, pol));
    t.decay_per_us.push_back(1.0 / effective_lifetime_us(lv, temperature_k, c));
  }
  t.dipole.assign(L * L * 3, 0.0);
  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = 0; b < L; ++b) {
      for (int q = -1; q <= 1; ++q) {
        t.dipole[(a * L + b) * 3 + static_cast<std::size_t>(q + 1)] =
            dipole_element(inventory[a], q, inventory[b], c);
      }
    }
  }
  return t;
}

namespace {

struct PairGeometry {
  double inv_r3[3][3] = {};  // MHz per (e a0)^2
};

PairGeometry geometry(const ModelOptions& opt) {
  if (!(opt.separation_um > 0)) throw PhysicsError("interatomic distance must be positive");
  PairGeometry g;
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      const int d = std::abs(p - q);
      if (d == 0 || (d == 2 && !opt.next_nearest)) continue;
      const double r_au = d * opt.separation_um / units::bohr_um;
      g.inv_r3[p][q] = units::hartree_mhz / (r_au * r_au * r_au);
    }
  }
  return g;
}

// Angular weights -sqrt(6) <1 q; 1 -q | 2 0> for q = -1, 0, 1.
const double* ddi_weights() {
  static const double w[3] = {-std::sqrt(6.0) * clebsch_gordan_2x(2, -2, 2, 2, 4, 0),
                              -std::sqrt(6.0) * clebsch_gordan_2x(2, 0, 2, 0, 4, 0),
                              -std::sqrt(6.0) * clebsch_gordan_2x(2, 2, 2, -2, 4, 0)};
  return w;
}

double pair_element(const LevelTable& t, std::size_t a1, std::size_t a2, std::size_t b1,
                    std::size_t b2) {
  const double* w = ddi_weights();
  double s = 0.0;
  for (int q = -1; q <= 1; ++q) s += w[q + 1] * t.d(a1, q, b1) * t.d(a2, -q, b2);
  return s;
}

double collective_element(const CollectiveState& a, const CollectiveState& b,
                          const std::array<int, 3>& ia, const std::array<int, 3>& ib,
                          const LevelTable& t, const PairGeometry& g) {
  for (int p = 0; p < 3; ++p) {
    if (is_rydberg(a.atoms[p]) != is_rydberg(b.atoms[p])) return 0.0;
    if (!is_rydberg(a.atoms[p]) && a.atoms[p] != b.atoms[p]) return 0.0;
  }
  double v = 0.0;
  for (int p = 0; p < 3; ++p) {
    for (int q = p + 1; q < 3; ++q) {
      if (g.inv_r3[p][q] == 0.0 || ia[p] < 0 || ia[q] < 0) continue;
      const int s = 3 - p - q;
      if (ia[s] != ib[s]) continue;
      v += g.inv_r3[p][q] * pair_element(t, static_cast<std::size_t>(ia[p]), static_cast<std::size_t>(ia[q]),
                                         static_cast<std::size_t>(ib[p]), static_cast<std::size_t>(ib[q]));
    }
  }
  return v;
}

std::vector<std::array<int, 3>> level_indices(const CollectiveBasis& basis, const LevelTable& t) {
  std::vector<std::array<int, 3>> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (int p = 0; p < 3; ++p) {
      const auto* r = std::get_if<RydbergLevel>(&basis[i].atoms[p]);
      // Ground atoms get distinct negative tags so that spectator checks compare them.
      out[i][p] = r ? static_cast<int>(t.index(*r))
                    : (std::get<Ground>(basis[i].atoms[p]) == Ground::Zero ? -1 : -2);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd ddi_matrix_serial(const CollectiveBasis& basis, const LevelTable& table,
                                  const ModelOptions& opt) {
  const auto g = geometry(opt);
  const auto idx = level_indices(basis, table);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double x = collective_element(basis[i], basis[j], idx[i], idx[j], table, g);
      v(i, j) = x;
      v(j, i) = x;
    }
  }
  return v;
}

Eigen::MatrixXd ddi_matrix(const CollectiveBasis& basis, const LevelTable& table,
                           const ModelOptions& opt) {
  const auto g = geometry(opt);
  const auto idx = level_indices(basis, table);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double x = collective_element(basis[i], basis[j], idx[i], idx[j], table, g);
      v(i, j) = x;
      v(j, i) = x;
    }
  }
  return v;
}

StaticHamiltonian assemble(const CollectiveBasis& basis, const LevelTable& table,
                           const ModelOptions& opt) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (n == 0) throw EmptyBasisError("cannot assemble a Hamiltonian on an empty basis");
  StaticHamiltonian h;
  h.energy_mhz = Eigen::Map<const Eigen::VectorXd>(basis.energies_mhz().data(), n);
  h.stark_mhz = Eigen::VectorXd::Zero(n);
  h.decay_per_us = Eigen::VectorXd::Zero(n);
  const RydbergLevel r = target_level(basis.options().n);
  const double k_target = 0.5 * table.polarizability[table.index(r)];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& a : basis[i].atoms) {
      const auto* lv = std::get_if<RydbergLevel>(&a);
      if (!lv) continue;
      const std::size_t k = table.index(*lv);
      h.stark_mhz[i] += 0.5 * table.polarizability[k];
      if (opt.frame == Frame::Tracking) h.stark_mhz[i] -= k_target;
      if (opt.include_decay) h.decay_per_us[i] += table.decay_per_us[k];
    }
  }
  h.ddi = SparseMatrix::from_dense(ddi_matrix(basis, table, opt));

  for (std::size_t g = 0; g < basis.size(); ++g) {
    for (int p = 0; p < 3; ++p) {
      const auto* gs = std::get_if<Ground>(&basis[g].atoms[p]);
      if (!gs || *gs != Ground::One) continue;
      CollectiveState e = basis[g];
      e.atoms[p] = r;
      if (const auto ei = basis.find(e)) h.laser.push_back({g, *ei});
    }
  }
  return h;
}

StaticHamiltonian assemble(const CollectiveBasis& basis, const AtomicConstants& c,
                           const ModelOptions& opt) {
  const auto table = build_level_table(basis.inventory(), opt.temperature_k, c, opt.polarizability);
  return assemble(basis, table, opt);
}

}  // namespace forster
