#include "forster/matrix_elements.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdlib>

#include "forster/angular.hpp"
#include "forster/errors.hpp"
#include "forster/units.hpp"

namespace forster {

double anger_j(double nu, double z) {
  auto f = [nu, z](double t) { return std::cos(nu * t - z * std::sin(t)); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, units::pi, 15, 1e-13, &err);
  return v / units::pi;
}

double radial_matrix_element(const RydbergLevel& a, const RydbergLevel& b,
                             const AtomicConstants& c) {
  validate(a);
  validate(b);
  if (std::abs(a.l - b.l) != 1) {
    throw SelectionRuleError("radial dipole element needs |dl| = 1: " + a.term_label() + " - " +
                             b.term_label());
  }
  const double na = effective_n(a, c);
  const double nb = effective_n(b, c);
  const double dn = nb - na;
  const double dl = a.l - b.l;
  const double lc = 0.5 * (a.l + b.l + 1);
  const double nc = 2.0 * na * nb / (na + nb);
  const double ecc = std::sqrt(1.0 - (lc / nc) * (lc / nc));
  if (std::abs(dn) < 1e-8) return 1.5 * nc * nc * ecc;
  const double z = -ecc * dn;
  const double bracket = (1.0 - dl * lc / nc) * anger_j(dn - 1.0, z) -
                         (1.0 + dl * lc / nc) * anger_j(dn + 1.0, z) +
                         (2.0 / units::pi) * std::sin(units::pi * dn) * (1.0 - ecc);
  return nc * nc / (2.0 * dn) * bracket;
}

double angular_factor(const RydbergLevel& a, int q, const RydbergLevel& b) {
  if (std::abs(q) > 1) throw SelectionRuleError("dipole component q must be -1, 0 or 1");
  if (std::abs(a.l - b.l) != 1) return 0.0;
  if (a.two_mj != b.two_mj + 2 * q) return 0.0;
  const double lfac = std::sqrt((2.0 * b.l + 1.0) / (2.0 * a.l + 1.0)) *
                      clebsch_gordan_2x(2 * b.l, 0, 2, 0, 2 * a.l, 0);
  double sum = 0.0;
  for (int two_ms : {-1, 1}) {
    const int two_ml = a.two_mj - two_ms;
    const int two_mlp = b.two_mj - two_ms;
    if (std::abs(two_ml) > 2 * a.l || std::abs(two_mlp) > 2 * b.l) continue;
    sum += clebsch_gordan_2x(2 * a.l, two_ml, 1, two_ms, a.two_j, a.two_mj) *
           clebsch_gordan_2x(2 * b.l, two_mlp, 1, two_ms, b.two_j, b.two_mj) *
           clebsch_gordan_2x(2 * b.l, two_mlp, 2, 2 * q, 2 * a.l, two_ml);
  }
  return sum * lfac;
}

double dipole_element(const RydbergLevel& a, int q, const RydbergLevel& b,
                      const AtomicConstants& c) {
  const double ang = angular_factor(a, q, b);
  if (ang == 0.0) return 0.0;
  return ang * radial_matrix_element(a, b, c);
}

double ddi_element(const RydbergLevel& a1, const RydbergLevel& a2, const RydbergLevel& b1,
                   const RydbergLevel& b2, double r_um, const AtomicConstants& c) {
  if (r_um <= 0) throw PhysicsError("interatomic distance must be positive");
  // Projection along the interatomic axis is conserved.
  if (a1.two_mj + a2.two_mj != b1.two_mj + b2.two_mj) return 0.0;
  double sum = 0.0;
  for (int q = -1; q <= 1; ++q) {
    const double d1 = dipole_element(a1, q, b1, c);
    if (d1 == 0.0) continue;
    const double d2 = dipole_element(a2, -q, b2, c);
    if (d2 == 0.0) continue;
    sum += clebsch_gordan_2x(2, 2 * q, 2, -2 * q, 4, 0) * d1 * d2;
  }
  const double r_au = r_um / units::bohr_um;
  return -std::sqrt(6.0) * sum / (r_au * r_au * r_au) * units::hartree_mhz;
}

}  // namespace forster
