#pragma once

#include "forster/atomic_data.hpp"

namespace forster {

// Anger function J_nu(z) = (1/pi) int_0^pi cos(nu t - z sin t) dt.
double anger_j(double nu, double z);

// Quasiclassical radial matrix element <a|r|b> in units of a0 for levels
// with |l_a - l_b| = 1. Symmetric under exchange of a and b.
// Throws SelectionRuleError otherwise.
double radial_matrix_element(const RydbergLevel& a, const RydbergLevel& b,
                             const AtomicConstants& c);

// Angular part of <a| r_q |b> / <a|r|b> for the spherical component q.
double angular_factor(const RydbergLevel& a, int q, const RydbergLevel& b);

// Full <a| r_q |b> in units of e a0; zero when selection rules forbid it.
double dipole_element(const RydbergLevel& a, int q, const RydbergLevel& b,
                      const AtomicConstants& c);

// Dipole-dipole matrix element <a1 a2|V|b1 b2> in MHz for two atoms a
// distance r_um apart along the quantization axis.
double ddi_element(const RydbergLevel& a1, const RydbergLevel& a2, const RydbergLevel& b1,
                   const RydbergLevel& b2, double r_um, const AtomicConstants& c);

}  // namespace forster
