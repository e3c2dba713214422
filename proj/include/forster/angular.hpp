#pragma once

namespace forster {

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> from the Racah closed form.
// Arguments are integers or half-integers given as doubles. Coefficients that
// violate projection conservation or the triangle rule are exactly zero.
// Throws InvalidLevelError for malformed quantum numbers.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

// Same, with every argument passed as twice its value.
double clebsch_gordan_2x(int two_j1, int two_m1, int two_j2, int two_m2, int two_J,
                         int two_M);

// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}, arguments doubled.
double wigner_6j_2x(int two_j1, int two_j2, int two_j3, int two_j4, int two_j5,
                    int two_j6);

}  // namespace forster
