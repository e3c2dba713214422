#include "forster/angular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>

#include "forster/errors.hpp"

namespace forster {
namespace {

using i128 = __int128;

// n! for n <= 33 fits in a signed 128-bit integer.
constexpr int kMaxFactorial = 33;

i128 factorial_int(int n) {
  if (n < 0 || n > kMaxFactorial) {
    throw InvalidLevelError("angular momentum too large for exact Racah evaluation");
  }
  i128 f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

long double factorial_ld(int n) { return static_cast<long double>(factorial_int(n)); }

bool triangle_2x(int a, int b, int c) {
  return c >= std::abs(a - b) && c <= a + b && ((a + b + c) % 2 == 0);
}

void check_projection(int two_j, int two_m) {
  if (two_j < 0 || ((two_j - two_m) % 2 != 0)) {
    std::ostringstream msg;
    msg << "invalid angular momentum pair j=" << two_j / 2.0 << " m=" << two_m / 2.0;
    throw InvalidLevelError(msg.str());
  }
}

int doubled(double x) {
  const double twice = 2.0 * x;
  const double r = std::round(twice);
  if (std::abs(twice - r) > 1e-9) {
    std::ostringstream msg;
    msg << "quantum number " << x << " is not an integer or half-integer";
    throw InvalidLevelError(msg.str());
  }
  return static_cast<int>(r);
}

}  // namespace

double clebsch_gordan_2x(int j1, int m1, int j2, int m2, int J, int M) {
  check_projection(j1, m1);
  check_projection(j2, m2);
  check_projection(J, M);
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(M) > J) return 0.0;
  if (m1 + m2 != M) return 0.0;
  if (!triangle_2x(j1, j2, J)) return 0.0;

  // All factorial arguments below are integers because of the parity checks.
  const int a = (j1 + j2 - J) / 2;
  const int b = (j1 - m1) / 2;
  const int c = (j2 + m2) / 2;
  const int d = (J - j2 + m1) / 2;
  const int e = (J - j1 - m2) / 2;
  const int top = (j1 + j2 + J) / 2;

  // Every denominator of the Racah sum divides top!, so the sum is an exact
  // integer over top!.
  const i128 common = factorial_int(top);
  i128 numerator = 0;
  const int kmin = std::max({0, -d, -e});
  const int kmax = std::min({a, b, c});
  for (int k = kmin; k <= kmax; ++k) {
    const i128 den = factorial_int(k) * factorial_int(a - k) * factorial_int(b - k) *
                     factorial_int(c - k) * factorial_int(d + k) * factorial_int(e + k);
    const i128 term = common / den;
    numerator += (k % 2 == 0) ? term : -term;
  }
  if (numerator == 0) return 0.0;

  long double radicand = static_cast<long double>(J + 1);
  radicand *= factorial_ld((J + j1 - j2) / 2) * factorial_ld((J - j1 + j2) / 2) *
              factorial_ld(a) / factorial_ld(top + 1);
  radicand *= factorial_ld((J + M) / 2) * factorial_ld((J - M) / 2);
  radicand *= factorial_ld((j1 - m1) / 2) * factorial_ld((j1 + m1) / 2);
  radicand *= factorial_ld((j2 - m2) / 2) * factorial_ld((j2 + m2) / 2);
  const long double value = std::sqrt(radicand) * static_cast<long double>(numerator) /
                            static_cast<long double>(common);
  return static_cast<double>(value);
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
  return clebsch_gordan_2x(doubled(j1), doubled(m1), doubled(j2), doubled(m2), doubled(J),
                           doubled(M));
}

double wigner_6j_2x(int j1, int j2, int j3, int j4, int j5, int j6) {
  for (int v : {j1, j2, j3, j4, j5, j6}) {
    if (v < 0) throw InvalidLevelError("negative angular momentum in 6j symbol");
  }
  if (!triangle_2x(j1, j2, j3) || !triangle_2x(j1, j5, j6) || !triangle_2x(j4, j2, j6) ||
      !triangle_2x(j4, j5, j3)) {
    return 0.0;
  }
  auto delta = [](int a, int b, int c) {
    return factorial_ld((a + b - c) / 2) * factorial_ld((a - b + c) / 2) *
           factorial_ld((-a + b + c) / 2) / factorial_ld((a + b + c) / 2 + 1);
  };
  const long double pref =
      std::sqrt(delta(j1, j2, j3) * delta(j1, j5, j6) * delta(j4, j2, j6) * delta(j4, j5, j3));
  const int a1 = (j1 + j2 + j3) / 2;
  const int a2 = (j1 + j5 + j6) / 2;
  const int a3 = (j4 + j2 + j6) / 2;
  const int a4 = (j4 + j5 + j3) / 2;
  const int b1 = (j1 + j2 + j4 + j5) / 2;
  const int b2 = (j2 + j3 + j5 + j6) / 2;
  const int b3 = (j3 + j1 + j6 + j4) / 2;
  const int tmin = std::max({a1, a2, a3, a4});
  const int tmax = std::min({b1, b2, b3});
  long double sum = 0.0L;
  for (int t = tmin; t <= tmax; ++t) {
    const long double den = factorial_ld(t - a1) * factorial_ld(t - a2) * factorial_ld(t - a3) *
                            factorial_ld(t - a4) * factorial_ld(b1 - t) * factorial_ld(b2 - t) *
                            factorial_ld(b3 - t);
    const long double term = factorial_ld(t + 1) / den;
    sum += (t % 2 == 0) ? term : -term;
  }
  return static_cast<double>(pref * sum);
}

}  // namespace forster
