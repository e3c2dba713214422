#include "forster/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "forster/errors.hpp"
#include "forster/units.hpp"

namespace forster {

double population(const Eigen::VectorXcd& psi, const std::vector<std::size_t>& idx) {
  double p = 0.0;
  for (auto i : idx) p += std::norm(psi[static_cast<Eigen::Index>(i)]);
  return p;
}

std::vector<double> population_series(const Trajectory& tr, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(tr.states.size());
  for (const auto& s : tr.states) out.push_back(population(s, idx));
  return out;
}

double transfer_fraction(const CollectiveBasis& basis, const Eigen::VectorXcd& psi) {
  const int n = basis.options().n;
  double p = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int count = 0;
    for (const auto& a : basis[i].atoms) {
      const auto* r = std::get_if<RydbergLevel>(&a);
      if (r && r->n == n + 1 && r->l == 0) ++count;
    }
    if (count) p += count * std::norm(psi[static_cast<Eigen::Index>(i)]);
  }
  return p;
}

std::vector<double> unwrap(const std::vector<double>& w) {
  std::vector<double> out(w.size());
  double offset = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0) {
      const double jump = w[k] - w[k - 1];
      offset -= units::two_pi * std::round(jump / units::two_pi);
    }
    out[k] = w[k] + offset;
  }
  return out;
}

std::vector<double> phase_series(const Trajectory& tr, std::size_t index) {
  std::vector<double> w;
  w.reserve(tr.states.size());
  for (const auto& s : tr.states) w.push_back(std::arg(s[static_cast<Eigen::Index>(index)]));
  return unwrap(w);
}

LossBudget loss_budget(const Eigen::VectorXcd& initial, const Eigen::VectorXcd& final_state,
                       const std::vector<std::size_t>& target) {
  const double n0 = initial.squaredNorm();
  const double n1 = final_state.squaredNorm();
  return {n0 - n1, n1 - population(final_state, target)};
}

namespace {

// Vertex of the parabola through (k-1, k, k+1).
std::pair<double, double> refine(const std::vector<double>& t, const std::vector<double>& y,
                                 std::size_t k) {
  if (k == 0 || k + 1 >= y.size()) return {t[k], y[k]};
  const double a = y[k - 1], b = y[k], c = y[k + 1];
  const double den = a - 2 * b + c;
  if (den == 0.0) return {t[k], b};
  const double x = 0.5 * (a - c) / den;
  const double h = 0.5 * (t[k + 1] - t[k - 1]);
  return {t[k] + x * h, b - 0.25 * (a - c) * x};
}

}  // namespace

RabiFeatures rabi_features(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw PhysicsError("time and population series differ in length");
  RabiFeatures f;
  if (y.size() < 3) return f;
  // Half-amplitude crossings with hysteresis, so RF micromotion ripples do not count as extrema.
  const double lo = *std::min_element(y.begin(), y.end());
  const double amp = y.front() - lo;
  if (!(amp > 0)) return f;
  const double down = lo + 0.4 * amp, up = lo + 0.6 * amp;
  std::size_t k = 0;
  while (k < y.size() && y[k] > down) ++k;
  if (k == y.size()) return f;
  std::size_t kmin = k;
  while (k < y.size() && y[k] < up) {
    if (y[k] < y[kmin]) kmin = k;
    ++k;
  }
  if (k == y.size()) return f;
  std::tie(f.first_min_time, f.first_min_value) = refine(t, y, kmin);
  std::size_t kmax = k;
  while (k < y.size() && y[k] > down) {
    if (y[k] > y[kmax]) kmax = k;
    ++k;
  }
  // The return maximum must be bracketed by a second descent.
  if (k == y.size()) return f;
  std::tie(f.period, f.return_max) = refine(t, y, kmax);
  f.period -= t.front();
  f.found = true;
  return f;
}

void write_csv(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& meta,
               const std::vector<CsvColumn>& columns) {
  for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
  std::size_t rows = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << (c ? "," : "") << columns[c].name;
    rows = std::max(rows, columns[c].values.size());
  }
  out << "\n";
  out << std::setprecision(12);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ",";
      if (r < columns[c].values.size()) out << columns[c].values[r];
    }
    out << "\n";
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const CollectiveBasis& basis,
                          const std::vector<std::size_t>& states,
                          const std::vector<std::pair<std::string, std::string>>& meta) {
  std::vector<CsvColumn> cols;
  cols.push_back({"time_us", tr.times});
  for (auto i : states) {
    cols.push_back({"pop" + basis[i].label(), population_series(tr, {i})});
    cols.push_back({"phase" + basis[i].label(), phase_series(tr, i)});
  }
  write_csv(out, meta, cols);
}

}  // namespace forster

namespace forster {

std::vector<double> weighted_phase(const Trajectory& tr, std::size_t l, std::size_t r) {
  const auto pl = phase_series(tr, l);
  const auto pr = phase_series(tr, r);
  std::vector<double> out;
  out.reserve(tr.states.size());
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const double wl = std::norm(tr.states[k][static_cast<Eigen::Index>(l)]);
    const double wr = std::norm(tr.states[k][static_cast<Eigen::Index>(r)]);
    if (wl + wr == 0.0) throw PhysicsError("weighted phase undefined: both amplitudes vanish");
    out.push_back((wr * pr[k] + wl * pl[k]) / (wl + wr));
  }
  return out;
}

}  // namespace forster
