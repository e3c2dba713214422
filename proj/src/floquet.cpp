#include "forster/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "forster/dynamics.hpp"
#include "forster/errors.hpp"

namespace forster {

double bessel_j(int order, double x) {
  const int n = std::abs(order);
  double v = std::cyl_bessel_j(static_cast<double>(n), std::abs(x));
  // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
  if (order < 0 && (n % 2)) v = -v;
  if (x < 0 && (n % 2)) v = -v;
  return v;
}

SidebandSpectrum sideband_amplitudes(double k, const FieldDrive& drive, int s_max) {
  if (s_max < 0) throw PhysicsError("sideband order range must be non-negative");
  SidebandSpectrum sp;
  sp.s_max = s_max;
  sp.amplitude.assign(static_cast<std::size_t>(2 * s_max + 1), 0.0);
  if (drive.rf_on()) {
    sp.x1 = 2.0 * k * drive.dc_v_cm * drive.rf_v_cm / drive.rf_mhz;
    sp.x2 = k * drive.rf_v_cm * drive.rf_v_cm / (4.0 * drive.rf_mhz);
  }
  // J_m(x2) falls off faster than any power once |m| exceeds |x2|.
  int kmax = 0;
  while (kmax < std::abs(sp.x2) + 5 ||
         std::abs(bessel_j(kmax, sp.x2)) > 1e-18 || std::abs(bessel_j(-kmax, sp.x2)) > 1e-18) {
    if (++kmax > 100000) throw NonConvergenceError("sideband sum did not converge");
  }
  double total = 0.0;
  for (int s = -s_max; s <= s_max; ++s) {
    double a = 0.0;
    for (int m = -kmax; m <= kmax; ++m) a += bessel_j(s - 2 * m, sp.x1) * bessel_j(m, sp.x2);
    sp.amplitude[static_cast<std::size_t>(s + s_max)] = a;
    total += a * a;
  }
  sp.truncation = 1.0 - total;
  return sp;
}

StarkPair stark_pair(const CollectiveBasis& basis, const LevelTable& table,
                     const CollectiveState& initial, const CollectiveState& final_state) {
  auto coefficient = [&](const CollectiveState& s) {
    double k = 0.0;
    for (const auto& a : s.atoms) {
      if (const auto* r = std::get_if<RydbergLevel>(&a)) k += 0.5 * table.polarizability[table.index(*r)];
    }
    return k;
  };
  const auto i = basis.index_of(initial);
  const auto f = basis.index_of(final_state);
  return {basis.energies_mhz()[f] - basis.energies_mhz()[i], coefficient(final_state) - coefficient(initial)};
}

double resonance_field(const StarkPair& p, double f_rf, double nu, int order) {
  const double f2 = (order * nu - p.delta0_mhz) / p.delta_k - 0.5 * f_rf * f_rf;
  return f2 >= 0 ? std::sqrt(f2) : -1.0;
}

StarkMap stark_map(const StarkPair& p, const std::vector<double>& fields, double f_rf, double nu,
                   int s_max) {
  if (fields.size() < 2) throw PhysicsError("Stark map needs at least two field points");
  StarkMap m;
  m.fields = fields;
  for (int s = -s_max; s <= s_max; ++s) {
    m.orders.push_back(s);
    std::vector<double> ei, ef;
    for (double f : fields) {
      // Initial state at zero energy; the final curve carries the detuning.
      ei.push_back(s * nu);
      ef.push_back(p.detuning(f, f_rf) + s * nu);
    }
    m.initial_mhz.push_back(std::move(ei));
    m.final_mhz.push_back(std::move(ef));
  }
  for (int s = -2 * s_max; s <= 2 * s_max; ++s) {
    auto g = [&](double f) { return p.detuning(f, f_rf) - s * nu; };
    for (std::size_t k = 0; k + 1 < fields.size(); ++k) {
      double lo = fields[k], hi = fields[k + 1];
      double glo = g(lo), ghi = g(hi);
      if (glo == 0.0) {
        m.crossings.push_back({s, lo});
        continue;
      }
      if ((glo < 0) == (ghi < 0)) continue;
      while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      m.crossings.push_back({s, 0.5 * (lo + hi)});
    }
  }
  std::sort(m.crossings.begin(), m.crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.field_v_cm < b.field_v_cm; });
  return m;
}

namespace {

double scan_point(const StaticHamiltonian& h, const CollectiveBasis& basis, double f,
                  const FieldDrive& rf, double t_int, const IntegratorOptions& opt) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(h.size()));
  psi[static_cast<Eigen::Index>(basis.reference_index())] = 1.0;
  Segment seg{"rf", t_int, rf, std::nullopt};
  seg.drive.dc_v_cm = f;
  seg.drive.rf_t0_us = 0.0;
  return transfer_fraction(basis, propagate_final(h, {seg}, psi, 0.0, opt));
}

void check_scan(const StaticHamiltonian& h, const CollectiveBasis& basis, double t_int) {
  if (h.size() != basis.size()) throw PhysicsError("Hamiltonian and basis sizes differ");
  if (!(t_int > 0)) throw PhysicsError("interaction time must be positive");
}

}  // namespace

ScanResult resonance_scan_serial(const StaticHamiltonian& h, const CollectiveBasis& basis,
                                 const std::vector<double>& fields, const FieldDrive& rf,
                                 double t_int, const IntegratorOptions& opt) {
  check_scan(h, basis, t_int);
  ScanResult r{fields, std::vector<double>(fields.size())};
  for (std::size_t k = 0; k < fields.size(); ++k) {
    r.transfer[k] = scan_point(h, basis, fields[k], rf, t_int, opt);
  }
  return r;
}

ScanResult resonance_scan(const StaticHamiltonian& h, const CollectiveBasis& basis,
                          const std::vector<double>& fields, const FieldDrive& rf, double t_int,
                          const IntegratorOptions& opt) {
  check_scan(h, basis, t_int);
  ScanResult r{fields, std::vector<double>(fields.size())};
  const auto n = static_cast<long>(fields.size());
  bool failed = false;
  std::string what;
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    try {
      r.transfer[static_cast<std::size_t>(k)] =
          scan_point(h, basis, fields[static_cast<std::size_t>(k)], rf, t_int, opt);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        what = e.what();
      }
    }
  }
  if (failed) throw NonConvergenceError("resonance scan failed: " + what);
  return r;
}

PeakAnalysis find_doublets(const ScanResult& scan, const StarkPair& pair, double f_rf, double nu,
                           const PeakOptions& opt) {
  const auto& x = scan.fields;
  const auto& y = scan.transfer;
  if (x.size() != y.size()) throw PhysicsError("scan fields and values differ in length");
  std::vector<Peak> raw;
  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    if (!(y[k] > y[k - 1] && y[k] >= y[k + 1]) || y[k] < opt.min_height) continue;
    Peak p{x[k], y[k], 0};
    const double den = y[k - 1] - 2 * y[k] + y[k + 1];
    if (den < 0) {
      const double s = 0.5 * (y[k - 1] - y[k + 1]) / den;
      p.field_v_cm = x[k] + s * 0.5 * (x[k + 1] - x[k - 1]);
      p.height = y[k] - 0.25 * (y[k - 1] - y[k + 1]) * s;
    }
    raw.push_back(p);
  }
  PeakAnalysis out;
  for (const auto& p : raw) {
    const bool lobe = std::any_of(raw.begin(), raw.end(), [&](const Peak& q) {
      return q.height > p.height &&
             std::abs(pair.detuning(q.field_v_cm, f_rf) - pair.detuning(p.field_v_cm, f_rf)) <
                 opt.sidelobe_window_mhz;
    });
    if (lobe) continue;
    Peak kept = p;
    kept.order = static_cast<int>(std::lround(pair.detuning(p.field_v_cm, f_rf) / nu));
    out.peaks.push_back(kept);
  }
  std::map<int, std::vector<Peak>> groups;
  for (const auto& p : out.peaks) groups[p.order].push_back(p);
  for (const auto& [order, g] : groups) {
    if (g.size() != 2) continue;
    Doublet d;
    d.order = order;
    d.low = g[0];
    d.high = g[1];
    d.center_v_cm = std::sqrt(0.5 * (g[0].field_v_cm * g[0].field_v_cm + g[1].field_v_cm * g[1].field_v_cm));
    d.splitting_mhz = std::abs(pair.detuning(g[1].field_v_cm, f_rf) - pair.detuning(g[0].field_v_cm, f_rf));
    out.doublets.push_back(d);
  }
  return out;
}

}  // namespace forster
