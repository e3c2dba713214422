// Serial reference against the OpenMP kernels. Pin the thread count with
// OMP_NUM_THREADS; on a single core both variants should time alike.
#include <benchmark/benchmark.h>

#include "forster/fidelity.hpp"
#include "forster/floquet.hpp"
#include "forster/gate.hpp"

using namespace forster;

namespace {

struct Fixture {
  AtomicConstants c = AtomicConstants::rubidium87();
  CollectiveBasis basis = build_interaction_basis({}, c);
  LevelTable table = build_level_table(basis.inventory(), 300.0, c);
  ModelOptions opt{};
  StaticHamiltonian h = [this] {
    ModelOptions o;
    o.frame = Frame::ZeroField;
    return assemble(basis, table, o);
  }();
};

Fixture& fx() {
  static Fixture f;
  return f;
}

const GateEngine& engine() {
  static const GateEngine e(AtomicConstants::rubidium87(), GateModel{});
  return e;
}

std::vector<double> scan_grid() {
  std::vector<double> g;
  for (int k = 0; k < 8; ++k) g.push_back(0.160 + 0.002 * k);
  return g;
}

IntegratorOptions scan_tol() {
  IntegratorOptions o;
  o.rtol = 1e-8;
  o.atol = 1e-10;
  return o;
}

void BM_DdiSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(ddi_matrix_serial(fx().basis, fx().table, fx().opt));
}
void BM_DdiParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(ddi_matrix(fx().basis, fx().table, fx().opt));
}

void BM_ScanSerial(benchmark::State& s) {
  const FieldDrive rf{0.0, 0.05, 50.0, 0.0};
  for (auto _ : s) benchmark::DoNotOptimize(resonance_scan_serial(fx().h, fx().basis, scan_grid(), rf, 0.635, scan_tol()));
}
void BM_ScanParallel(benchmark::State& s) {
  const FieldDrive rf{0.0, 0.05, 50.0, 0.0};
  for (auto _ : s) benchmark::DoNotOptimize(resonance_scan(fx().h, fx().basis, scan_grid(), rf, 0.635, scan_tol()));
}

void BM_GateSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(engine().run_serial(PulseSchedule{}, M_PI).propagator);
}
void BM_GateParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(engine().run(PulseSchedule{}, M_PI).propagator);
}

void BM_FidelitySerial(benchmark::State& s) {
  const auto u = ideal_gate(M_PI);
  for (auto _ : s) benchmark::DoNotOptimize(average_gate_fidelity_serial(u, M_PI, {true}).average);
}
void BM_FidelityParallel(benchmark::State& s) {
  const auto u = ideal_gate(M_PI);
  for (auto _ : s) benchmark::DoNotOptimize(average_gate_fidelity(u, M_PI, {true}).average);
}

}  // namespace

BENCHMARK(BM_DdiSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DdiParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_ScanParallel)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_GateSerial)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(BM_GateParallel)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(BM_FidelitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FidelityParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
