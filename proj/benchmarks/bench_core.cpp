// Microbenchmarks for the stepper's hot path: the tridiagonal Laplacian,
// one implicit midpoint step, and a full diagnostics row.

#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include <qnls/diagnostics.hpp>
#include <qnls/dynamics.hpp>
#include <qnls/nonlinearity.hpp>
#include <qnls/radial_grid.hpp>

namespace {

using namespace qnls;

NonlinearityModel cubic_model() {
  return NonlinearityModel(3, ScalarFamily::power_sum({{1.0, 1.0}}),
                           ScalarFamily::power_sum({{1.0, 1.0}}), ScalarFamily::zero(), 1.0,
                           CriticalSign::Defocusing);
}

NonlinearityModel sqrt_model() {
  return NonlinearityModel(3, ScalarFamily::power_sum({{1.0, 0.5}}),
                           ScalarFamily::power_sum({{1.0, 2.0 / 3.0}}), ScalarFamily::zero(), 1.0,
                           CriticalSign::Defocusing);
}

void bm_laplacian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto grid = std::make_shared<const RadialGrid>(3, 40.0, n);
  const RadialField u = make_gaussian(grid, 0.8, 1.0, 0.0);
  std::vector<Complex> out(n);
  for (auto _ : state) {
    grid->apply_laplacian(u.values(), out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_laplacian)->Arg(1024)->Arg(4096)->Arg(16384);

void bm_step_cubic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto grid = std::make_shared<const RadialGrid>(3, 40.0, n);
  const NonlinearityModel model = cubic_model();
  SolverConfig config;
  RadialField u = make_gaussian(grid, 0.8, 1.0, 0.0);
  for (auto _ : state) {
    const StepStats stats = step(u, model, config.dt, config);
    benchmark::DoNotOptimize(stats.residual);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_step_cubic)->Arg(1024)->Arg(4096);

void bm_step_sqrt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto grid = std::make_shared<const RadialGrid>(3, 40.0, n);
  const NonlinearityModel model = sqrt_model();
  SolverConfig config;
  RadialField u = make_gaussian(grid, 0.8, 1.0, 0.0);
  for (auto _ : state) {
    const StepStats stats = step(u, model, config.dt, config);
    benchmark::DoNotOptimize(stats.residual);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_step_sqrt)->Arg(1024)->Arg(4096);

void bm_diagnose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto grid = std::make_shared<const RadialGrid>(3, 40.0, n);
  const NonlinearityModel model = cubic_model();
  const RadialField u = make_gaussian(grid, 0.8, 1.0, 0.0);
  for (auto _ : state) {
    const DiagnosticsRecord rec = diagnose(u, model, 0.0);
    benchmark::DoNotOptimize(rec.energy);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_diagnose)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
