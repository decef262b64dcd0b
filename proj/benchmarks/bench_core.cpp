#include <benchmark/benchmark.h>

#include <random>

#include "oldreg/maximal.hpp"
#include "oldreg/poisson.hpp"
#include "oldreg/solver.hpp"
#include "oldreg/tensor.hpp"

using namespace oldreg;

namespace {

Scenario vortex_scenario(int n) {
  Scenario sc;
  sc.grid = Grid(n, n, 1.0, 1.0);
  sc.init = InitKind::TaylorGreen;
  sc.init_amplitude = 1.0;
  sc.params.viscosity = {1.0, 0.1, 2.0};
  sc.params.diffusion = {1.0, 0.1, 4.0};
  return sc;
}

void bm_coupling(benchmark::State& st) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  FullTensor3 g;
  SymTensor3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = uni(rng);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) t.at(i, j) = uni(rng);
  for (auto _ : st) {
    SymTensor3 b = coupling_b(g, t, 0.5);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(bm_coupling);

void bm_step(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Scenario sc = vortex_scenario(n);
  State s = initial_state(sc);
  const double dt = adaptive_dt(s, sc.params, sc.grid);
  for (auto _ : st) {
    State next = step(s, sc.params, sc.grid, dt);
    benchmark::DoNotOptimize(next.time);
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(bm_step)->Arg(32)->Arg(64);

void bm_projection(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Scenario sc = vortex_scenario(n);
  State s = initial_state(sc);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < n; ++j) s.vel.u(i, j) = uni(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 1; j < n; ++j) s.vel.v(i, j) = uni(rng);
  apply_velocity_boundary(s.vel, sc.grid);
  for (auto _ : st) {
    ProjectionResult r = project(s.vel, sc.grid, 1e-10);
    benchmark::DoNotOptimize(r.max_div);
  }
}
BENCHMARK(bm_projection)->Arg(64);

void bm_maximal(benchmark::State& st) {
  SpaceTimeField f(16, 32, 32, 0.01, 0.03125, 0.03125);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (double& v : f.a) v = uni(rng);
  for (auto _ : st) {
    SpaceTimeField m = parabolic_maximal(f, 1.0, 1.0);
    benchmark::DoNotOptimize(m.a.data());
  }
}
BENCHMARK(bm_maximal);

}  // namespace

BENCHMARK_MAIN();
