#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "mml/lindblad.hpp"

namespace {

// Sets are expensive to build at the larger sizes; share them across runs.
const mml::LindbladSet& thermal_set(int L) {
  static std::map<int, std::unique_ptr<mml::LindbladSet>> cache;
  auto& slot = cache[L];
  if (!slot) {
    const auto bath = mml::SpectralDensity::tabulated(4.0, 1.2, 0.36, 0.0, 1.0);
    slot = std::make_unique<mml::LindbladSet>(mml::build_lindblad_set(mml::ChainSpec{L, 'a'}, bath, false));
  }
  return *slot;
}

void apply_kernel(benchmark::State& state, mml::KernelKind kind) {
  const int L = static_cast<int>(state.range(0));
  const auto& set = thermal_set(L);
  const mml::Matrix X = set.system->chain(0).m1.dense() + mml::Matrix::Random(set.kernel->dim(), set.kernel->dim());
  mml::Matrix Y;
  for (auto _ : state) {
    set.kernel->apply(X, Y, mml::Direction::forward, kind);
    benchmark::DoNotOptimize(Y.data());
  }
  state.counters["dim"] = static_cast<double>(set.kernel->dim());
  state.counters["jumps"] = static_cast<double>(set.jumps.size());
}

void BM_reference(benchmark::State& s) { apply_kernel(s, mml::KernelKind::reference); }
void BM_sparse(benchmark::State& s) { apply_kernel(s, mml::KernelKind::sparse); }
void BM_monomial(benchmark::State& s) { apply_kernel(s, mml::KernelKind::monomial); }

void BM_rk4_step(benchmark::State& state) {
  const auto& set = thermal_set(static_cast<int>(state.range(0)));
  const mml::Matrix X0 = set.system->chain(0).m1.dense();
  mml::EvolveOptions opt;
  opt.dt = 1e-3;
  opt.t_max = 1e-2;
  opt.sample_every = 10;
  opt.error_every = 1000;
  for (auto _ : state) {
    auto r = mml::evolve(set, X0, mml::Direction::adjoint, opt, {});
    benchmark::DoNotOptimize(r.final_operator.data());
  }
  state.SetLabel("10 RK4 steps, automatic kernel");
}

}  // namespace

BENCHMARK(BM_reference)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sparse)->Arg(4)->Arg(6)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_monomial)->Arg(4)->Arg(6)->Arg(8)->Arg(9)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rk4_step)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
