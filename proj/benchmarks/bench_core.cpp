#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "nldirac/branch.hpp"
#include "nldirac/fiber.hpp"
#include "nldirac/nehari.hpp"
#include "nldirac/testspinor.hpp"

using namespace nld;

namespace {

SpinorField random_field(const EigenTable& t, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  SpinorField f = t.zeros();
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const double a = std::exp(-0.5 * std::sqrt(double(t.grid().k_sq(i))));
    for (int r = 0; r < f.rank(); ++r) f.mode(i)[r] = a * cplx(nd(gen), nd(gen));
  }
  return f;
}

void BM_CollocationRoundTrip(benchmark::State& st) {
  const EigenTable t = assemble(2, static_cast<int>(st.range(0)));
  const SpinorField f = random_field(t, 1);
  for (auto _ : st) benchmark::DoNotOptimize(t.collocation().from_grid(t.collocation().to_grid(f)));
  st.counters["n_grid"] = t.grid().n_grid();
}
BENCHMARK(BM_CollocationRoundTrip)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_Assemble(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(assemble(2, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& st) {
  const EigenTable t = assemble(2, static_cast<int>(st.range(0)));
  const Functional L(split(t, 0.5), Nonlinearity::zero(2));
  const SpinorField psi = random_field(t, 2);
  for (auto _ : st) benchmark::DoNotOptimize(L.gradient(psi));
}
BENCHMARK(BM_Gradient)->Arg(8)->Arg(32);

void BM_KernelProjector(benchmark::State& st) {
  const EigenTable t = assemble(2, static_cast<int>(st.range(0)));
  const SpectralSplit sp = split(t, 1.0);
  const KernelProjector T(sp, Nonlinearity::zero(2));
  const SpinorField psi = random_field(t, 3);
  for (auto _ : st) benchmark::DoNotOptimize(T(psi));
}
BENCHMARK(BM_KernelProjector)->Arg(8)->Arg(32);

void BM_FiberMaximize(benchmark::State& st) {
  const EigenTable t = assemble(2, static_cast<int>(st.range(0)));
  const SpectralSplit sp = split(t, 0.5);
  const FiberSolver solver(Functional(sp, Nonlinearity::zero(2)));
  const SpinorField phi = normalize_plus(sp, random_field(t, 4));
  for (auto _ : st) benchmark::DoNotOptimize(solver.maximize(phi));
}
BENCHMARK(BM_FiberMaximize)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_FiberNested(benchmark::State& st) {
  const EigenTable t = assemble(2, static_cast<int>(st.range(0)));
  const SpectralSplit sp = split(t, 0.5);
  const FiberSolver solver(Functional(sp, Nonlinearity::zero(2)));
  const SpinorField phi = normalize_plus(sp, random_field(t, 4));
  for (auto _ : st) benchmark::DoNotOptimize(solver.maximize_nested(phi));
}
BENCHMARK(BM_FiberNested)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_NehariJoint(benchmark::State& st) {
  const EigenTable t = assemble(2, static_cast<int>(st.range(0)));
  const SpectralSplit sp = split(t, 1.0);
  const TildeFunctional E(sp, Nonlinearity::zero(2));
  const SpinorField phi = normalize_plus(sp, random_field(t, 5));
  for (auto _ : st) benchmark::DoNotOptimize(nehari_joint(E, phi));
}
BENCHMARK(BM_NehariJoint)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_TestSpinorEnergy(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const EigenTable t(2, n / 2 - 1, n);
  const SpectralSplit sp = split(t, 0.5);
  TestSpinorParams p;
  p.eps = 0.05;
  for (auto _ : st) benchmark::DoNotOptimize(energy_report(t, sp, build_test_spinor(t, p), p.eps));
}
BENCHMARK(BM_TestSpinorEnergy)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_MinimizeM(benchmark::State& st) {
  const EigenTable t = assemble(2, static_cast<int>(st.range(0)));
  const SpectralSplit sp = split(t, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(minimize_M(sp, Nonlinearity::zero(2)));
}
BENCHMARK(BM_MinimizeM)->Arg(8)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
