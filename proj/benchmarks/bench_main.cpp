#include "dlat/lattice_sums.hpp"
#include "dlat/limits.hpp"
#include "dlat/multi_center.hpp"
#include "dlat/plane_lattice.hpp"

#include <benchmark/benchmark.h>

using namespace dlat;

namespace {

void BM_JSumEwald(benchmark::State& st) {
  const int s = static_cast<int>(st.range(0));
  const Frequency w(cplx(0.5, 0.1));
  for (auto _ : st) benchmark::DoNotOptimize(j_sum(s, w, Vec2(0.2, 0.1), 1.0).value);
}
BENCHMARK(BM_JSumEwald)->Arg(1)->Arg(2)->Arg(3);

void BM_JSumDirect(benchmark::State& st) {
  const int radius = static_cast<int>(st.range(0));
  const Frequency w(cplx(0.5, 1.0));
  for (auto _ : st) benchmark::DoNotOptimize(j_sum_direct(1, w, Vec2(0.2, 0.1), 1.0, radius).value);
}
BENCHMARK(BM_JSumDirect)->Arg(8)->Arg(32)->Arg(128);

// the split parameter scales with a^2, so the cost should not grow as a shrinks
void BM_JSumSmallSpacing(benchmark::State& st) {
  const double a = 1.0 / static_cast<double>(st.range(0));
  const Frequency w(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(j_sum(1, w, Vec2(0.3, 0.0), a).value);
}
BENCHMARK(BM_JSumSmallSpacing)->RangeMultiplier(4)->Range(1, 64);

void BM_PatchSolve(benchmark::State& st) {
  const int L = static_cast<int>(st.range(0));
  const auto centers = square_patch(L, 1.0);
  const Frequency w(cplx(0.6, 0.1));
  const WaveVector k = make_incident_wave(w, Vec2::Zero());
  for (auto _ : st) {
    const auto sys = assemble(centers, ExtensionParameter{-2.0}, w, k);
    benchmark::DoNotOptimize(solve(sys).f);
  }
  st.counters["centers"] = static_cast<double>(centers.size());
}
BENCHMARK(BM_PatchSolve)->Arg(5)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_ReflectionOrders(benchmark::State& st) {
  const Frequency w(7.0);
  const WaveVector k = make_incident_wave(w, Vec2(0.4, 0.0));
  for (auto _ : st) {
    const cplx phi = phi_tilde(ModeKind::TM, lattice_inverse_coupling(ModeKind::TM, 1.0, w), w, k, 1.0);
    benchmark::DoNotOptimize(reflection_orders(ModeKind::TM, phi, 7.0, k, 1.0));
  }
}
BENCHMARK(BM_ReflectionOrders);

void BM_PhiTildeA0(benchmark::State& st) {
  const Frequency w(1.0);
  const WaveVector k = make_incident_wave(w, Vec2(0.3, 0.0));
  for (auto _ : st)
    benchmark::DoNotOptimize(phi_tilde_a0(ModeKind::TE, 1.0, 1e-4, 0.05, w, k));
}
BENCHMARK(BM_PhiTildeA0);

}  // namespace
BENCHMARK_MAIN();
