#include <benchmark/benchmark.h>

#include "misosec/channel.hpp"
#include "misosec/hermitian.hpp"
#include "misosec/robust.hpp"
#include "misosec/secrecy.hpp"

using namespace misosec;

namespace {

ChannelInstance instance(int n_t, int k, int n_e, double p_db) {
  Rng rng(7, static_cast<std::uint64_t>(n_t * 100 + k));
  ChannelInstance inst = sample_channel(rng, n_t, std::vector<int>(static_cast<std::size_t>(k), n_e), 1.0);
  inst.power = db_to_linear(p_db);
  return inst;
}

}  // namespace

static void BM_HermitianEig(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Rng rng(1, 0);
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.complex_normal(1.0);
  }
  const HermitianMatrix h(a + a.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(BM_HermitianEig)->Arg(4)->Arg(10)->Arg(30);

// Perfect-CSI SRM at the Fig. 2(a) operating point, K varied.
static void BM_SolveSrm(benchmark::State& state) {
  const ChannelInstance inst = instance(10, static_cast<int>(state.range(0)), 3, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_srm(inst));
}
BENCHMARK(BM_SolveSrm)->Arg(1)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_SolveSrc(benchmark::State& state) {
  const ChannelInstance inst = instance(10, static_cast<int>(state.range(0)), 3, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_src(inst, 0.5));
}
BENCHMARK(BM_SolveSrc)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Bisection(benchmark::State& state) {
  const ChannelInstance inst = instance(10, 4, 3, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_srm_bisection(inst));
}
BENCHMARK(BM_Bisection)->Unit(benchmark::kMillisecond);

static void BM_RobustSrm(benchmark::State& state) {
  const ChannelInstance inst = instance(10, 3, 3, 20.0);
  const UncertaintySpec spec = uncertainty_from_ratios(inst, 0.03, 0.1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_robust_srm(spec));
}
BENCHMARK(BM_RobustSrm)->Unit(benchmark::kMillisecond);

static void BM_WorstCaseEvaluator(benchmark::State& state) {
  const ChannelInstance inst = instance(10, 3, 3, 20.0);
  const UncertaintySpec spec = uncertainty_from_ratios(inst, 0.03, 0.1, 1.0);
  const HermitianMatrix w = solve_srm(inst).w;
  for (auto _ : state) benchmark::DoNotOptimize(worst_case_secrecy_rate(w, spec));
}
BENCHMARK(BM_WorstCaseEvaluator)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
