// Microbenchmarks of the hot paths: the cylinder walker, one refinement
// step, discrepancy evaluation and certified evaluation.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cfnormal/construction.hpp"
#include "cfnormal/discrepancy.hpp"
#include "cfnormal/measures.hpp"
#include "cfnormal/refinement.hpp"

namespace {

using namespace cfnormal;

// Digits distributed like a Gauss-typical number, fixed seed.
std::vector<Digit> gauss_digits(std::size_t n) {
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Digit> out;
  while (out.size() < n) {
    const double x = std::exp2(u(rng)) - 1.0;
    const double d = std::floor(1.0 / x);
    if (d >= 1.0 && d < 1e9) out.push_back(static_cast<Digit>(d));
  }
  return out;
}

void BM_CylinderWalk(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CfCylinder parent = cf_cylinder(CfWord{1, 2, 1});
  WalkTrack track{track_state(parent), BigInt(1) << 20};
  track.max_reciprocal *= parent.reciprocal_length();
  for (auto _ : state) {
    std::size_t leaves = 0;
    for_each_extension(std::span<const WalkTrack>(&track, 1), n, [&](auto, auto) {
      ++leaves;
      return true;
    });
    benchmark::DoNotOptimize(leaves);
    state.counters["leaves"] = static_cast<double>(leaves);
  }
}
BENCHMARK(BM_CylinderWalk)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_RefineStep(benchmark::State& state) {
  const ConstructionState s = run(ConstructionConfig{}, state.range(0));
  const Schedule sched = s.config.schedule_for(s.step + 1);
  for (auto _ : state) {
    const RefinementOutcome out =
        refine_pair(s.pair, sched.t, sched.epsilon, SearchMode::search, sched.n0, s.config.refinement_options());
    benchmark::DoNotOptimize(out.n_used);
  }
}
BENCHMARK(BM_RefineStep)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_CfDiscrepancy(benchmark::State& state) {
  const CfWord w(gauss_digits(static_cast<std::size_t>(state.range(0))));
  const CfWord v{1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(cf_discrepancy(w, v).value.lower);
}
BENCHMARK(BM_CfDiscrepancy)->Arg(1 << 10)->Arg(1 << 16);

void BM_DiscrepancyBelow(benchmark::State& state) {
  const CfWord v{1};
  const Rational threshold(BigInt(1), BigInt(100));
  std::size_t c = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cf_discrepancy_below(4150 + c % 7, 10000, v, threshold));
    ++c;
  }
}
BENCHMARK(BM_DiscrepancyBelow);

void BM_BaryDiscrepancy(benchmark::State& state) {
  std::mt19937_64 rng(7);
  BaryWord w(static_cast<std::size_t>(state.range(0)));
  for (auto& d : w) d = static_cast<std::uint32_t>(rng() % 3);
  for (auto _ : state) benchmark::DoNotOptimize(bary_discrepancy(w, 3).value);
}
BENCHMARK(BM_BaryDiscrepancy)->Arg(1 << 10)->Arg(1 << 16);

void BM_GaussMeasure(benchmark::State& state) {
  const Interval iv = cf_cylinder(CfWord{1, 272, 1, 2, 1}).interval;
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_measure(iv, bits).lower);
}
BENCHMARK(BM_GaussMeasure)->Arg(64)->Arg(256)->Arg(4096);

void BM_WindowFactors(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(window_factors(state.range(0), 1, 128).lower_inverse.lower);
}
BENCHMARK(BM_WindowFactors)->Arg(6)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
