#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "obmatch/covering.hpp"
#include "obmatch/equilibrium.hpp"
#include "obmatch/instance.hpp"
#include "obmatch/mechanism.hpp"
#include "obmatch/ranking.hpp"
#include "obmatch/rng.hpp"

namespace {

using namespace obmatch;

BidProfile uniform_bids(const Instance& inst, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  BidProfile bids;
  for (int i = 0; i < inst.n_buyers; ++i) {
    bids.bids.push_back(uniform_unit(gen));
  }
  return bids;
}

void BM_RunAuction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = gen_random(n, n, 0.3, 1.0, 1.0, 42);
  const BidProfile bids = uniform_bids(inst, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_auction(inst, bids));
  }
}
BENCHMARK(BM_RunAuction)->Arg(8)->Arg(50)->Arg(200);

void BM_AllCriticalBids(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = gen_random(n, n, 0.5, 1.0, 1.0, 42);
  const BidProfile bids = uniform_bids(inst, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(all_critical_bids(inst, bids));
  }
}
BENCHMARK(BM_AllCriticalBids)->Arg(8)->Arg(16);

void BM_MaxWeightMatching(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Instance inst = gen_random(n, n, 0.3, 1.0, 1.0, 42);
  std::mt19937_64 gen(3);
  std::vector<double> weights;
  for (int i = 0; i < n; ++i) weights.push_back(uniform_unit(gen));
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_weight_feasible_matching(inst, weights));
  }
}
BENCHMARK(BM_MaxWeightMatching)->Arg(50)->Arg(200);

void BM_EnumerateMatchings(benchmark::State& state) {
  const Instance inst = gen_random(4, 4, 0.75, 1.0, 1.0, 9);  // ~12 edges
  for (auto _ : state) {
    long long count = 0;
    for_each_matching(inst, [&count](const Matching&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_EnumerateMatchings);

void BM_RankingTrial(benchmark::State& state) {
  const Instance inst = gen_triangular(50);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_competitive_ratio(inst, 100, seed++));
  }
}
BENCHMARK(BM_RankingTrial);

void BM_ExactRankingExpectation(benchmark::State& state) {
  const Instance inst = gen_triangular(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_ranking_expectation(inst));
  }
}
BENCHMARK(BM_ExactRankingExpectation)->Arg(6)->Arg(7);

void BM_FindPureEquilibria(benchmark::State& state) {
  Instance inst{2, 2, {{0, 0}, {0, 1}, {1, 0}}, {1.0, 1.0}, {0, 1}};
  const GameConfig cfg = make_game(inst, 0.05, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_pure_equilibria(cfg));
  }
}
BENCHMARK(BM_FindPureEquilibria);

}  // namespace

BENCHMARK_MAIN();
