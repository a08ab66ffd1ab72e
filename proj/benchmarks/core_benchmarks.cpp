#include <benchmark/benchmark.h>

#include "bethe/contour.hpp"
#include "bethe/gibbs.hpp"
#include "bethe/mc.hpp"

using namespace bethe;

namespace {

void BM_BuildBall(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto t = build_ball({4, depth});
    benchmark::DoNotOptimize(t->vertex_count());
  }
  state.SetLabel(std::to_string(ball_vertex_count(4, depth)) + " vertices");
}
BENCHMARK(BM_BuildBall)->Arg(6)->Arg(8)->Arg(9);

void BM_DimerCover(benchmark::State& state) {
  auto t = build_ball({4, static_cast<int>(state.range(0))});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto d = gen_dimer_cover(t, ++seed);
    benchmark::DoNotOptimize(d.size());
  }
}
BENCHMARK(BM_DimerCover)->Arg(6)->Arg(8);

void BM_ExactMarginals(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  auto t = build_ball({4, depth + 1});
  const auto d = gen_dimer_cover(t, 1);
  const GibbsParams p{2.0, 1.0, depth, false};
  for (auto _ : state) {
    auto mag = exact_marginals(d, +1, p);
    benchmark::DoNotOptimize(mag[0]);
  }
}
BENCHMARK(BM_ExactMarginals)->Arg(4)->Arg(6)->Arg(8);

void BM_ExcitationScan(benchmark::State& state) {
  auto t = build_ball({4, 5});
  const auto d = gen_dimer_cover(t, 1);
  const int m_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto report = verify_ground_state(d, {1.0}, m_max, {8'000'000});
    benchmark::DoNotOptimize(report.min_units);
    state.counters["sets"] = static_cast<double>(report.sets_enumerated);
  }
}
BENCHMARK(BM_ExcitationScan)->Arg(3)->Arg(4)->Arg(5);

void BM_SubgraphCensus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto t = build_ball({4, n + 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_connected_edge_subgraphs(*t, Tree::root(), n));
  }
}
BENCHMARK(BM_SubgraphCensus)->Arg(4)->Arg(6)->Arg(8);

void BM_McSweeps(benchmark::State& state) {
  auto t = build_ball({4, 4});
  const auto d = gen_dimer_cover(t, 1);
  const GibbsParams p{2.0, 1.0, 3, false};
  McConfig mc;
  mc.sweeps = state.range(0);
  mc.burn_in = 0;
  mc.seed = 1;
  for (auto _ : state) {
    auto est = sample(d, +1, p, mc);
    benchmark::DoNotOptimize(est.magnetization[0]);
  }
  state.SetItemsProcessed(state.iterations() * mc.sweeps);
}
BENCHMARK(BM_McSweeps)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
