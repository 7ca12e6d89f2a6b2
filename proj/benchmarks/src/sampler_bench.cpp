#include <benchmark/benchmark.h>

#include "netcatalyst/ergm.hpp"
#include "netcatalyst/generators.hpp"

using namespace netcatalyst;

namespace {

// Metropolis toggles per second for an edges + gwesp chain at moderate density.
void BM_SamplerToggles(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spec = ergm::Spec::from({{ergm::EffectKind::edges}, {ergm::EffectKind::gwesp, 0.5}}, {-3.0, 0.5});
  ergm::Sampler sampler(spec, NodeAttributes(n), generate_er(n, 2 * n, 1), 2);
  sampler.set_params(Eigen::Vector2d(-3.0, 0.5));
  const std::size_t steps = 10000;
  for (auto _ : state) {
    sampler.run(steps);
    benchmark::DoNotOptimize(sampler.stats().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * steps));
}
BENCHMARK(BM_SamplerToggles)->Arg(50)->Arg(100)->Arg(200);

void BM_ChangeStats(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spec = ergm::Spec::from({{ergm::EffectKind::edges},
                                      {ergm::EffectKind::triangles},
                                      {ergm::EffectKind::gwdegree, 0.5},
                                      {ergm::EffectKind::gwesp, 0.5}});
  const Graph g = generate_er(n, 3 * n, 3);
  NodeIndex i = 0, j = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ergm::change_stats(g, i, j, spec, NodeAttributes(n)));
    j = j + 1 < n ? j + 1 : (i = (i + 1) % (n - 1), i + 1);
  }
}
BENCHMARK(BM_ChangeStats)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
