#include <benchmark/benchmark.h>

#include "dcbo/dynamics.hpp"
#include "dcbo/kernels.hpp"

using namespace dcbo;

namespace {

// One agent-advance pass on Ackley; args are (dim, agents).
template <Execution Exec>
void BM_AdvanceAgents(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const auto obj = make_ackley(d);
  const auto params = DcboParams::benchmark_defaults();
  const RngPolicy rng{1};
  RunOptions options;
  options.execution = Execution::Serial;
  const SwarmState start = init_swarm(obj, n, obj.init, rng, options);
  Matrix positions = start.positions;
  Vector values = start.values;
  long iteration = 0;
  for (auto _ : state) {
    const kernels::AdvanceContext ctx{params, params.anisotropic_count(n), obj.domain, obj.eval, rng, iteration++};
    kernels::advance_agents(Exec, positions, values, start.p, start.best_index, ctx);
    benchmark::DoNotOptimize(values.data());
  }
  state.SetItemsProcessed(state.iterations() * (n - 1));
}

void Shapes(benchmark::internal::Benchmark* b) {
  for (int d : {10, 100}) {
    for (int n : {50, 200, 1000}) b->Args({d, n});
  }
}

}  // namespace

BENCHMARK(BM_AdvanceAgents<Execution::Serial>)->Apply(Shapes);
BENCHMARK(BM_AdvanceAgents<Execution::Parallel>)->Apply(Shapes);

BENCHMARK_MAIN();
