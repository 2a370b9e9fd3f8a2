#include <benchmark/benchmark.h>

#include "overture/engine.hpp"
#include "overture/stdlib.hpp"

using namespace ovt;

namespace {

const ProtocolPackage& multiplication() {
  static const ProtocolPackage p = bdoz_package();
  return p;
}

void BM_SerialKernel(benchmark::State& state) {
  const auto& p = multiplication();
  const Kernel k(p.protocol, p.preproc);
  const VarSet project = p.protocol.outputs();
  for (auto _ : state) benchmark::DoNotOptimize(k.count_serial(project));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k.initial_count()));
}

void BM_ParallelKernel(benchmark::State& state) {
  const auto& p = multiplication();
  const Kernel k(p.protocol, p.preproc);
  const VarSet project = p.protocol.outputs();
  EngineOptions opts;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(k.count(project, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k.initial_count()));
}

void BM_ReferenceInterpreter(benchmark::State& state) {
  const ProtocolPackage p = bdoz_package(bdoz_trim());
  const VarSet project = p.protocol.outputs();
  for (auto _ : state) benchmark::DoNotOptimize(bd_reference(p.protocol, p.preproc, project));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.preproc.count()));
}

}  // namespace

BENCHMARK(BM_SerialKernel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelKernel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReferenceInterpreter)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
