#include <benchmark/benchmark.h>

#include "sddkit/constructions.hpp"
#include "sddkit/obdd.hpp"
#include "sddkit/sdd.hpp"

namespace {

void BM_BuildFnSdd(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    auto artifact = sddkit::build_fn_sdd(n);
    benchmark::DoNotOptimize(artifact.report.arcs);
  }
}
BENCHMARK(BM_BuildFnSdd)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_ExactCountObdd(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto sigma = sddkit::x_scope(n);
  for (auto _ : state) {
    auto diagram = sddkit::build_exact_count(n, n / 2, sigma);
    benchmark::DoNotOptimize(diagram.node_count());
  }
}
BENCHMARK(BM_ExactCountObdd)->Arg(16)->Arg(40);

void BM_PrimePartitionApply(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto sigma = sddkit::x_scope(n);
  const auto family = sddkit::build_prime_family(n, sigma);
  for (auto _ : state) {
    sddkit::Obdd all = family[0];
    for (std::size_t i = 1; i < family.size(); ++i)
      all = sddkit::apply(sddkit::ObddOp::Or, all, family[i]);
    benchmark::DoNotOptimize(all.root());
  }
}
BENCHMARK(BM_PrimePartitionApply)->Arg(8)->Arg(12);

void BM_MinObddHwb(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto oracle = sddkit::hwb_oracle(n);
  for (auto _ : state) {
    auto result = sddkit::min_obdd_size_exact(oracle);
    benchmark::DoNotOptimize(result.internal_nodes);
  }
}
BENCHMARK(BM_MinObddHwb)->Arg(8)->Arg(10)->Arg(12);

void BM_CompressHwbSdd(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    auto artifact = sddkit::build_hwb_sdd(n);
    auto compressed = sddkit::compress(artifact.root, *artifact.env);
    benchmark::DoNotOptimize(compressed.index);
  }
}
BENCHMARK(BM_CompressHwbSdd)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
