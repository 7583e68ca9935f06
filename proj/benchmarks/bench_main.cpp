#include <benchmark/benchmark.h>

#include <random>

#include "hlsforge/analysis.hpp"
#include "hlsforge/executor.hpp"
#include "hlsforge/frontends.hpp"
#include "hlsforge/optdsl.hpp"

using namespace hlsforge;

namespace {

std::string wide_template(int axes) {
  std::string text = "loop_opt," + std::to_string(axes) + ",1\n";
  for (int i = 0; i < axes; ++i) text += std::to_string(i) + ",lp" + std::to_string(i) + ",,unroll,[1 2 4 8]\n";
  return text + "set_directive_unroll -factor [factor] top/[name]\n";
}

void BM_EnumerateAndRender(benchmark::State& state) {
  const auto tmpl = parse_opt_template(wide_template(static_cast<int>(state.range(0))));
  const auto space = enumerate_design_space(tmpl);
  for (auto _ : state) {
    std::size_t bytes = 0;
    for (const auto& a : space) bytes += render_assignment(tmpl, a).size();
    benchmark::DoNotOptimize(bytes);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(space.size()));
}
BENCHMARK(BM_EnumerateAndRender)->Arg(3)->Arg(5)->Arg(7);

void BM_SampleIndices(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_indices(std::uint64_t{1} << 40, state.range(0), seed++));
}
BENCHMARK(BM_SampleIndices)->Arg(10)->Arg(1000);

void BM_WilcoxonExact(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise;
  std::vector<double> a(state.range(0)), b(state.range(0));
  for (auto& x : a) x = noise(rng);
  for (auto& x : b) x = noise(rng);
  for (auto _ : state) benchmark::DoNotOptimize(wilcoxon_signed_rank(a, b));
}
BENCHMARK(BM_WilcoxonExact)->Arg(12)->Arg(25)->Arg(200);

void BM_SimulateSchedule(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<std::vector<double>> d(8, std::vector<double>(static_cast<std::size_t>(state.range(0))));
  for (auto& g : d) {
    for (auto& x : g) x = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_schedule(d, 16, Strategy::naive));
    benchmark::DoNotOptimize(simulate_schedule(d, 16, Strategy::fine_grained));
  }
}
BENCHMARK(BM_SimulateSchedule)->Arg(100)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
