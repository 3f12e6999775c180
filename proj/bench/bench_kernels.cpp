#include <benchmark/benchmark.h>

#include "roundforge/oracle.hpp"
#include "roundforge/verify.hpp"

using namespace roundforge;

namespace {

const SpaceExpr& hemispherex() {
  static const SpaceExpr e = build_hemispherex(2, general_position_frames(2, 3, 1));
  return e;
}

ExecutionPolicy policy(const benchmark::State& s) {
  return s.range(0) ? ExecutionPolicy::Parallel : ExecutionPolicy::Serial;
}

void BM_cat1(benchmark::State& state) {
  SampleConfig c;
  c.count = 200;
  c.policy = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(check_cat1(hemispherex(), c));
  state.SetItemsProcessed(state.iterations() * c.count);
}

void BM_oracle_batch(benchmark::State& state) {
  std::vector<std::pair<PointRef, PointRef>> pairs;
  for (std::uint64_t i = 0; i < 64; ++i) {
    auto rng = sample_rng(1, i);
    PointRef x = sample_point(hemispherex(), rng);
    PointRef y = sample_point(hemispherex(), rng);
    pairs.emplace_back(std::move(x), std::move(y));
  }
  for (auto _ : state) benchmark::DoNotOptimize(oracle_batch(hemispherex(), pairs, 0.04, policy(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pairs.size()));
}

void BM_distance(benchmark::State& state) {
  const SpaceExpr e = build_round_demo(7);
  std::vector<std::pair<PointRef, PointRef>> pairs;
  for (std::uint64_t i = 0; i < 256; ++i) {
    auto rng = sample_rng(2, i);
    PointRef x = sample_point(e, rng);
    PointRef y = sample_point(e, rng);
    pairs.emplace_back(std::move(x), std::move(y));
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [x, y] = pairs[k++ % pairs.size()];
    benchmark::DoNotOptimize(distance(e, x, y));
  }
}

}  // namespace

// Arg 0 = serial reference path, 1 = OpenMP path.
BENCHMARK(BM_cat1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_oracle_batch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_distance)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
