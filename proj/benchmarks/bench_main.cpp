#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "lsqmc/discrepancy.hpp"
#include "lsqmc/intervals.hpp"
#include "lsqmc/lscore.hpp"
#include "lsqmc/multidim.hpp"

namespace {

using lsqmc::LSParams;
using lsqmc::LSSequence;
using lsqmc::MultiBase;

void BM_Encode(benchmark::State& state) {
  const LSSequence seq(LSParams(2, 1));
  std::uint64_t n = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(seq.encode(n));
    n = n * 6364136223846793005ULL % 1000000007ULL + 1;
  }
}
BENCHMARK(BM_Encode);

void BM_PointExact(benchmark::State& state) {
  const LSSequence seq(LSParams(1, 1));
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(seq.point(n++ % 1000000));
}
BENCHMARK(BM_PointExact);

void BM_PointDouble(benchmark::State& state) {
  const LSSequence seq(LSParams(1, 1));
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(seq.point_double(n++ % 1000000));
}
BENCHMARK(BM_PointDouble);

void BM_Contains(benchmark::State& state) {
  const lsqmc::ElementaryInterval iv(LSSequence(LSParams(3, 2)), 4, 3);
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(lsqmc::contains(iv, n++));
}
BENCHMARK(BM_Contains);

void BM_VerifyEmpty(benchmark::State& state) {
  const MultiBase base({LSParams(1, 1), LSParams(4, 1)});
  const auto cert = lsqmc::build_power_relation_certificate(base, {2, 0, 1, 1});
  const auto n_max = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lsqmc::verify_empty(cert, n_max));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VerifyEmpty)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_StarDiscrepancy2d(benchmark::State& state) {
  const auto flat = lsqmc::PointGenerator::halton({2, 3}).generate(state.range(0));
  std::vector<std::array<double, 2>> pts;
  for (std::size_t i = 0; i + 1 < flat.size(); i += 2) pts.push_back({flat[i], flat[i + 1]});
  for (auto _ : state) benchmark::DoNotOptimize(lsqmc::star_discrepancy_2d(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StarDiscrepancy2d)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_PartitionOracle(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(lsqmc::partition_oracle(LSParams(2, 1), state.range(0)));
  }
}
BENCHMARK(BM_PartitionOracle)->DenseRange(4, 8, 2);

}  // namespace

BENCHMARK_MAIN();
