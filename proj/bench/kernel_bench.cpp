#include <benchmark/benchmark.h>

#include "amalgam/kernels.hpp"
#include "amalgam/star_algebra.hpp"

using namespace amalgam;

namespace {

const FiniteGroup& bench_group() {
  static const FiniteGroup g = FiniteGroup::symmetric(5);
  return g;
}

const StarAlgebra& bench_algebra() {
  static const StarAlgebra a = tensor(matrix_algebra(2), matrix_algebra(2));
  return a;
}

void BM_GroupAssocSerial(benchmark::State& st) {
  const auto& g = bench_group();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::group_assoc_serial(g.flat_table(), g.order()));
}
void BM_GroupAssocParallel(benchmark::State& st) {
  const auto& g = bench_group();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::group_assoc_parallel(g.flat_table(), g.order()));
}

void BM_AlgebraAssocSerial(benchmark::State& st) {
  const auto& a = bench_algebra();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::algebra_assoc_serial(a.structure, a.dim));
}
void BM_AlgebraAssocParallel(benchmark::State& st) {
  const auto& a = bench_algebra();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::algebra_assoc_parallel(a.structure, a.dim));
}

SparseVec product(int i, int j) {
  const auto& a = bench_algebra();
  return to_sparse(a.mul(a.basis(i), a.basis(j)));
}
void BM_PairTableSerial(benchmark::State& st) {
  const int d = bench_algebra().dim;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::pair_table_serial(d, d, product));
}
void BM_PairTableParallel(benchmark::State& st) {
  const int d = bench_algebra().dim;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::pair_table_parallel(d, d, product));
}

Scalar entry(int x, int y) {
  const auto& a = bench_algebra();
  return a.tau(a.mul(a.star_of(a.basis(x)), a.basis(y)));
}
void BM_GramSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::gram_serial(bench_algebra().dim, entry));
}
void BM_GramParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::gram_parallel(bench_algebra().dim, entry));
}

}  // namespace

BENCHMARK(BM_GroupAssocSerial);
BENCHMARK(BM_GroupAssocParallel);
BENCHMARK(BM_AlgebraAssocSerial);
BENCHMARK(BM_AlgebraAssocParallel);
BENCHMARK(BM_PairTableSerial);
BENCHMARK(BM_PairTableParallel);
BENCHMARK(BM_GramSerial);
BENCHMARK(BM_GramParallel);

BENCHMARK_MAIN();
