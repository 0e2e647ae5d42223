// Serial reference vs OpenMP kernels on random operators.
#include "hoq/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using hoq::FactorProfile;
using hoq::kernels::Matrix;

Matrix random_matrix(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) m(r, c) = {g(rng), g(rng)};
  return m;
}

// range(0) = number of qubit factors
FactorProfile qubits(int k) { return FactorProfile(static_cast<std::size_t>(k), 2); }

template <bool Parallel>
void BM_FactorAverage(benchmark::State& state) {
  const auto dims = qubits(static_cast<int>(state.range(0)));
  const Matrix m = random_matrix(Eigen::Index{1} << state.range(0), 1);
  for (auto _ : state) {
    Matrix out = Parallel ? hoq::kernels::parallel::factor_average(m, dims, 1)
                          : hoq::kernels::serial::factor_average(m, dims, 1);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_PartialTrace(benchmark::State& state) {
  const auto dims = qubits(static_cast<int>(state.range(0)));
  const Matrix m = random_matrix(Eigen::Index{1} << state.range(0), 2);
  const std::vector<std::size_t> traced{0, dims.size() - 1};
  for (auto _ : state) {
    Matrix out = Parallel ? hoq::kernels::parallel::partial_trace(m, dims, traced)
                          : hoq::kernels::serial::partial_trace(m, dims, traced);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Reorder(benchmark::State& state) {
  const auto dims = qubits(static_cast<int>(state.range(0)));
  const Matrix m = random_matrix(Eigen::Index{1} << state.range(0), 3);
  std::vector<std::size_t> perm(dims.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = perm.size() - 1 - i;
  for (auto _ : state) {
    Matrix out = Parallel ? hoq::kernels::parallel::reorder(m, dims, perm) : hoq::kernels::serial::reorder(m, dims, perm);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_FactorAverage<false>)->DenseRange(4, 8, 2);
BENCHMARK(BM_FactorAverage<true>)->DenseRange(4, 8, 2);
BENCHMARK(BM_PartialTrace<false>)->DenseRange(4, 8, 2);
BENCHMARK(BM_PartialTrace<true>)->DenseRange(4, 8, 2);
BENCHMARK(BM_Reorder<false>)->DenseRange(4, 8, 2);
BENCHMARK(BM_Reorder<true>)->DenseRange(4, 8, 2);

BENCHMARK_MAIN();
