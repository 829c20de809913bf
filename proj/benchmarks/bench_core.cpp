#include <benchmark/benchmark.h>

#include <random>

#include "symkit/casestudies.hpp"
#include "symkit/linalg.hpp"

using namespace symkit;

namespace {

ExactMatrix random_matrix(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<long> value(-9, 9);
  std::uniform_int_distribution<long> den(1, 9);
  ExactMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!keep(rng)) continue;
      m(r, c) = GaussRat::ratio(value(rng), den(rng)) + GaussRat(value(rng)) * GaussRat::imag_unit();
    }
  }
  return m;
}

void BM_OperatorSolve(benchmark::State& state) {
  OperatorPde pde = schrodinger_pde();
  OperatorAnsatz a;
  a.order = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(operator_determining_solve(pde, a).basis.size());
}
BENCHMARK(BM_OperatorSolve)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_SparseNullspace(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  ExactMatrix m = random_matrix(n / 2, n, 0.1, 42);
  std::vector<SparseSystem::Row> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m(r, c).is_zero()) rows[r].emplace_back(c, m(r, c));
    }
  }
  for (auto _ : state) {
    SparseSystem sys(n);
    for (const auto& row : rows) sys.add_row(row);
    benchmark::DoNotOptimize(sys.nullspace().size());
  }
}
BENCHMARK(BM_SparseNullspace)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_CharPoly(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  ExactMatrix m = random_matrix(n, n, 0.5, 7);
  for (auto _ : state) benchmark::DoNotOptimize(char_poly(m).degree());
}
BENCHMARK(BM_CharPoly)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_EvolutionSolve(benchmark::State& state) {
  PdeSystem heat = heat_equation();
  auto q = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evolution_case(heat, q, {}, {Weight(1)}).v);
}
BENCHMARK(BM_EvolutionSolve)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
