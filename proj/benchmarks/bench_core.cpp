#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "hrgm/completion.hpp"
#include "hrgm/degree.hpp"
#include "hrgm/graph.hpp"
#include "hrgm/pareto.hpp"
#include "hrgm/rng.hpp"
#include "hrgm/varalg.hpp"

namespace {

using namespace hrgm;

// Model point of a graph: positively weighted Laplacian pushed through the
// inverse parameter maps.
Eigen::MatrixXd model_point(const Graph& g, std::uint64_t seed) {
  const int d = g.vertex_count();
  CounterRng rng(seed);
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [i, j] : g.edges()) {
    const double q = 0.2 + rng.uniform();
    theta(i - 1, j - 1) -= q;
    theta(j - 1, i - 1) -= q;
    theta(i - 1, i - 1) += q;
    theta(j - 1, j - 1) += q;
  }
  return gamma_of_sigma(pseudo_inverse_oneperp(theta));
}

Eigen::MatrixXd random_variogram(int d, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::MatrixXd b(d - 1, d);
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = rng.normal();
  b.colwise() -= b.rowwise().mean().eval();
  return gamma_of_sigma(b.transpose() * b);
}

void BM_ThetaOfGamma(benchmark::State& state) {
  const Eigen::MatrixXd gamma = random_variogram(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(theta_of_gamma(gamma));
}
BENCHMARK(BM_ThetaOfGamma)->Arg(5)->Arg(20)->Arg(50);

void BM_StrictCndCertificate(benchmark::State& state) {
  const Eigen::MatrixXd gamma = random_variogram(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(is_strictly_cnd(gamma));
}
BENCHMARK(BM_StrictCndCertificate)->Arg(5)->Arg(20)->Arg(50);

void BM_ChordalCompletion(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Graph g = path_graph(d);
  const PartialVariogram p = PartialVariogram::from_full(g, model_point(g, 3));
  for (auto _ : state) benchmark::DoNotOptimize(complete_chordal(p));
}
BENCHMARK(BM_ChordalCompletion)->Arg(5)->Arg(10)->Arg(20);

void BM_GeneralCompletion(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Graph g = cycle_graph(d);
  const PartialVariogram p = PartialVariogram::from_full(g, model_point(g, 4));
  for (auto _ : state) benchmark::DoNotOptimize(complete_general(p));
}
BENCHMARK(BM_GeneralCompletion)->Arg(4)->Arg(6)->Arg(8);

void BM_SamplePareto(benchmark::State& state) {
  const Eigen::MatrixXd gamma = random_variogram(static_cast<int>(state.range(0)), 5);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_pareto(gamma, 1000, ++seed));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SamplePareto)->Arg(3)->Arg(5);

void BM_EmpiricalVariogram(benchmark::State& state) {
  const Eigen::MatrixXd rows = sample_pareto(random_variogram(4, 6), 10000, 7);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_variogram(rows));
  state.SetItemsProcessed(state.iterations() * rows.rows());
}
BENCHMARK(BM_EmpiricalVariogram);

void BM_K2nNumeric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(emld_k2n_numeric(n, ++seed));
}
BENCHMARK(BM_K2nNumeric)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
