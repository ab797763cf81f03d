#include <benchmark/benchmark.h>

#include <random>

#include "nfwpt/alternating_solver.hpp"
#include "nfwpt/circle_manifold.hpp"
#include "nfwpt/field.hpp"
#include "nfwpt/precoder.hpp"

using namespace nfwpt;

namespace {

Scenario aperture_scenario(double aperture_m) {
  GeometryParams p;
  p.aperture_m = aperture_m;
  return Scenario{build_geometry(p), {{{0.0, 0.0, 1.51}, 1.0}}, 1.0, 0.5};
}

ComplexVector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d;
  ComplexVector v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

}  // namespace

// Aperture side sets the element count: 0.3 m at 28 GHz is 56 x 56.
static void BM_ChannelVector(benchmark::State& state) {
  const Scenario s = aperture_scenario(static_cast<double>(state.range(0)) * 1e-3);
  for (auto _ : state)
    benchmark::DoNotOptimize(channel_vector(s.geometry, {0.1, -0.2, 1.51}));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.geometry.element_count()));
}
BENCHMARK(BM_ChannelVector)->Arg(75)->Arg(150)->Arg(300);

static void BM_MaxEigvec(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  ComplexMatrix f(n, 3);
  for (Eigen::Index c = 0; c < 3; ++c) f.col(c) = random_vector(rng, n);
  const ComplexMatrix g = f * f.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(max_eigvec(g));
}
BENCHMARK(BM_MaxEigvec)->Arg(8)->Arg(56);

static void BM_RcgMinimize(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const QuadraticForm form({random_vector(rng, n), random_vector(rng, n)}, {0.25, 0.25});
  ComplexVector b0(n);
  for (auto& x : b0) x = std::polar(1.0, std::uniform_real_distribution<double>(0, kTwoPi)(rng));
  for (auto _ : state) benchmark::DoNotOptimize(rcg_minimize(form, b0));
}
BENCHMARK(BM_RcgMinimize)->Arg(64)->Arg(784)->Arg(3136)->Unit(benchmark::kMillisecond);

static void BM_EvaluateGrid(benchmark::State& state) {
  const Scenario s = aperture_scenario(0.075);
  const auto& g = s.geometry;
  const DmaState dma(g.microstrips(), g.elements_per_microstrip(),
                     random_phases(g.element_count(), 3));
  const Precoder w{ComplexVector::Ones(static_cast<Eigen::Index>(g.microstrips()))};
  const FieldEvaluator field(s, dma, w);
  GridSpec spec;
  spec.first.points = 41;
  spec.second.points = 51;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_grid(field, spec));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(spec.size()));
}
BENCHMARK(BM_EvaluateGrid)->Unit(benchmark::kMillisecond);

static void BM_SolveSmall(benchmark::State& state) {
  const Scenario s = aperture_scenario(0.05);
  SolverOptions o;
  o.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve(s, o));
}
BENCHMARK(BM_SolveSmall)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
