#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "htv/cpwl.hpp"
#include "htv/delaunay.hpp"
#include "htv/matnorm.hpp"
#include "htv/oracle.hpp"
#include "htv/smooth.hpp"

using namespace htv;

namespace {

std::vector<Point2> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point2> pts{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (int k = 4; k < n; ++k) pts.push_back({u(rng), u(rng)});
  return pts;
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

void BM_Svd(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Matrix m(d, random_values(static_cast<std::size_t>(d * d), 1));
  for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}
BENCHMARK(BM_Svd)->Arg(2)->Arg(3)->Arg(8);

void BM_Delaunay(benchmark::State& state) {
  const auto pts = random_points(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(delaunay_triangulate(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Delaunay)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_CpwlHtv(benchmark::State& state) {
  const auto pts = random_points(static_cast<int>(state.range(0)), 3);
  const auto m = delaunay_cpwl_2d(pts, random_values(pts.size(), 4));
  for (auto _ : state) benchmark::DoNotOptimize(htv::htv(m, SchattenOrder::finite(1)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CpwlHtv)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_Oracle(benchmark::State& state) {
  const SmoothFn f = gaussian_bump({0.1, -0.2}, 0.4);
  const BoxDomain box = BoxDomain::cube(2, -2, 2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto g = GridEvaluation::sample(f.value, box, n);
    benchmark::DoNotOptimize(grid_htv(g, SchattenOrder::finite(1)));
  }
}
BENCHMARK(BM_Oracle)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Quadrature(benchmark::State& state) {
  const SmoothFn f = gaussian_bump({0.1, -0.2}, 0.4);
  const int n = static_cast<int>(state.range(0));
  const QuadratureSpec spec{BoxDomain::cube(2, -2, 2), {n, n}};
  for (auto _ : state) benchmark::DoNotOptimize(htv_quadrature(f, spec, SchattenOrder::finite(2)));
}
BENCHMARK(BM_Quadrature)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
