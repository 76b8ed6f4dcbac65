#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "htv/delaunay.hpp"
#include "htv/oracle.hpp"
#include "htv/relu.hpp"
#include "htv/smooth.hpp"

using namespace htv;

namespace {

double oracle_value(const SimplicialCpwl& m, const BoxDomain& box, int n, SchattenOrder p) {
  return grid_htv(GridEvaluation::sample(fixtures::mesh_evaluator(m), box, n), p).value;
}

}  // namespace

// Closed forms against the grid oracle on imported meshes.
TEST_SUITE("crosscheck") {

TEST_CASE("random deep 1D nets against the oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MlpWeights w = fixtures::random_network(200 + seed, {1, 10, 10, 10, 1});
    const auto s = relu_to_cpwl_1d(w);
    if (s.breakpoints.empty()) continue;
    const double lo = s.breakpoints.front() - 1, hi = s.breakpoints.back() + 1;
    const double tv = tv2_1d(s.breakpoints, s.slopes);
    double gap = hi - lo;
    for (std::size_t k = 1; k < s.breakpoints.size(); ++k) gap = std::min(gap, s.breakpoints[k] - s.breakpoints[k - 1]);
    // at least four cells between neighbouring kinks
    const int n = static_cast<int>(std::min(std::ceil(4 * (hi - lo) / gap), double(1 << 20)));
    const Evaluator f = [&w](std::span<const double> x) { return w.evaluate(x); };
    const double o = grid_htv(GridEvaluation::sample(f, BoxDomain({lo}, {hi}), std::max(n, 64)), SchattenOrder::finite(1)).value;
    CAPTURE(seed);
    CHECK(std::fabs(o - tv) <= 0.02 * tv);
  }
}

TEST_CASE("random one-hidden-layer 2D nets against the oracle") {
  const BoxDomain box = BoxDomain::cube(2, -2, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int width = 1 + static_cast<int>(seed % 8);
    const MlpWeights w = fixtures::random_network(300 + seed, {2, width, 1});
    const auto r = relu_to_cpwl_2d(w, box);
    REQUIRE(r.exact);
    const double closed = htv::htv(r.mesh, SchattenOrder::finite(1));
    const Evaluator f = [&w](std::span<const double> x) { return w.evaluate(x); };
    const double o = grid_htv(GridEvaluation::sample(f, box, 256), SchattenOrder::finite(1)).value;
    CAPTURE(seed);
    CAPTURE(closed);
    CAPTURE(o);
    CHECK(std::fabs(o - closed) <= 0.02 * closed);
  }
}

TEST_CASE("pyramid network through the sampled path") {
  const auto r = relu_to_cpwl_2d(fixtures::pyramid_network(), BoxDomain::cube(2, -2, 2), {128, true});
  CHECK_FALSE(r.exact);
  CHECK(std::fabs(htv::htv(r.mesh, SchattenOrder::finite(1)) - 16.0) <= 0.03 * 16.0);
}

TEST_CASE("pyramid from its defining points") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {-2, -2}, {2, -2}, {2, 2}, {-2, 2}};
  const auto m = delaunay_cpwl_2d(pts, std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(std::fabs(htv::htv(m, SchattenOrder::finite(1)) - 16.0) <= 1e-10);
}

TEST_CASE("random Delaunay meshes against the oracle") {
  // box corners plus 46 uniform points so the mesh covers the oracle box
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(400 + seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::normal_distribution<double> g;
    std::vector<Point2> pts{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    std::vector<double> values{g(rng), g(rng), g(rng), g(rng)};
    for (int k = 0; k < 46; ++k) {
      pts.push_back({u(rng), u(rng)});
      values.push_back(g(rng));
    }
    const auto m = delaunay_cpwl_2d(pts, values);
    const double closed = htv::htv(m, SchattenOrder::finite(1));
    const double o = oracle_value(m, m.bounding_box(), 256, SchattenOrder::finite(1));
    CAPTURE(seed);
    CAPTURE(closed);
    CAPTURE(o);
    CHECK(std::fabs(o - closed) <= 0.03 * closed);
  }
}

TEST_CASE("jittered-lattice Delaunay meshes against the oracle") {
  // random connectivity without slivers thinner than a grid cell
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(500 + seed);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    std::normal_distribution<double> g;
    std::vector<Point2> pts;
    std::vector<double> values;
    const int k = 7;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const bool edge_i = i == 0 || i == k - 1, edge_j = j == 0 || j == k - 1;
        const double x = -1 + 2.0 * (i + (edge_i ? 0.0 : u(rng))) / (k - 1);
        const double y = -1 + 2.0 * (j + (edge_j ? 0.0 : u(rng))) / (k - 1);
        pts.push_back({x, y});
        values.push_back(g(rng));
      }
    const auto m = delaunay_cpwl_2d(pts, values);
    const double closed = htv::htv(m, SchattenOrder::finite(1));
    const double o = oracle_value(m, m.bounding_box(), 256, SchattenOrder::finite(1));
    CAPTURE(seed);
    CAPTURE(closed);
    CAPTURE(o);
    CHECK(std::fabs(o - closed) <= 0.03 * closed);
  }
}

TEST_CASE("oracle agrees with every 2D fixture") {
  for (const auto& [name, m] : fixtures::all_meshes()) {
    if (m.dim() != 2) continue;
    const auto g = GridEvaluation::sample(fixtures::mesh_evaluator(m), m.bounding_box(), 256);
    for (const auto& p : {SchattenOrder::finite(1), SchattenOrder::finite(2), SchattenOrder::infinity()}) {
      const double closed = htv::htv(m, p);
      const double o = grid_htv(g, p).value;
      CAPTURE(name);
      CAPTURE(p.to_string());
      CAPTURE(closed);
      CAPTURE(o);
      CHECK(std::fabs(o - closed) <= 0.02 * closed);
    }
  }
}

TEST_CASE("gaussian bump: oracle against quadrature") {
  const SmoothFn f = gaussian_bump({0.1, -0.2}, 0.4);
  const BoxDomain box = BoxDomain::cube(2, -2, 2);
  for (const auto& p : {SchattenOrder::finite(1), SchattenOrder::finite(2), SchattenOrder::infinity()}) {
    const double q = htv_quadrature(f, {box, {256, 256}}, p).value;
    const double o = grid_htv(GridEvaluation::sample(f.value, box, 256), p).value;
    CHECK(std::fabs(o - q) <= 1e-2 * q);
  }
}

}  // TEST_SUITE
