#include "fixtures.hpp"

#include <algorithm>
#include <random>

#include "htv/delaunay.hpp"

namespace htv::fixtures {

SimplicialCpwl hat_1d() {
  return SimplicialCpwl(1, {-2, -1, 0, 1, 2}, {0, 1, 1, 2, 2, 3, 3, 4}, {0, 0, 1, 0, 0});
}

SimplicialCpwl pyramid_2d() {
  // 0 centre, 1..4 diamond tips (E, N, W, S), 5..8 axis points on the box
  // (E, N, W, S), 9..12 box corners (NE, NW, SW, SE)
  std::vector<double> coords{0, 0,  1, 0,  0, 1,  -1, 0, 0, -1, 2, 0,  0, 2,
                             -2, 0, 0, -2, 2, 2,  -2, 2, -2, -2, 2, -2};
  std::vector<int> tris{0, 1, 2,  0, 2, 3,  0, 3, 4,  0, 4, 1,
                        1, 5, 9,  1, 9, 6,  1, 6, 2,
                        2, 6, 10, 2, 10, 7, 2, 7, 3,
                        3, 7, 11, 3, 11, 8, 3, 8, 4,
                        4, 8, 12, 4, 12, 5, 4, 5, 1};
  std::vector<double> values(13, 0.0);
  values[0] = 1.0;
  return SimplicialCpwl(2, std::move(coords), std::move(tris), std::move(values));
}

SimplicialCpwl affine_2d() {
  std::vector<double> coords, values;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double x = -1.0 + i, y = -1.0 + j;
      coords.insert(coords.end(), {x, y});
      values.push_back(3 * x - 2 * y + 5);
    }
  std::vector<int> tris;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const int a = 3 * i + j, b = 3 * (i + 1) + j;
      tris.insert(tris.end(), {a, b, b + 1, a, b + 1, a + 1});
    }
  return SimplicialCpwl(2, std::move(coords), std::move(tris), std::move(values));
}

SimplicialCpwl two_tet_3d() {
  return SimplicialCpwl(3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, -1}, {0, 1, 2, 3, 0, 1, 2, 4}, {0, 0, 0, 1, 2});
}

SimplicialCpwl random_delaunay_2d(std::uint64_t seed, int points) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-0.9, 0.9);
  std::normal_distribution<double> val(0.0, 1.0);
  std::vector<Point2> pts{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (int i = 0; i < points; ++i) pts.push_back({pos(rng), pos(rng)});
  std::vector<double> values;
  for (std::size_t i = 0; i < pts.size(); ++i) values.push_back(val(rng));
  return delaunay_cpwl_2d(pts, values);
}

SimplicialCpwl refined_pyramid() { return barycentric_refinement(pyramid_2d()); }

std::vector<NamedMesh> all_meshes() {
  return {{"hat-1D", hat_1d()},
          {"pyramid-2D", pyramid_2d()},
          {"random-Delaunay-2D", random_delaunay_2d(7)},
          {"two-tet-3D", two_tet_3d()},
          {"refined-pyramid", refined_pyramid()}};
}

SimplicialCpwl random_mesh_1d(std::uint64_t seed, int intervals) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> xs;
  while (static_cast<int>(xs.size()) < intervals + 1) {
    xs.push_back(u(rng));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  }
  std::vector<int> cells;
  for (int i = 0; i < intervals; ++i) cells.insert(cells.end(), {i, i + 1});
  std::vector<double> values;
  for (std::size_t i = 0; i < xs.size(); ++i) values.push_back(u(rng));
  return SimplicialCpwl(1, std::move(xs), std::move(cells), std::move(values));
}

MlpWeights hat_network() {
  MlpWeights w;
  w.input_dim = 1;
  w.layers.push_back({3, 1, {1, 1, 1}, {1, 0, -1}});
  w.layers.push_back({1, 3, {1, -2, 1}, {0}});
  return w;
}

MlpWeights pyramid_network() {
  MlpWeights w;
  w.input_dim = 2;
  w.layers.push_back({4, 2, {1, 0, -1, 0, 0, 1, 0, -1}, {0, 0, 0, 0}});
  w.layers.push_back({1, 4, {-1, -1, -1, -1}, {1}});
  w.layers.push_back({1, 1, {1}, {0}});
  return w;
}

MlpWeights random_network(std::uint64_t seed, const std::vector<int>& widths) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  MlpWeights w;
  w.input_dim = widths.front();
  for (std::size_t l = 1; l < widths.size(); ++l) {
    DenseLayer L;
    L.rows = widths[l];
    L.cols = widths[l - 1];
    for (int k = 0; k < L.rows * L.cols; ++k) L.weights.push_back(g(rng));
    for (int k = 0; k < L.rows; ++k) L.bias.push_back(g(rng));
    w.layers.push_back(std::move(L));
  }
  return w;
}

Evaluator mesh_evaluator(const SimplicialCpwl& m) {
  return [&m](std::span<const double> x) { return m.evaluate_extended(x); };
}

}  // namespace htv::fixtures
