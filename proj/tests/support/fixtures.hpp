#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "htv/cpwl.hpp"
#include "htv/io.hpp"
#include "htv/oracle.hpp"

namespace htv::fixtures {

// 1D hat on [-2, 2]: peak 1 at 0, zero outside [-1, 1]. htv 4.
SimplicialCpwl hat_1d();
// max(0, 1 - |x1| - |x2|) on [-2, 2]^2, 13 vertices, 16 triangles. htv 16.
SimplicialCpwl pyramid_2d();
// 3 x1 - 2 x2 + 5 on a 3 x 3 grid over [-1, 1]^2.
SimplicialCpwl affine_2d();
// Two tetrahedra sharing {(0,0,0), (1,0,0), (0,1,0)}, apex values 1 and 2.
SimplicialCpwl two_tet_3d();
// Delaunay mesh of the box corners plus `points` random points in
// [-0.9, 0.9]^2 with N(0, 1) values.
SimplicialCpwl random_delaunay_2d(std::uint64_t seed, int points = 30);
SimplicialCpwl refined_pyramid();

struct NamedMesh {
  std::string name;
  SimplicialCpwl mesh;
};
// hat-1D, pyramid-2D, random-Delaunay-2D, two-tet-3D, refined pyramid
std::vector<NamedMesh> all_meshes();

// Random 1D mesh on sorted random breakpoints with random values.
SimplicialCpwl random_mesh_1d(std::uint64_t seed, int intervals);

// ReLU(x + 1) - 2 ReLU(x) + ReLU(x - 1)
MlpWeights hat_network();
// ReLU(1 - ReLU(x1) - ReLU(-x1) - ReLU(x2) - ReLU(-x2)): two hidden layers
MlpWeights pyramid_network();
// Dense net with the given layer widths (input first, output 1 last), N(0, 1)
// weights and biases.
MlpWeights random_network(std::uint64_t seed, const std::vector<int>& widths);

Evaluator mesh_evaluator(const SimplicialCpwl& m);

}  // namespace htv::fixtures
