#pragma once

#include <array>
#include <span>
#include <vector>

#include "htv/cpwl.hpp"

namespace htv {

using Point2 = std::array<double, 2>;

// Exact signs. orient2d > 0 when a, b, c turn counter-clockwise; incircle > 0
// when d lies inside the circle through the counter-clockwise a, b, c.
int orient2d(const Point2& a, const Point2& b, const Point2& c);
int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

// Counter-clockwise triangles of the Delaunay triangulation. Points are
// inserted in lexicographic (x, y, index) order; cocircular configurations
// are left as inserted, so the result is deterministic.
std::vector<std::array<int, 3>> delaunay_triangulate(std::span<const Point2> points);

SimplicialCpwl delaunay_cpwl_2d(std::span<const Point2> points, std::span<const double> values);

}  // namespace htv
