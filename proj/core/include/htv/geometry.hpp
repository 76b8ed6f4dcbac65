#pragma once

#include <array>
#include <span>
#include <vector>

namespace htv::geom {

using Point = std::vector<double>;
using Point2 = std::array<double, 2>;

// Determinant of an n x n row-major matrix (partial-pivot LU).
double determinant(std::vector<double> a, int n);

// Solves a x = b for n x n row-major a. Returns false when a is singular.
bool solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x);

// Inverse of an n x n row-major matrix; false when singular.
bool invert(const std::vector<double>& a, int n, std::vector<double>& inv);

// k-volume of the simplex spanned by k+1 points in R^n (k <= n):
// sqrt(det(G^T G)) / k! for the edge matrix G. A single point has measure 1.
double simplex_volume(std::span<const Point> points);

// Counter-clockwise convex hull, collinear points dropped.
std::vector<Point2> convex_hull_2d(std::vector<Point2> pts);
double polygon_area(std::span<const Point2> poly);
// Area of the intersection of two counter-clockwise convex polygons.
double convex_intersection_area(std::span<const Point2> a, std::span<const Point2> b);

// Measure of the convex hull of points in R^k, k in {1, 2, 3}.
double hull_volume(std::span<const Point> points, int k);

}  // namespace htv::geom
