#pragma once

#include <span>
#include <vector>

#include "htv/cpwl.hpp"
#include "htv/matnorm.hpp"

namespace htv {

// Matrix-weighted measure A * 1_C(x1) * delta(x2 - T x1) on R^d, where x1
// collects the base axes and x2 the remaining (graph) axes. The base C is the
// convex hull of `base` in R^{d1}; T(x1) = linear * x1 + offset.
class DiracFence {
 public:
  // graph_axes: the d - d1 coordinates produced by T, increasing; empty
  // means the last d - d1 axes.
  DiracFence(Matrix weight, std::vector<std::vector<double>> base, std::vector<double> linear,
             std::vector<double> offset, std::vector<int> graph_axes = {});

  int dim() const noexcept { return weight_.dim(); }
  int base_dim() const noexcept { return base_dim_; }
  const Matrix& weight() const noexcept { return weight_; }
  const std::vector<std::vector<double>>& base() const noexcept { return base_; }
  // (d - d1) x d1, row-major
  const std::vector<double>& linear() const noexcept { return linear_; }
  const std::vector<double>& offset() const noexcept { return offset_; }
  const std::vector<int>& graph_axes() const noexcept { return graph_axes_; }
  const std::vector<int>& base_axes() const noexcept { return base_axes_; }
  double base_measure() const noexcept { return base_measure_; }

  // Point of R^d above x1.
  std::vector<double> embed(std::span<const double> x1) const;
  DiracFence scaled(double alpha) const;

 private:
  Matrix weight_;
  int base_dim_;
  std::vector<std::vector<double>> base_;
  std::vector<double> linear_, offset_;
  std::vector<int> graph_axes_, base_axes_;
  double base_measure_;
};

// d1-volume of the convex hull of the vertices (1 for a single point in R^0).
// Returns 0 when the vertices do not span d1 dimensions. Hulls are supported
// for d1 <= 3 (any d1 when exactly d1 + 1 vertices are given).
double leb_polytope(const std::vector<std::vector<double>>& vertices, int d1);

double fence_norm(const DiracFence& f, SchattenOrder p);

// True when the two fences coincide on a set of positive d1-measure.
bool fences_overlap(const DiracFence& a, const DiracFence& b);

// Sum of fence norms; throws non-additive when two fences overlap.
double fences_total_norm(std::span<const DiracFence> fences, SchattenOrder p);

// One fence per facet with a nonzero gradient jump.
std::vector<DiracFence> hessian_fences(const SimplicialCpwl& m);

}  // namespace htv
