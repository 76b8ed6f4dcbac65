#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "htv/box.hpp"
#include "htv/matnorm.hpp"

namespace htv {

struct AffinePiece {
  std::size_t simplex = 0;
  std::vector<double> gradient;
  double offset = 0.0;
};

// Shared (d-1)-face of two simplices, first < second. The normal is a unit
// vector pointing out of `first`: normal . x + offset <= 0 on `first`.
struct Facet {
  std::size_t first = 0;
  std::size_t second = 0;
  std::vector<int> vertices;
  double measure = 0.0;
  std::vector<double> normal;
  double offset = 0.0;
};

// Continuous piecewise-linear function given by vertex values on a simplicial
// mesh. Immutable; affine pieces and facets are computed on construction.
class SimplicialCpwl {
 public:
  // coords: vertex_count * dim, simplices: simplex_count * (dim + 1).
  SimplicialCpwl(int dim, std::vector<double> coords, std::vector<int> simplices, std::vector<double> values);

  int dim() const noexcept { return dim_; }
  std::size_t vertex_count() const noexcept { return values_.size(); }
  std::size_t simplex_count() const noexcept { return simplices_.size() / static_cast<std::size_t>(dim_ + 1); }
  std::span<const double> vertex(std::size_t i) const;
  std::span<const int> simplex(std::size_t s) const;
  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<int>& simplices() const noexcept { return simplices_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<AffinePiece>& pieces() const noexcept { return pieces_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  BoxDomain bounding_box() const;

  // Lowest-index simplex containing x, if any.
  std::optional<std::size_t> locate(std::span<const double> x) const;
  // Throws out-of-domain outside the mesh.
  double evaluate(std::span<const double> x) const;
  // Outside the mesh: continues the affine piece of the nearest simplex
  // (the one whose barycentric coordinates are least violated).
  double evaluate_extended(std::span<const double> x) const;

  friend bool operator==(const SimplicialCpwl& a, const SimplicialCpwl& b) {
    return a.dim_ == b.dim_ && a.coords_ == b.coords_ && a.simplices_ == b.simplices_ && a.values_ == b.values_;
  }

 private:
  void barycentric(std::size_t s, std::span<const double> x, std::vector<double>& lambda) const;
  void build_locator();
  template <class Visit>
  void visit_candidates(std::span<const double> x, int ring, Visit&& visit) const;

  int dim_;
  std::vector<double> coords_;
  std::vector<int> simplices_;
  std::vector<double> values_;
  std::vector<AffinePiece> pieces_;
  std::vector<Facet> facets_;
  std::vector<double> inverse_edges_;  // per simplex, d x d inverse of the edge matrix
  // bucket grid for point location
  std::vector<double> grid_lo_, grid_cell_;
  std::vector<int> grid_n_;
  std::vector<std::size_t> bucket_start_;
  std::vector<std::size_t> bucket_items_;
};

std::vector<AffinePiece> fit_affine_pieces(const SimplicialCpwl& m);
std::vector<double> gradient_at(const SimplicialCpwl& m, std::span<const double> x);
std::vector<Facet> adjacency(const SimplicialCpwl& m);

// Closed form: sum over facets of |a_n - a_k| * measure. The same for every p.
double htv(const SimplicialCpwl& m, SchattenOrder p);

struct RegionOptions {
  double relative_tolerance = 1e-10;
};
std::size_t region_count(const SimplicialCpwl& m, const RegionOptions& options = {});

// Sum of absolute slope jumps of a linear spline.
double tv2_1d(std::span<const double> breakpoints, std::span<const double> slopes);

struct LinearSpline {
  std::vector<double> breakpoints;
  std::vector<double> slopes;      // breakpoints.size() + 1 pieces
  std::vector<double> intercepts;  // value of piece i is slopes[i] * x + intercepts[i]
  double operator()(double x) const;
};

// Breakpoints and slopes of a 1D mesh, left to right. Every interior vertex is
// a breakpoint (including zero jumps).
LinearSpline extract_spline_1d(const SimplicialCpwl& m);

// 1D mesh on [lo, hi] with vertices at lo, hi and the breakpoints inside.
SimplicialCpwl spline_to_mesh(const LinearSpline& s, double lo, double hi);

// Adds each simplex's barycenter and splits it into d + 1 simplices.
SimplicialCpwl barycentric_refinement(const SimplicialCpwl& m);

}  // namespace htv
