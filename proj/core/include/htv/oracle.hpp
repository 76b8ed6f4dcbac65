#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "htv/box.hpp"
#include "htv/matnorm.hpp"

namespace htv {

using Evaluator = std::function<double(std::span<const double>)>;

// Samples of f for the cell-mass oracle. The box is cut into n cells per
// axis (spacing h); f is sampled on a lattice of spacing h / (2 r) that
// covers cell corners, cell-face offsets of +-h/(2r) and r midpoints per cell
// and axis, plus one ghost sample beyond each box face. supersample 0 picks
// r = 8 for d <= 2 and r = 4 in 3D.
class GridEvaluation {
 public:
  static GridEvaluation sample(const Evaluator& f, const BoxDomain& domain, int n, int supersample = 0);

  const BoxDomain& domain() const noexcept { return domain_; }
  int resolution() const noexcept { return n_; }
  int supersample() const noexcept { return r_; }
  double spacing(int axis) const { return domain_.width(axis) / n_; }
  std::size_t sample_count() const;

  // Block of samples; bit a of `corner_axes` set means axis a is indexed by
  // corners (0..n), otherwise by odd lattice points m = -1..r n, stored at m+1.
  const std::vector<double>& block(unsigned corner_axes) const { return blocks_.at(corner_axes); }
  std::vector<int> block_shape(unsigned corner_axes) const;

 private:
  GridEvaluation(BoxDomain domain, int n, int r) : domain_(std::move(domain)), n_(n), r_(r) {}
  BoxDomain domain_;
  int n_, r_;
  std::map<unsigned, std::vector<double>> blocks_;
};

struct OracleResult {
  double value = 0.0;
  std::size_t cells = 0;
  std::size_t excluded = 0;  // cells touching non-finite ghost samples
};

// Sum over cells of the Schatten norm of the cell's Hessian mass.
OracleResult grid_htv(const GridEvaluation& g, SchattenOrder p);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double value = 0.0;
  double relative_error = 0.0;
  std::size_t excluded = 0;
};

std::vector<ConvergenceRow> convergence_study(const Evaluator& f, const BoxDomain& domain, SchattenOrder p,
                                              const std::vector<int>& resolutions, double reference,
                                              int supersample = 0);

}  // namespace htv
