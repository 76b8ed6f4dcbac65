#pragma once

#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "htv/box.hpp"
#include "htv/cpwl.hpp"
#include "htv/matnorm.hpp"
#include "htv/smooth.hpp"

namespace htv {

// g(x) = f(U (alpha x) - shift): rotate after scaling after translating.
class DomainTransform {
 public:
  DomainTransform(Matrix rotation, double scale, std::vector<double> shift);

  static DomainTransform identity(int dim);
  static DomainTransform translation(std::vector<double> shift);
  static DomainTransform scaling(int dim, double alpha);
  static DomainTransform rotation(Matrix u);

  // '+'-separated parts: rot:30deg | rot:0.5rad | rot@0,2:30deg (plane of
  // axes 0 and 2) | flip:AXIS | scale:A | shift:X,Y,...  Rotations and flips
  // multiply in the order given, scales multiply, shifts add.
  static DomainTransform parse(std::string_view text, int dim);

  int dim() const noexcept { return u_.dim(); }
  const Matrix& rotation_part() const noexcept { return u_; }
  double scale() const noexcept { return alpha_; }
  const std::vector<double>& shift() const noexcept { return shift_; }

  // x -> U (alpha x) - shift
  std::vector<double> forward(std::span<const double> x) const;
  // y -> U^T (y + shift) / alpha
  std::vector<double> inverse(std::span<const double> y) const;

 private:
  Matrix u_;
  double alpha_;
  std::vector<double> shift_;
};

double predicted_factor(const DomainTransform& t, int d);

SimplicialCpwl apply_to_cpwl(const SimplicialCpwl& m, const DomainTransform& t);
SmoothFn apply_to_smooth(const SmoothFn& f, const DomainTransform& t);

struct TransformedBox {
  BoxDomain box;
  bool exact;  // false: bounding box of the rotated preimage
};

// Domain of g matching the box of f.
TransformedBox transform_box(const BoxDomain& box, const DomainTransform& t);

Matrix rotation_in_plane(int dim, int i, int j, double radians);
Matrix random_orthonormal(int dim, std::mt19937_64& rng);

}  // namespace htv
