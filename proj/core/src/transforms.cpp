#include "htv/transforms.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "htv/error.hpp"

namespace htv {

namespace {

double parse_num(std::string_view s, std::string_view whole) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorKind::parse, "bad number '" + std::string(s) + "' in transform '" + std::string(whole) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto k = s.find(sep);
    out.push_back(s.substr(0, k));
    if (k == std::string_view::npos) break;
    s.remove_prefix(k + 1);
  }
  return out;
}

double parse_angle(std::string_view s, std::string_view whole) {
  if (s.ends_with("deg")) return parse_num(s.substr(0, s.size() - 3), whole) * std::numbers::pi / 180.0;
  if (s.ends_with("rad")) return parse_num(s.substr(0, s.size() - 3), whole);
  return parse_num(s, whole) * std::numbers::pi / 180.0;
}

}  // namespace

DomainTransform::DomainTransform(Matrix rotation, double scale, std::vector<double> shift)
    : u_(std::move(rotation)), alpha_(scale), shift_(std::move(shift)) {
  const int d = u_.dim();
  if (d < 1) fail(ErrorKind::invalid_input, "transform needs a dimension");
  if (!(alpha_ != 0.0) || !std::isfinite(alpha_)) fail(ErrorKind::invalid_input, "scale must be finite and nonzero");
  if (static_cast<int>(shift_.size()) != d) fail(ErrorKind::dimension_mismatch, "shift has the wrong dimension");
  for (double x : shift_)
    if (!std::isfinite(x)) fail(ErrorKind::invalid_input, "shift must be finite");
  const Matrix g = u_.transpose() * u_;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (std::fabs(g(i, j) - (i == j ? 1.0 : 0.0)) > 1e-12)
        fail(ErrorKind::invalid_input, "rotation part is not orthonormal");
}

DomainTransform DomainTransform::identity(int dim) {
  return DomainTransform(Matrix::identity(dim), 1.0, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
}

DomainTransform DomainTransform::translation(std::vector<double> shift) {
  const int d = static_cast<int>(shift.size());
  return DomainTransform(Matrix::identity(d), 1.0, std::move(shift));
}

DomainTransform DomainTransform::scaling(int dim, double alpha) {
  return DomainTransform(Matrix::identity(dim), alpha, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
}

DomainTransform DomainTransform::rotation(Matrix u) {
  const int d = u.dim();
  return DomainTransform(std::move(u), 1.0, std::vector<double>(static_cast<std::size_t>(d), 0.0));
}

DomainTransform DomainTransform::parse(std::string_view text, int dim) {
  if (dim < 1) fail(ErrorKind::invalid_input, "transform needs a dimension");
  Matrix u = Matrix::identity(dim);
  double alpha = 1.0;
  std::vector<double> shift(static_cast<std::size_t>(dim), 0.0);
  for (std::string_view part : split(text, '+')) {
    if (part == "id" || part == "identity") continue;
    const auto colon = part.find(':');
    if (colon == std::string_view::npos) fail(ErrorKind::parse, "transform part '" + std::string(part) + "' lacks ':'");
    std::string_view kind = part.substr(0, colon);
    const std::string_view arg = part.substr(colon + 1);
    if (kind.starts_with("rot")) {
      int i = 0, j = 1;
      if (kind.size() > 3) {
        if (kind[3] != '@') fail(ErrorKind::parse, "unknown transform '" + std::string(kind) + "'");
        const auto axes = split(kind.substr(4), ',');
        if (axes.size() != 2) fail(ErrorKind::parse, "rotation plane needs two axes");
        i = static_cast<int>(parse_num(axes[0], text));
        j = static_cast<int>(parse_num(axes[1], text));
      }
      if (dim < 2) fail(ErrorKind::invalid_input, "rotations need dimension >= 2 (use flip in 1D)");
      u = rotation_in_plane(dim, i, j, parse_angle(arg, text)) * u;
    } else if (kind == "flip") {
      const int axis = static_cast<int>(parse_num(arg, text));
      if (axis < 0 || axis >= dim) fail(ErrorKind::invalid_input, "flip axis out of range");
      Matrix f = Matrix::identity(dim);
      f(axis, axis) = -1.0;
      u = f * u;
    } else if (kind == "scale") {
      alpha *= parse_num(arg, text);
    } else if (kind == "shift") {
      const auto parts = split(arg, ',');
      if (static_cast<int>(parts.size()) != dim)
        fail(ErrorKind::dimension_mismatch, "shift needs " + std::to_string(dim) + " components");
      for (int k = 0; k < dim; ++k) shift[static_cast<std::size_t>(k)] += parse_num(parts[static_cast<std::size_t>(k)], text);
    } else {
      fail(ErrorKind::parse, "unknown transform '" + std::string(kind) + "'");
    }
  }
  return DomainTransform(u, alpha, shift);
}

std::vector<double> DomainTransform::forward(std::span<const double> x) const {
  std::vector<double> ax(x.begin(), x.end());
  for (double& v : ax) v *= alpha_;
  auto y = u_ * std::span<const double>(ax);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= shift_[i];
  return y;
}

std::vector<double> DomainTransform::inverse(std::span<const double> y) const {
  std::vector<double> z(y.begin(), y.end());
  if (static_cast<int>(z.size()) != dim()) fail(ErrorKind::dimension_mismatch, "point dimension differs from transform");
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += shift_[i];
  auto x = u_.transpose() * std::span<const double>(z);
  for (double& v : x) v /= alpha_;
  return x;
}

double predicted_factor(const DomainTransform& t, int d) {
  if (t.scale() == 0.0) fail(ErrorKind::invalid_input, "scale must be nonzero");
  return std::pow(std::fabs(t.scale()), 2 - d);
}

SimplicialCpwl apply_to_cpwl(const SimplicialCpwl& m, const DomainTransform& t) {
  if (m.dim() != t.dim()) fail(ErrorKind::dimension_mismatch, "transform and mesh dimensions differ");
  std::vector<double> coords;
  coords.reserve(m.coords().size());
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    const auto v = t.inverse(m.vertex(i));
    coords.insert(coords.end(), v.begin(), v.end());
  }
  return SimplicialCpwl(m.dim(), std::move(coords), m.simplices(), m.values());
}

SmoothFn apply_to_smooth(const SmoothFn& f, const DomainTransform& t) {
  if (f.dim != t.dim()) fail(ErrorKind::dimension_mismatch, "transform and function dimensions differ");
  SmoothFn g;
  g.dim = f.dim;
  g.label = f.label;
  g.value = [f, t](std::span<const double> x) { return f.value(t.forward(x)); };
  if (f.hessian) {
    g.hessian = [f, t](std::span<const double> x) {
      const Matrix& u = t.rotation_part();
      return (u.transpose() * f.hessian(t.forward(x)) * u) * (t.scale() * t.scale());
    };
  }
  return g;
}

TransformedBox transform_box(const BoxDomain& box, const DomainTransform& t) {
  const int d = box.dim();
  if (d != t.dim()) fail(ErrorKind::dimension_mismatch, "transform and box dimensions differ");
  std::vector<double> lo(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
  std::vector<double> corner(static_cast<std::size_t>(d));
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    for (int a = 0; a < d; ++a) corner[static_cast<std::size_t>(a)] = (mask >> a) & 1u ? box.upper(a) : box.lower(a);
    const auto x = t.inverse(corner);
    for (int a = 0; a < d; ++a) {
      lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
      hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
    }
  }
  bool exact = true;
  const Matrix& u = t.rotation_part();
  for (int i = 0; i < d; ++i) {
    int nonzero = 0;
    for (int j = 0; j < d; ++j) nonzero += std::fabs(u(i, j)) > 1e-15;
    exact = exact && nonzero == 1;
  }
  return {BoxDomain(lo, hi), exact};
}

Matrix rotation_in_plane(int dim, int i, int j, double radians) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) fail(ErrorKind::invalid_input, "bad rotation plane");
  Matrix r = Matrix::identity(dim);
  const double c = std::cos(radians), s = std::sin(radians);
  r(i, i) = c;
  r(j, j) = c;
  r(i, j) = -s;
  r(j, i) = s;
  return r;
}

Matrix random_orthonormal(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  std::vector<std::vector<double>> q;
  while (static_cast<int>(q.size()) < dim) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) x = n01(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : q) {
        double dot = 0;
        for (int k = 0; k < dim; ++k) dot += v[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)];
        for (int k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] -= dot * b[static_cast<std::size_t>(k)];
      }
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n < 1e-6) continue;
    for (double& x : v) x /= n;
    q.push_back(v);
  }
  Matrix u(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) u(i, j) = q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return u;
}

}  // namespace htv
