#include "htv/fence.hpp"

#include <algorithm>
#include <cmath>

#include "htv/error.hpp"
#include "htv/summation.hpp"
#include "htv/geometry.hpp"

namespace htv {

namespace {

double extent_of(const std::vector<std::vector<double>>& pts) {
  double e = 0;
  for (const auto& p : pts)
    for (std::size_t c = 0; c < p.size(); ++c) e = std::max(e, std::fabs(p[c] - pts[0][c]));
  return e;
}

}  // namespace

double leb_polytope(const std::vector<std::vector<double>>& vertices, int d1) {
  if (d1 < 0) fail(ErrorKind::invalid_input, "base dimension must be >= 0");
  if (vertices.empty()) fail(ErrorKind::invalid_input, "polytope has no vertices");
  for (const auto& v : vertices) {
    if (static_cast<int>(v.size()) != d1)
      fail(ErrorKind::dimension_mismatch, "polytope vertex has " + std::to_string(v.size()) + " coordinates, expected " +
                                              std::to_string(d1));
    for (double x : v)
      if (!std::isfinite(x)) fail(ErrorKind::invalid_input, "polytope vertex is not finite");
  }
  if (d1 == 0) return 1.0;
  if (static_cast<int>(vertices.size()) < d1 + 1) return 0.0;
  double vol = 0;
  if (static_cast<int>(vertices.size()) == d1 + 1) {
    vol = geom::simplex_volume(vertices);
  } else if (d1 <= 3) {
    vol = geom::hull_volume(vertices, d1);
  } else {
    fail(ErrorKind::unsupported, "hull volume of more than d1 + 1 points needs d1 <= 3");
  }
  const double e = extent_of(vertices);
  return vol > 1e-14 * std::pow(e, d1) ? vol : 0.0;
}

DiracFence::DiracFence(Matrix weight, std::vector<std::vector<double>> base, std::vector<double> linear,
                       std::vector<double> offset, std::vector<int> graph_axes)
    : weight_(std::move(weight)),
      base_(std::move(base)),
      linear_(std::move(linear)),
      offset_(std::move(offset)),
      graph_axes_(std::move(graph_axes)) {
  const int d = weight_.dim();
  if (d < 1) fail(ErrorKind::invalid_input, "fence weight is empty");
  if (!weight_.all_finite()) fail(ErrorKind::invalid_input, "fence weight is not finite");
  if (weight_.is_zero()) fail(ErrorKind::invalid_input, "fence weight must be nonzero");
  if (base_.empty()) fail(ErrorKind::degenerate_base, "fence base has no vertices");
  base_dim_ = static_cast<int>(base_.front().size());
  if (base_dim_ >= d) fail(ErrorKind::dimension_mismatch, "fence base dimension must be below the ambient dimension");
  const int k = d - base_dim_;
  if (static_cast<int>(linear_.size()) != k * base_dim_ || static_cast<int>(offset_.size()) != k)
    fail(ErrorKind::dimension_mismatch, "fence map has the wrong shape");
  for (double x : linear_)
    if (!std::isfinite(x)) fail(ErrorKind::invalid_input, "fence map is not finite");
  for (double x : offset_)
    if (!std::isfinite(x)) fail(ErrorKind::invalid_input, "fence map is not finite");
  if (graph_axes_.empty())
    for (int i = base_dim_; i < d; ++i) graph_axes_.push_back(i);
  if (static_cast<int>(graph_axes_.size()) != k) fail(ErrorKind::dimension_mismatch, "fence needs d - d1 graph axes");
  for (std::size_t i = 0; i < graph_axes_.size(); ++i)
    if (graph_axes_[i] < 0 || graph_axes_[i] >= d || (i > 0 && graph_axes_[i] <= graph_axes_[i - 1]))
      fail(ErrorKind::invalid_input, "graph axes must be increasing and inside the ambient dimension");
  for (int i = 0; i < d; ++i)
    if (!std::binary_search(graph_axes_.begin(), graph_axes_.end(), i)) base_axes_.push_back(i);
  base_measure_ = leb_polytope(base_, base_dim_);
  if (!(base_measure_ > 0)) fail(ErrorKind::degenerate_base, "fence base has zero volume");
}

std::vector<double> DiracFence::embed(std::span<const double> x1) const {
  if (static_cast<int>(x1.size()) != base_dim_) fail(ErrorKind::dimension_mismatch, "base point has wrong dimension");
  std::vector<double> x(static_cast<std::size_t>(dim()));
  for (int i = 0; i < base_dim_; ++i) x[static_cast<std::size_t>(base_axes_[static_cast<std::size_t>(i)])] = x1[static_cast<std::size_t>(i)];
  for (std::size_t r = 0; r < graph_axes_.size(); ++r) {
    double v = offset_[r];
    for (int i = 0; i < base_dim_; ++i) v += linear_[r * static_cast<std::size_t>(base_dim_) + static_cast<std::size_t>(i)] * x1[static_cast<std::size_t>(i)];
    x[static_cast<std::size_t>(graph_axes_[r])] = v;
  }
  return x;
}

DiracFence DiracFence::scaled(double alpha) const {
  return DiracFence(weight_ * alpha, base_, linear_, offset_, graph_axes_);
}

double fence_norm(const DiracFence& f, SchattenOrder p) { return schatten_norm(f.weight(), p) * f.base_measure(); }

bool fences_overlap(const DiracFence& a, const DiracFence& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::dimension_mismatch, "fences live in different dimensions");
  if (a.base_dim() != b.base_dim()) return false;
  const int d = a.dim();
  const int d1 = a.base_dim();
  const std::vector<double> zero(static_cast<std::size_t>(d1), 0.0);
  const auto oa = a.embed(zero);
  const auto ob = b.embed(zero);

  // orthonormal basis of a's support directions
  std::vector<std::vector<double>> basis;
  double scale = 1.0;
  for (double x : oa) scale = std::max(scale, std::fabs(x));
  for (double x : ob) scale = std::max(scale, std::fabs(x));
  for (const auto& v : a.base())
    for (double x : v) scale = std::max(scale, std::fabs(x));
  auto residual = [&](std::vector<double> v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        double dot = 0;
        for (int c = 0; c < d; ++c) dot += v[static_cast<std::size_t>(c)] * q[static_cast<std::size_t>(c)];
        for (int c = 0; c < d; ++c) v[static_cast<std::size_t>(c)] -= dot * q[static_cast<std::size_t>(c)];
      }
    return v;
  };
  auto norm = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  for (int k = 0; k < d1; ++k) {
    std::vector<double> e(static_cast<std::size_t>(d1), 0.0);
    e[static_cast<std::size_t>(k)] = 1.0;
    auto dir = a.embed(e);
    for (int c = 0; c < d; ++c) dir[static_cast<std::size_t>(c)] -= oa[static_cast<std::size_t>(c)];
    auto r = residual(dir);
    const double n = norm(r);
    for (double& x : r) x /= n;
    basis.push_back(r);
  }
  // is b's support the same affine subspace?
  for (int k = 0; k < d1; ++k) {
    std::vector<double> e(static_cast<std::size_t>(d1), 0.0);
    e[static_cast<std::size_t>(k)] = 1.0;
    auto dir = b.embed(e);
    for (int c = 0; c < d; ++c) dir[static_cast<std::size_t>(c)] -= ob[static_cast<std::size_t>(c)];
    if (norm(residual(dir)) > 1e-10 * norm(dir)) return false;
  }
  std::vector<double> shift(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) shift[static_cast<std::size_t>(c)] = ob[static_cast<std::size_t>(c)] - oa[static_cast<std::size_t>(c)];
  if (norm(residual(shift)) > 1e-10 * scale) return false;
  if (d1 == 0) return true;

  auto coordinates = [&](const DiracFence& f) {
    std::vector<std::vector<double>> out;
    for (const auto& v : f.base()) {
      auto x = f.embed(v);
      std::vector<double> y(static_cast<std::size_t>(d1), 0.0);
      for (int k = 0; k < d1; ++k)
        for (int c = 0; c < d; ++c)
          y[static_cast<std::size_t>(k)] += (x[static_cast<std::size_t>(c)] - oa[static_cast<std::size_t>(c)]) * basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
      out.push_back(y);
    }
    return out;
  };
  const auto ca = coordinates(a);
  const auto cb = coordinates(b);
  if (d1 == 1) {
    auto range = [](const std::vector<std::vector<double>>& pts) {
      double lo = pts[0][0], hi = pts[0][0];
      for (const auto& p : pts) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
      return std::pair{lo, hi};
    };
    const auto [alo, ahi] = range(ca);
    const auto [blo, bhi] = range(cb);
    const double overlap = std::min(ahi, bhi) - std::max(alo, blo);
    return overlap > 1e-12 * std::min(ahi - alo, bhi - blo);
  }
  if (d1 == 2) {
    auto hull = [](const std::vector<std::vector<double>>& pts) {
      std::vector<geom::Point2> p;
      for (const auto& q : pts) p.push_back({q[0], q[1]});
      return geom::convex_hull_2d(p);
    };
    const auto ha = hull(ca);
    const auto hb = hull(cb);
    const double area = geom::convex_intersection_area(ha, hb);
    return area > 1e-12 * std::min(geom::polygon_area(ha), geom::polygon_area(hb));
  }
  fail(ErrorKind::unsupported, "overlap test for coplanar fences needs base dimension <= 2");
}

double fences_total_norm(std::span<const DiracFence> fences, SchattenOrder p) {
  for (std::size_t i = 0; i < fences.size(); ++i)
    for (std::size_t j = i + 1; j < fences.size(); ++j)
      if (fences_overlap(fences[i], fences[j]))
        fail(ErrorKind::non_additive,
             "fences " + std::to_string(i) + " and " + std::to_string(j) + " overlap on a set of positive measure");
  ExactSum s;
  for (const DiracFence& f : fences) s.add(fence_norm(f, p));
  return s.value();
}

std::vector<DiracFence> hessian_fences(const SimplicialCpwl& m) {
  const int d = m.dim();
  double grad_scale = 0;
  for (const auto& piece : m.pieces()) {
    double n = 0;
    for (double x : piece.gradient) n += x * x;
    grad_scale = std::max(grad_scale, std::sqrt(n));
  }
  std::vector<DiracFence> out;
  std::vector<double> jump(static_cast<std::size_t>(d));
  for (const Facet& f : m.facets()) {
    const auto& ga = m.pieces()[f.first].gradient;
    const auto& gb = m.pieces()[f.second].gradient;
    double jn = 0, c = 0;
    for (int i = 0; i < d; ++i) {
      jump[static_cast<std::size_t>(i)] = gb[static_cast<std::size_t>(i)] - ga[static_cast<std::size_t>(i)];
      jn += jump[static_cast<std::size_t>(i)] * jump[static_cast<std::size_t>(i)];
      c += jump[static_cast<std::size_t>(i)] * f.normal[static_cast<std::size_t>(i)];
    }
    jn = std::sqrt(jn);
    if (jn <= 1e-12 * grad_scale) continue;
    double r = 0;
    for (int i = 0; i < d; ++i) {
      const double t = jump[static_cast<std::size_t>(i)] - c * f.normal[static_cast<std::size_t>(i)];
      r += t * t;
    }
    if (std::sqrt(r) > 1e-8 * jn + 1e-10 * grad_scale)
      fail(ErrorKind::continuity_violation, "gradient jump across facet (" + std::to_string(f.first) + ", " +
                                                std::to_string(f.second) + ") is not normal to it");
    // graph over the axis where the normal is largest
    int e = 0;
    for (int i = 1; i < d; ++i)
      if (std::fabs(f.normal[static_cast<std::size_t>(i)]) > std::fabs(f.normal[static_cast<std::size_t>(e)])) e = i;
    const double ue = f.normal[static_cast<std::size_t>(e)];
    Matrix w = Matrix::outer(f.normal, f.normal) * (c / std::fabs(ue));
    std::vector<std::vector<double>> base;
    for (int v : f.vertices) {
      auto p = m.vertex(static_cast<std::size_t>(v));
      std::vector<double> q;
      for (int i = 0; i < d; ++i)
        if (i != e) q.push_back(p[static_cast<std::size_t>(i)]);
      base.push_back(q);
    }
    std::vector<double> linear;
    for (int i = 0; i < d; ++i)
      if (i != e) linear.push_back(-f.normal[static_cast<std::size_t>(i)] / ue);
    out.emplace_back(std::move(w), std::move(base), std::move(linear), std::vector<double>{-f.offset / ue},
                     std::vector<int>{e});
  }
  return out;
}

}  // namespace htv
