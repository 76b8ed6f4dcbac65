#include "htv/cpwl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "htv/error.hpp"
#include "htv/geometry.hpp"
#include "htv/summation.hpp"

namespace htv {

namespace {

using std::size_t;

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), size_t{0}); }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  size_t components() {
    size_t c = 0;
    for (size_t i = 0; i < parent.size(); ++i) c += find(i) == i;
    return c;
  }
};

double norm2(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

constexpr double kInsideTol = 1e-12;

}  // namespace

SimplicialCpwl::SimplicialCpwl(int dim, std::vector<double> coords, std::vector<int> simplices,
                               std::vector<double> values)
    : dim_(dim), coords_(std::move(coords)), simplices_(std::move(simplices)), values_(std::move(values)) {
  if (dim_ < 1) fail(ErrorKind::invalid_mesh, "mesh dimension must be >= 1");
  const size_t d = static_cast<size_t>(dim_);
  if (coords_.size() % d != 0) fail(ErrorKind::invalid_mesh, "vertex coordinates are not a multiple of dim");
  if (coords_.size() / d != values_.size())
    fail(ErrorKind::invalid_mesh, "mesh has " + std::to_string(coords_.size() / d) + " vertices but " +
                                      std::to_string(values_.size()) + " values");
  if (simplices_.empty() || simplices_.size() % (d + 1) != 0)
    fail(ErrorKind::invalid_mesh, "simplex list must be a non-empty multiple of dim + 1 indices");
  for (double c : coords_)
    if (!std::isfinite(c)) fail(ErrorKind::invalid_mesh, "non-finite vertex coordinate");
  for (size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i])) fail(ErrorKind::invalid_mesh, "non-finite value at vertex " + std::to_string(i));

  const size_t ns = simplex_count();
  for (size_t s = 0; s < ns; ++s) {
    auto sv = simplex(s);
    for (size_t j = 0; j <= d; ++j) {
      if (sv[j] < 0 || static_cast<size_t>(sv[j]) >= vertex_count())
        fail(ErrorKind::invalid_mesh, "simplex " + std::to_string(s) + " references missing vertex " + std::to_string(sv[j]));
      for (size_t k = 0; k < j; ++k)
        if (sv[j] == sv[k]) fail(ErrorKind::degenerate_simplex, "simplex " + std::to_string(s) + " repeats a vertex");
    }
  }

  // affine pieces and barycentric inverses
  pieces_.resize(ns);
  inverse_edges_.resize(ns * d * d);
  std::vector<double> e(d * d), inv;
  for (size_t s = 0; s < ns; ++s) {
    auto sv = simplex(s);
    auto v0 = vertex(static_cast<size_t>(sv[0]));
    double row_norms = 1.0;
    for (size_t i = 0; i < d; ++i) {
      auto vi = vertex(static_cast<size_t>(sv[i + 1]));
      double n2 = 0;
      for (size_t c = 0; c < d; ++c) {
        e[i * d + c] = vi[c] - v0[c];
        n2 += e[i * d + c] * e[i * d + c];
      }
      row_norms *= std::sqrt(n2);
    }
    const double det = geom::determinant(e, dim_);
    if (!(std::fabs(det) > 1e-12 * row_norms) || !geom::invert(e, dim_, inv))
      fail(ErrorKind::degenerate_simplex, "simplex " + std::to_string(s) + " has zero volume");
    std::copy(inv.begin(), inv.end(), inverse_edges_.begin() + static_cast<std::ptrdiff_t>(s * d * d));

    AffinePiece& piece = pieces_[s];
    piece.simplex = s;
    piece.gradient.assign(d, 0.0);
    const double f0 = values_[static_cast<size_t>(sv[0])];
    if (d == 1) {
      piece.gradient[0] = (values_[static_cast<size_t>(sv[1])] - f0) / e[0];
    } else {
      // E a = f_i - f_0  ->  a = E^{-1} (f_i - f_0)
      for (size_t r = 0; r < d; ++r)
        for (size_t i = 0; i < d; ++i) piece.gradient[r] += inv[r * d + i] * (values_[static_cast<size_t>(sv[i + 1])] - f0);
    }
    double b = f0;
    for (size_t c = 0; c < d; ++c) b -= piece.gradient[c] * v0[c];
    piece.offset = b;

    double scale = std::fabs(b);
    for (size_t j = 0; j <= d; ++j) {
      auto vj = vertex(static_cast<size_t>(sv[j]));
      double pred = b, mag = std::fabs(b);
      for (size_t c = 0; c < d; ++c) pred += piece.gradient[c] * vj[c], mag += std::fabs(piece.gradient[c] * vj[c]);
      scale = std::max({scale, mag, std::fabs(values_[static_cast<size_t>(sv[j])])});
      if (std::fabs(pred - values_[static_cast<size_t>(sv[j])]) > 1e-10 * std::max(scale, 1e-300))
        fail(ErrorKind::degenerate_simplex, "affine fit of simplex " + std::to_string(s) + " is ill-conditioned");
    }
  }

  // faces: sort (sorted vertex tuple, simplex, opposite local index)
  const size_t nf = ns * (d + 1);
  std::vector<int> keys(nf * d);
  for (size_t s = 0; s < ns; ++s) {
    auto sv = simplex(s);
    for (size_t j = 0; j <= d; ++j) {
      int* k = &keys[(s * (d + 1) + j) * d];
      size_t w = 0;
      for (size_t i = 0; i <= d; ++i)
        if (i != j) k[w++] = sv[i];
      std::sort(k, k + d);
    }
  }
  std::vector<size_t> order(nf);
  std::iota(order.begin(), order.end(), size_t{0});
  auto key_less = [&](size_t a, size_t b) {
    return std::lexicographical_compare(&keys[a * d], &keys[a * d] + d, &keys[b * d], &keys[b * d] + d);
  };
  auto key_eq = [&](size_t a, size_t b) { return std::equal(&keys[a * d], &keys[a * d] + d, &keys[b * d]); };
  std::stable_sort(order.begin(), order.end(), key_less);

  UnionFind uf(ns);
  for (size_t i = 0; i < nf;) {
    size_t j = i + 1;
    while (j < nf && key_eq(order[i], order[j])) ++j;
    if (j - i >= 3)
      fail(ErrorKind::invalid_mesh, "face shared by " + std::to_string(j - i) + " simplices (simplex " +
                                        std::to_string(order[i] / (d + 1)) + ")");
    if (j - i == 2) {
      size_t fa = order[i], fb = order[i + 1];
      size_t sa = fa / (d + 1), sb = fb / (d + 1);
      if (sa == sb) fail(ErrorKind::invalid_mesh, "simplex " + std::to_string(sa) + " repeats a face");
      if (sb < sa) std::swap(sa, sb), std::swap(fa, fb);
      Facet f;
      f.first = sa;
      f.second = sb;
      f.vertices.assign(&keys[fa * d], &keys[fa * d] + d);
      std::vector<geom::Point> pts;
      for (int v : f.vertices) pts.emplace_back(vertex(static_cast<size_t>(v)).begin(), vertex(static_cast<size_t>(v)).end());
      f.measure = geom::simplex_volume(pts);
      // outward normal of `first`: minus the gradient of the opposite barycentric coordinate
      const size_t opp = fa % (d + 1);
      const double* inv_s = &inverse_edges_[sa * d * d];
      std::vector<double> g(d, 0.0);
      for (size_t r = 0; r < d; ++r) {
        if (opp == 0) {
          for (size_t i = 0; i < d; ++i) g[r] -= inv_s[r * d + i];
        } else {
          g[r] = inv_s[r * d + (opp - 1)];
        }
      }
      const double gn = norm2(g);
      f.normal.resize(d);
      for (size_t r = 0; r < d; ++r) f.normal[r] = -g[r] / gn;
      auto p0 = vertex(static_cast<size_t>(f.vertices[0]));
      f.offset = 0;
      for (size_t r = 0; r < d; ++r) f.offset -= f.normal[r] * p0[r];
      // the other simplex must lie across the face
      auto ob = vertex(static_cast<size_t>(simplex(sb)[fb % (d + 1)]));
      double side = f.offset;
      for (size_t r = 0; r < d; ++r) side += f.normal[r] * ob[r];
      if (!(side > 0))
        fail(ErrorKind::invalid_mesh, "simplices " + std::to_string(sa) + " and " + std::to_string(sb) + " overlap");
      uf.unite(sa, sb);
      facets_.push_back(std::move(f));
    }
    i = j;
  }
  std::sort(facets_.begin(), facets_.end(),
            [](const Facet& a, const Facet& b) { return std::tie(a.first, a.second) < std::tie(b.first, b.second); });
  if (uf.components() != 1)
    fail(ErrorKind::invalid_mesh, "mesh is not facet-connected (" + std::to_string(uf.components()) + " components)");

  build_locator();
}

std::span<const double> SimplicialCpwl::vertex(size_t i) const {
  return {coords_.data() + i * static_cast<size_t>(dim_), static_cast<size_t>(dim_)};
}

std::span<const int> SimplicialCpwl::simplex(size_t s) const {
  return {simplices_.data() + s * static_cast<size_t>(dim_ + 1), static_cast<size_t>(dim_ + 1)};
}

BoxDomain SimplicialCpwl::bounding_box() const {
  const size_t d = static_cast<size_t>(dim_);
  std::vector<double> lo(coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(d)), hi = lo;
  for (size_t i = 0; i < vertex_count(); ++i)
    for (size_t c = 0; c < d; ++c) lo[c] = std::min(lo[c], coords_[i * d + c]), hi[c] = std::max(hi[c], coords_[i * d + c]);
  return BoxDomain(lo, hi);
}

void SimplicialCpwl::barycentric(size_t s, std::span<const double> x, std::vector<double>& lambda) const {
  const size_t d = static_cast<size_t>(dim_);
  lambda.assign(d + 1, 0.0);
  auto v0 = vertex(static_cast<size_t>(simplex(s)[0]));
  const double* inv = &inverse_edges_[s * d * d];
  double rest = 1.0;
  for (size_t i = 0; i < d; ++i) {
    double l = 0;
    for (size_t r = 0; r < d; ++r) l += (x[r] - v0[r]) * inv[r * d + i];
    lambda[i + 1] = l;
    rest -= l;
  }
  lambda[0] = rest;
}

void SimplicialCpwl::build_locator() {
  const size_t d = static_cast<size_t>(dim_);
  const BoxDomain box = bounding_box();
  const size_t ns = simplex_count();
  const int per_axis = std::clamp(static_cast<int>(std::ceil(std::pow(static_cast<double>(ns), 1.0 / dim_))), 1, 4096);
  grid_lo_ = box.lower();
  grid_n_.assign(d, per_axis);
  grid_cell_.resize(d);
  for (size_t c = 0; c < d; ++c) grid_cell_[c] = box.width(static_cast<int>(c)) / per_axis;

  auto bucket_range = [&](size_t s, std::vector<int>& lo, std::vector<int>& hi) {
    lo.assign(d, per_axis);
    hi.assign(d, -1);
    for (int v : simplex(s)) {
      auto p = vertex(static_cast<size_t>(v));
      for (size_t c = 0; c < d; ++c) {
        const int b = std::clamp(static_cast<int>(std::floor((p[c] - grid_lo_[c]) / grid_cell_[c])), 0, per_axis - 1);
        lo[c] = std::min(lo[c], b);
        hi[c] = std::max(hi[c], b);
      }
    }
  };
  size_t total = 1;
  for (size_t c = 0; c < d; ++c) total *= static_cast<size_t>(per_axis);
  std::vector<size_t> counts(total + 1, 0);
  std::vector<int> lo, hi, idx(d);
  for (int pass = 0; pass < 2; ++pass) {
    if (pass == 1) {
      bucket_start_.assign(total + 1, 0);
      for (size_t b = 0; b < total; ++b) bucket_start_[b + 1] = bucket_start_[b] + counts[b];
      bucket_items_.resize(bucket_start_[total]);
      std::fill(counts.begin(), counts.end(), 0);
    }
    for (size_t s = 0; s < ns; ++s) {
      bucket_range(s, lo, hi);
      idx = lo;
      while (true) {
        size_t flat = 0;
        for (size_t c = 0; c < d; ++c) flat = flat * static_cast<size_t>(per_axis) + static_cast<size_t>(idx[c]);
        if (pass == 0)
          ++counts[flat];
        else
          bucket_items_[bucket_start_[flat] + counts[flat]++] = s;
        size_t c = d;
        while (c-- > 0) {
          if (++idx[c] <= hi[c]) break;
          idx[c] = lo[c];
        }
        if (c == static_cast<size_t>(-1)) break;
      }
    }
  }
}

template <class Visit>
void SimplicialCpwl::visit_candidates(std::span<const double> x, int ring, Visit&& visit) const {
  const size_t d = static_cast<size_t>(dim_);
  std::vector<int> lo(d), hi(d), idx(d);
  for (size_t c = 0; c < d; ++c) {
    const int b = std::clamp(static_cast<int>(std::floor((x[c] - grid_lo_[c]) / grid_cell_[c])), 0, grid_n_[c] - 1);
    lo[c] = std::max(0, b - ring);
    hi[c] = std::min(grid_n_[c] - 1, b + ring);
  }
  idx = lo;
  while (true) {
    size_t flat = 0;
    for (size_t c = 0; c < d; ++c) flat = flat * static_cast<size_t>(grid_n_[c]) + static_cast<size_t>(idx[c]);
    for (size_t k = bucket_start_[flat]; k < bucket_start_[flat + 1]; ++k) visit(bucket_items_[k]);
    size_t c = d;
    while (c-- > 0) {
      if (++idx[c] <= hi[c]) break;
      idx[c] = lo[c];
    }
    if (c == static_cast<size_t>(-1)) break;
  }
}

std::optional<size_t> SimplicialCpwl::locate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) fail(ErrorKind::dimension_mismatch, "point dimension differs from mesh");
  const size_t d = static_cast<size_t>(dim_);
  for (size_t c = 0; c < d; ++c) {
    const double slack = kInsideTol * std::max(1.0, grid_cell_[c] * grid_n_[c]);
    if (x[c] < grid_lo_[c] - slack || x[c] > grid_lo_[c] + grid_cell_[c] * grid_n_[c] + slack) return std::nullopt;
  }
  std::optional<size_t> best;
  std::vector<double> lambda;
  visit_candidates(x, 0, [&](size_t s) {
    if (best && *best <= s) return;
    barycentric(s, x, lambda);
    if (*std::min_element(lambda.begin(), lambda.end()) >= -kInsideTol) best = s;
  });
  return best;
}

double SimplicialCpwl::evaluate(std::span<const double> x) const {
  const auto s = locate(x);
  if (!s) fail(ErrorKind::out_of_domain, "point lies outside the mesh");
  std::vector<double> lambda;
  barycentric(*s, x, lambda);
  double v = 0;
  auto sv = simplex(*s);
  for (size_t j = 0; j < lambda.size(); ++j) v += lambda[j] * values_[static_cast<size_t>(sv[j])];
  return v;
}

double SimplicialCpwl::evaluate_extended(std::span<const double> x) const {
  if (const auto s = locate(x)) {
    std::vector<double> lambda;
    barycentric(*s, x, lambda);
    double v = 0;
    auto sv = simplex(*s);
    for (size_t j = 0; j < lambda.size(); ++j) v += lambda[j] * values_[static_cast<size_t>(sv[j])];
    return v;
  }
  std::optional<size_t> best;
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<double> lambda;
  for (int ring = 1; !best; ring *= 2) {
    visit_candidates(x, ring, [&](size_t s) {
      barycentric(s, x, lambda);
      const double score = *std::min_element(lambda.begin(), lambda.end());
      if (score > best_score || (score == best_score && s < *best)) best_score = score, best = s;
    });
    if (ring > 1 << 20) break;
  }
  const AffinePiece& p = pieces_[*best];
  double v = p.offset;
  for (size_t c = 0; c < x.size(); ++c) v += p.gradient[c] * x[c];
  return v;
}

std::vector<AffinePiece> fit_affine_pieces(const SimplicialCpwl& m) { return m.pieces(); }

std::vector<double> gradient_at(const SimplicialCpwl& m, std::span<const double> x) {
  const auto s = m.locate(x);
  if (!s) fail(ErrorKind::out_of_domain, "point lies outside the mesh");
  return m.pieces()[*s].gradient;
}

std::vector<Facet> adjacency(const SimplicialCpwl& m) { return m.facets(); }

double htv(const SimplicialCpwl& m, SchattenOrder) {
  ExactSum sum;
  std::vector<double> jump(static_cast<size_t>(m.dim()));
  for (const Facet& f : m.facets()) {
    const auto& a = m.pieces()[f.first].gradient;
    const auto& b = m.pieces()[f.second].gradient;
    for (size_t c = 0; c < jump.size(); ++c) jump[c] = b[c] - a[c];
    sum.add(norm2(jump) * f.measure);
  }
  return sum.value();
}

size_t region_count(const SimplicialCpwl& m, const RegionOptions& options) {
  double grad_scale = 0, offset_scale = 0, value_scale = 0;
  for (const auto& p : m.pieces()) {
    grad_scale = std::max(grad_scale, norm2(p.gradient));
    offset_scale = std::max(offset_scale, std::fabs(p.offset));
  }
  for (double v : m.values()) value_scale = std::max(value_scale, std::fabs(v));
  const BoxDomain box = m.bounding_box();
  double diam = 0;
  for (int c = 0; c < box.dim(); ++c) diam += box.width(c) * box.width(c);
  diam = std::sqrt(diam);
  const double rel = options.relative_tolerance;
  const double tol_a = rel * std::max({grad_scale, value_scale / diam, 1e-300});
  const double tol_b = rel * std::max({offset_scale, value_scale, 1e-300});

  UnionFind uf(m.simplex_count());
  std::vector<double> jump(static_cast<size_t>(m.dim()));
  for (const Facet& f : m.facets()) {
    const auto& a = m.pieces()[f.first];
    const auto& b = m.pieces()[f.second];
    for (size_t c = 0; c < jump.size(); ++c) jump[c] = b.gradient[c] - a.gradient[c];
    if (norm2(jump) <= tol_a && std::fabs(b.offset - a.offset) <= tol_b) uf.unite(f.first, f.second);
  }
  return uf.components();
}

double tv2_1d(std::span<const double> breakpoints, std::span<const double> slopes) {
  for (size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i - 1] < breakpoints[i]))
      fail(ErrorKind::unsorted_breakpoints, "breakpoints must be strictly increasing (index " + std::to_string(i) + ")");
  if (slopes.size() != breakpoints.size() + 1)
    fail(ErrorKind::invalid_input, "need one slope more than breakpoints");
  ExactSum sum;
  for (size_t i = 1; i < slopes.size(); ++i) sum.add(std::fabs(slopes[i] - slopes[i - 1]));
  return sum.value();
}

double LinearSpline::operator()(double x) const {
  const size_t i = static_cast<size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin());
  return slopes[i] * x + intercepts[i];
}

LinearSpline extract_spline_1d(const SimplicialCpwl& m) {
  if (m.dim() != 1) fail(ErrorKind::dimension_mismatch, "spline extraction needs a 1D mesh");
  const size_t ns = m.simplex_count();
  std::vector<size_t> order(ns);
  std::iota(order.begin(), order.end(), size_t{0});
  auto left = [&](size_t s) {
    return std::min(m.vertex(static_cast<size_t>(m.simplex(s)[0]))[0], m.vertex(static_cast<size_t>(m.simplex(s)[1]))[0]);
  };
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return left(a) < left(b); });
  LinearSpline out;
  for (size_t k = 0; k < ns; ++k) {
    const AffinePiece& p = m.pieces()[order[k]];
    if (k > 0) out.breakpoints.push_back(left(order[k]));
    out.slopes.push_back(p.gradient[0]);
    out.intercepts.push_back(p.offset);
  }
  return out;
}

SimplicialCpwl spline_to_mesh(const LinearSpline& s, double lo, double hi) {
  if (s.slopes.size() != s.breakpoints.size() + 1 || s.intercepts.size() != s.slopes.size())
    fail(ErrorKind::invalid_input, "spline needs one slope and intercept per piece");
  std::vector<double> xs{lo};
  for (double b : s.breakpoints) {
    if (!(b > xs.back()) || !(b < hi))
      fail(ErrorKind::invalid_input, "breakpoints must be increasing and strictly inside the interval");
    xs.push_back(b);
  }
  xs.push_back(hi);
  std::vector<double> values;
  std::vector<int> simplices;
  for (size_t i = 0; i < xs.size(); ++i) {
    values.push_back(s(xs[i]));
    if (i + 1 < xs.size()) simplices.insert(simplices.end(), {static_cast<int>(i), static_cast<int>(i + 1)});
  }
  return SimplicialCpwl(1, xs, simplices, values);
}

SimplicialCpwl barycentric_refinement(const SimplicialCpwl& m) {
  const size_t d = static_cast<size_t>(m.dim());
  std::vector<double> coords = m.coords();
  std::vector<double> values = m.values();
  std::vector<int> simplices;
  for (size_t s = 0; s < m.simplex_count(); ++s) {
    auto sv = m.simplex(s);
    const int center = static_cast<int>(values.size());
    double v = 0;
    std::vector<double> c(d, 0.0);
    for (int i : sv) {
      v += m.values()[static_cast<size_t>(i)];
      auto p = m.vertex(static_cast<size_t>(i));
      for (size_t k = 0; k < d; ++k) c[k] += p[k];
    }
    for (size_t k = 0; k < d; ++k) coords.push_back(c[k] / static_cast<double>(d + 1));
    values.push_back(v / static_cast<double>(d + 1));
    for (size_t j = 0; j <= d; ++j) {
      for (size_t i = 0; i <= d; ++i) simplices.push_back(i == j ? center : sv[i]);
    }
  }
  return SimplicialCpwl(m.dim(), std::move(coords), std::move(simplices), std::move(values));
}

}  // namespace htv
