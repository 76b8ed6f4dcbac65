#include "htv/delaunay.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>

#include "htv/error.hpp"

namespace htv {

namespace {

using Rational = boost::multiprecision::cpp_rational;

int sign_of(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

constexpr double kFilter = 1e-10;

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nb;  // nb[i] is across the edge opposite v[i]
};

class Triangulator {
 public:
  explicit Triangulator(std::span<const Point2> pts) : p_(pts) {}

  std::vector<std::array<int, 3>> run();

 private:
  int orient(int a, int b, int c) const { return orient2d(p_[static_cast<std::size_t>(a)], p_[static_cast<std::size_t>(b)], p_[static_cast<std::size_t>(c)]); }
  bool should_flip(int t, int i) const;
  // Flips the edge opposite tris_[t].v[i]; afterwards both triangles start
  // with that vertex.
  void flip(int t, int i);
  void legalize(int t, int i);
  int add(std::array<int, 3> v, std::array<int, 3> nb) {
    tris_.push_back({v, nb});
    return static_cast<int>(tris_.size()) - 1;
  }
  int local(int t, int vertex) const {
    const auto& v = tris_[static_cast<std::size_t>(t)].v;
    return static_cast<int>(std::find(v.begin(), v.end(), vertex) - v.begin());
  }
  void replace_neighbor(int t, int from, int to) {
    if (t < 0) return;
    for (int& n : tris_[static_cast<std::size_t>(t)].nb)
      if (n == from) n = to;
  }

  std::span<const Point2> p_;
  std::vector<Tri> tris_;
  std::vector<int> next_, prev_, hull_tri_;
  std::vector<std::pair<int, int>> stack_;
};

bool Triangulator::should_flip(int t, int i) const {
  const Tri& T = tris_[static_cast<std::size_t>(t)];
  const int u = T.nb[static_cast<std::size_t>(i)];
  if (u < 0) return false;
  const int a = T.v[static_cast<std::size_t>((i + 1) % 3)];
  const int b = T.v[static_cast<std::size_t>((i + 2) % 3)];
  const Tri& U = tris_[static_cast<std::size_t>(u)];
  int q = -1;
  for (int x : U.v)
    if (x != a && x != b) q = x;
  return incircle(p_[static_cast<std::size_t>(T.v[0])], p_[static_cast<std::size_t>(T.v[1])], p_[static_cast<std::size_t>(T.v[2])],
                  p_[static_cast<std::size_t>(q)]) > 0;
}

void Triangulator::flip(int t, int i) {
  Tri T = tris_[static_cast<std::size_t>(t)];
  const int u = T.nb[static_cast<std::size_t>(i)];
  Tri U = tris_[static_cast<std::size_t>(u)];
  const int p = T.v[static_cast<std::size_t>(i)];
  const int a = T.v[static_cast<std::size_t>((i + 1) % 3)];
  const int b = T.v[static_cast<std::size_t>((i + 2) % 3)];
  const int n_bp = T.nb[static_cast<std::size_t>((i + 1) % 3)];  // opposite a
  const int n_pa = T.nb[static_cast<std::size_t>((i + 2) % 3)];  // opposite b
  const int jq = [&] {
    for (int k = 0; k < 3; ++k)
      if (U.v[static_cast<std::size_t>(k)] != a && U.v[static_cast<std::size_t>(k)] != b) return k;
    return -1;
  }();
  const int q = U.v[static_cast<std::size_t>(jq)];
  // U = (q, b, a) up to rotation
  const int n_aq = U.nb[static_cast<std::size_t>(local(u, b))];
  const int n_qb = U.nb[static_cast<std::size_t>(local(u, a))];

  tris_[static_cast<std::size_t>(t)] = {{p, a, q}, {n_aq, u, n_pa}};
  tris_[static_cast<std::size_t>(u)] = {{p, q, b}, {n_qb, n_bp, t}};
  replace_neighbor(n_aq, u, t);
  replace_neighbor(n_bp, t, u);
  if (n_aq < 0) hull_tri_[static_cast<std::size_t>(a)] = t;
  if (n_bp < 0) hull_tri_[static_cast<std::size_t>(b)] = u;
  if (n_qb < 0) hull_tri_[static_cast<std::size_t>(q)] = u;
  if (n_pa < 0) hull_tri_[static_cast<std::size_t>(p)] = t;
}

void Triangulator::legalize(int t, int i) {
  stack_.clear();
  stack_.emplace_back(t, i);
  while (!stack_.empty()) {
    auto [s, k] = stack_.back();
    stack_.pop_back();
    if (!should_flip(s, k)) continue;
    const int u = tris_[static_cast<std::size_t>(s)].nb[static_cast<std::size_t>(k)];
    flip(s, k);
    stack_.emplace_back(s, 0);
    stack_.emplace_back(u, 0);
  }
}

std::vector<std::array<int, 3>> Triangulator::run() {
  const int n = static_cast<int>(p_.size());
  if (n < 3) fail(ErrorKind::collinear_points, "Delaunay triangulation needs at least 3 points");
  for (const auto& q : p_)
    if (!std::isfinite(q[0]) || !std::isfinite(q[1])) fail(ErrorKind::invalid_input, "point coordinates must be finite");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = p_[static_cast<std::size_t>(a)];
    const auto& pb = p_[static_cast<std::size_t>(b)];
    if (pa[0] != pb[0]) return pa[0] < pb[0];
    if (pa[1] != pb[1]) return pa[1] < pb[1];
    return a < b;
  });
  for (int k = 1; k < n; ++k)
    if (p_[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] == p_[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])])
      fail(ErrorKind::invalid_input, "duplicate points " + std::to_string(order[static_cast<std::size_t>(k - 1)]) + " and " +
                                         std::to_string(order[static_cast<std::size_t>(k)]));

  int k = 2;
  while (k < n && orient(order[0], order[1], order[static_cast<std::size_t>(k)]) == 0) ++k;
  if (k == n) fail(ErrorKind::collinear_points, "all points are collinear");

  next_.assign(static_cast<std::size_t>(n), -1);
  prev_.assign(static_cast<std::size_t>(n), -1);
  hull_tri_.assign(static_cast<std::size_t>(n), -1);
  auto link = [&](int a, int b, int t) {
    next_[static_cast<std::size_t>(a)] = b;
    prev_[static_cast<std::size_t>(b)] = a;
    hull_tri_[static_cast<std::size_t>(a)] = t;
  };

  // fan from the first non-collinear point over the initial collinear run
  const int apex = order[static_cast<std::size_t>(k)];
  const bool left = orient(order[0], order[1], apex) > 0;
  std::vector<int> fan;
  for (int i = 0; i + 1 < k; ++i) {
    const int a = order[static_cast<std::size_t>(i)], b = order[static_cast<std::size_t>(i + 1)];
    fan.push_back(left ? add({a, b, apex}, {-1, -1, -1}) : add({b, a, apex}, {-1, -1, -1}));
  }
  for (std::size_t i = 0; i + 1 < fan.size(); ++i) {
    // consecutive fan triangles share the edge (order[i+1], apex)
    const int t = fan[i], u = fan[i + 1];
    const int ta = left ? 0 : 1;  // index of the vertex opposite the shared edge
    tris_[static_cast<std::size_t>(t)].nb[static_cast<std::size_t>(ta)] = u;
    const int ub = left ? 1 : 0;
    tris_[static_cast<std::size_t>(u)].nb[static_cast<std::size_t>(ub)] = t;
  }
  if (left) {
    for (int i = 0; i + 1 < k; ++i) link(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)], fan[static_cast<std::size_t>(i)]);
    link(order[static_cast<std::size_t>(k - 1)], apex, fan.back());
    link(apex, order[0], fan.front());
  } else {
    for (int i = k - 1; i > 0; --i) link(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i - 1)], fan[static_cast<std::size_t>(i - 1)]);
    link(order[0], apex, fan.front());
    link(apex, order[static_cast<std::size_t>(k - 1)], fan.back());
  }
  for (int t : fan) legalize(t, 2);

  int last = apex;
  for (int s = k + 1; s < n; ++s) {
    const int p = order[static_cast<std::size_t>(s)];
    auto visible = [&](int a) { return orient(a, next_[static_cast<std::size_t>(a)], p) < 0; };
    // visible chain around the previous point, else scan the hull
    int start = -1;
    if (visible(last)) {
      start = last;
    } else if (visible(prev_[static_cast<std::size_t>(last)])) {
      start = prev_[static_cast<std::size_t>(last)];
    } else {
      int a = last;
      do {
        if (visible(a)) {
          start = a;
          break;
        }
        a = next_[static_cast<std::size_t>(a)];
      } while (a != last);
    }
    if (start < 0) fail(ErrorKind::invalid_input, "point insertion failed (no visible hull edge)");
    int first = start;
    while (visible(prev_[static_cast<std::size_t>(first)]) && prev_[static_cast<std::size_t>(first)] != start)
      first = prev_[static_cast<std::size_t>(first)];
    std::vector<int> chain{first};
    while (visible(chain.back())) chain.push_back(next_[static_cast<std::size_t>(chain.back())]);

    std::vector<int> added;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const int a = chain[i], b = chain[i + 1];
      const int old = hull_tri_[static_cast<std::size_t>(a)];
      const int t = add({a, p, b}, {-1, old, -1});
      {
        Tri& O = tris_[static_cast<std::size_t>(old)];
        for (int j = 0; j < 3; ++j) {
          const int x = O.v[static_cast<std::size_t>((j + 1) % 3)], y = O.v[static_cast<std::size_t>((j + 2) % 3)];
          if ((x == a && y == b) || (x == b && y == a)) O.nb[static_cast<std::size_t>(j)] = t;
        }
      }
      if (!added.empty()) {
        tris_[static_cast<std::size_t>(added.back())].nb[0] = t;
        tris_[static_cast<std::size_t>(t)].nb[2] = added.back();
      }
      added.push_back(t);
    }
    const int a0 = chain.front(), am = chain.back();
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
      next_[static_cast<std::size_t>(chain[i])] = prev_[static_cast<std::size_t>(chain[i])] = -1;
      hull_tri_[static_cast<std::size_t>(chain[i])] = -1;
    }
    link(a0, p, added.front());
    link(p, am, added.back());
    for (int t : added) legalize(t, local(t, p));
    last = p;
  }

  // final Lawson pass
  stack_.clear();
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
    for (int i = 0; i < 3; ++i) stack_.emplace_back(t, i);
  while (!stack_.empty()) {
    auto [t, i] = stack_.back();
    stack_.pop_back();
    if (!should_flip(t, i)) continue;
    const int u = tris_[static_cast<std::size_t>(t)].nb[static_cast<std::size_t>(i)];
    flip(t, i);
    for (int j = 0; j < 3; ++j) stack_.emplace_back(t, j), stack_.emplace_back(u, j);
  }

  std::vector<std::array<int, 3>> out;
  out.reserve(tris_.size());
  for (const Tri& t : tris_) out.push_back(t.v);
  return out;
}

}  // namespace

int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double l = (b[0] - a[0]) * (c[1] - a[1]);
  const double r = (b[1] - a[1]) * (c[0] - a[0]);
  const double det = l - r;
  if (std::fabs(det) >= kFilter * (std::fabs(l) + std::fabs(r)) && det != 0.0) return det > 0 ? 1 : -1;
  const Rational ax(a[0]), ay(a[1]), bx(b[0]), by(b[1]), cx(c[0]), cy(c[1]);
  return sign_of((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a[0] - d[0], ady = a[1] - d[1];
  const double bdx = b[0] - d[0], bdy = b[1] - d[1];
  const double cdx = c[0] - d[0], cdy = c[1] - d[1];
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) + clift * (adx * bdy - ady * bdx);
  const double perm = alift * (std::fabs(bdx * cdy) + std::fabs(bdy * cdx)) +
                      blift * (std::fabs(cdx * ady) + std::fabs(cdy * adx)) +
                      clift * (std::fabs(adx * bdy) + std::fabs(ady * bdx));
  if (std::fabs(det) >= kFilter * perm && det != 0.0) return det > 0 ? 1 : -1;
  const Rational Adx = Rational(a[0]) - Rational(d[0]), Ady = Rational(a[1]) - Rational(d[1]);
  const Rational Bdx = Rational(b[0]) - Rational(d[0]), Bdy = Rational(b[1]) - Rational(d[1]);
  const Rational Cdx = Rational(c[0]) - Rational(d[0]), Cdy = Rational(c[1]) - Rational(d[1]);
  const Rational e = (Adx * Adx + Ady * Ady) * (Bdx * Cdy - Bdy * Cdx) + (Bdx * Bdx + Bdy * Bdy) * (Cdx * Ady - Cdy * Adx) +
                     (Cdx * Cdx + Cdy * Cdy) * (Adx * Bdy - Ady * Bdx);
  return sign_of(e);
}

std::vector<std::array<int, 3>> delaunay_triangulate(std::span<const Point2> points) {
  return Triangulator(points).run();
}

SimplicialCpwl delaunay_cpwl_2d(std::span<const Point2> points, std::span<const double> values) {
  if (points.size() != values.size()) fail(ErrorKind::dimension_mismatch, "need one value per point");
  const auto tris = delaunay_triangulate(points);
  std::vector<double> coords;
  for (const auto& p : points) coords.insert(coords.end(), {p[0], p[1]});
  std::vector<int> simplices;
  for (const auto& t : tris) simplices.insert(simplices.end(), t.begin(), t.end());
  return SimplicialCpwl(2, std::move(coords), std::move(simplices), std::vector<double>(values.begin(), values.end()));
}

}  // namespace htv
