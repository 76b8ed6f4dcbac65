#include "htv/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace htv::geom {

namespace {

bool lu(std::vector<double>& a, int n, std::vector<int>& piv, int& sign) {
  piv.resize(static_cast<std::size_t>(n));
  sign = 1;
  double scale = 0;
  for (double x : a) scale = std::max(scale, std::fabs(x));
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(a[static_cast<std::size_t>(k * n + k)]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(a[static_cast<std::size_t>(i * n + k)]);
      if (v > best) best = v, p = i;
    }
    piv[static_cast<std::size_t>(k)] = p;
    if (best == 0.0 || best <= 1e-300 * scale) return false;
    if (p != k) {
      sign = -sign;
      for (int j = 0; j < n; ++j) std::swap(a[static_cast<std::size_t>(k * n + j)], a[static_cast<std::size_t>(p * n + j)]);
    }
    const double pivot = a[static_cast<std::size_t>(k * n + k)];
    for (int i = k + 1; i < n; ++i) {
      double& l = a[static_cast<std::size_t>(i * n + k)];
      l /= pivot;
      for (int j = k + 1; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] -= l * a[static_cast<std::size_t>(k * n + j)];
    }
  }
  return true;
}

void lu_solve(const std::vector<double>& a, const std::vector<int>& piv, int n, std::vector<double>& b) {
  for (int k = 0; k < n; ++k) std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv[static_cast<std::size_t>(k)])]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) b[static_cast<std::size_t>(i)] -= a[static_cast<std::size_t>(i * n + j)] * b[static_cast<std::size_t>(j)];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[static_cast<std::size_t>(i)] -= a[static_cast<std::size_t>(i * n + j)] * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] /= a[static_cast<std::size_t>(i * n + i)];
  }
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

double determinant(std::vector<double> a, int n) {
  if (n == 0) return 1.0;
  std::vector<int> piv;
  int sign = 1;
  if (!lu(a, n, piv, sign)) return 0.0;
  double d = sign;
  for (int i = 0; i < n; ++i) d *= a[static_cast<std::size_t>(i * n + i)];
  return d;
}

bool solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x) {
  std::vector<int> piv;
  int sign = 1;
  if (!lu(a, n, piv, sign)) return false;
  lu_solve(a, piv, n, b);
  x = std::move(b);
  return true;
}

bool invert(const std::vector<double>& a, int n, std::vector<double>& inv) {
  std::vector<double> f = a;
  std::vector<int> piv;
  int sign = 1;
  if (!lu(f, n, piv, sign)) return false;
  inv.assign(static_cast<std::size_t>(n * n), 0.0);
  std::vector<double> col(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[static_cast<std::size_t>(j)] = 1.0;
    lu_solve(f, piv, n, col);
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + j)] = col[static_cast<std::size_t>(i)];
  }
  return true;
}

double simplex_volume(std::span<const Point> points) {
  if (points.empty()) return 0.0;
  const int k = static_cast<int>(points.size()) - 1;
  if (k == 0) return 1.0;
  const int n = static_cast<int>(points[0].size());
  if (k > n) return 0.0;
  // G is n x k, column c = points[c+1] - points[0]
  std::vector<double> g(static_cast<std::size_t>(n * k));
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < n; ++r)
      g[static_cast<std::size_t>(r * k + c)] =
          points[static_cast<std::size_t>(c + 1)][static_cast<std::size_t>(r)] - points[0][static_cast<std::size_t>(r)];
  if (k == n) return std::fabs(determinant(g, n)) / factorial(k);
  std::vector<double> gram(static_cast<std::size_t>(k * k), 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double s = 0;
      for (int r = 0; r < n; ++r) s += g[static_cast<std::size_t>(r * k + a)] * g[static_cast<std::size_t>(r * k + b)];
      gram[static_cast<std::size_t>(a * k + b)] = s;
    }
  return std::sqrt(std::max(0.0, determinant(gram, k))) / factorial(k);
}

std::vector<Point2> convex_hull_2d(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double polygon_area(std::span<const Point2> poly) {
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * a;
}

double convex_intersection_area(std::span<const Point2> a, std::span<const Point2> b) {
  // Sutherland-Hodgman: clip a by every edge of b
  std::vector<Point2> out(a.begin(), a.end());
  for (std::size_t i = 0; i < b.size() && !out.empty(); ++i) {
    const Point2& e0 = b[i];
    const Point2& e1 = b[(i + 1) % b.size()];
    std::vector<Point2> in;
    in.swap(out);
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Point2& p = in[j];
      const Point2& q = in[(j + 1) % in.size()];
      const double sp = cross(e0, e1, p);
      const double sq = cross(e0, e1, q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double t = sp / (sp - sq);
        out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
      }
    }
  }
  return out.size() < 3 ? 0.0 : std::fabs(polygon_area(out));
}

double hull_volume(std::span<const Point> points, int k) {
  if (k == 1) {
    double lo = points[0][0], hi = points[0][0];
    for (const auto& p : points) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
    return hi - lo;
  }
  if (k == 2) {
    std::vector<Point2> pts;
    for (const auto& p : points) pts.push_back({p[0], p[1]});
    const auto h = convex_hull_2d(pts);
    return h.size() < 3 ? 0.0 : polygon_area(h);
  }
  if (k != 3) return -1.0;
  // brute force: every supporting plane through three points is a hull facet
  const std::size_t n = points.size();
  double extent = 0;
  for (const auto& p : points)
    for (int c = 0; c < 3; ++c) extent = std::max(extent, std::fabs(p[static_cast<std::size_t>(c)] - points[0][static_cast<std::size_t>(c)]));
  const double tol = 1e-12 * extent;
  Point centroid(3, 0.0);
  for (const auto& p : points)
    for (int c = 0; c < 3; ++c) centroid[static_cast<std::size_t>(c)] += p[static_cast<std::size_t>(c)] / static_cast<double>(n);
  struct Plane {
    double nx, ny, nz, off;
  };
  std::vector<Plane> planes;
  double vol = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t l = j + 1; l < n; ++l) {
        const auto& a = points[i];
        const auto& b = points[j];
        const auto& c = points[l];
        const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
        const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
        double nx = uy * vz - uz * vy, ny = uz * vx - ux * vz, nz = ux * vy - uy * vx;
        const double nn = std::sqrt(nx * nx + ny * ny + nz * nz);
        if (nn <= 1e-12 * extent * extent) continue;
        nx /= nn, ny /= nn, nz /= nn;
        const double off = -(nx * a[0] + ny * a[1] + nz * a[2]);
        int pos = 0, neg = 0;
        for (const auto& p : points) {
          const double s = nx * p[0] + ny * p[1] + nz * p[2] + off;
          if (s > tol) ++pos;
          if (s < -tol) ++neg;
        }
        if (pos && neg) continue;
        if (neg == 0 && pos == 0) return 0.0;  // all coplanar
        if (pos) nx = -nx, ny = -ny, nz = -nz;
        const double o = pos ? -off : off;
        const bool seen = std::any_of(planes.begin(), planes.end(), [&](const Plane& q) {
          return std::fabs(q.nx - nx) + std::fabs(q.ny - ny) + std::fabs(q.nz - nz) < 1e-9 &&
                 std::fabs(q.off - o) <= 1e-9 * std::max(1.0, extent);
        });
        if (seen) continue;
        planes.push_back({nx, ny, nz, o});
        // facet polygon: points on this plane, in an in-plane basis
        const double ex[3] = {ux / std::sqrt(ux * ux + uy * uy + uz * uz), uy / std::sqrt(ux * ux + uy * uy + uz * uz),
                              uz / std::sqrt(ux * ux + uy * uy + uz * uz)};
        const double ey[3] = {ny * ex[2] - nz * ex[1], nz * ex[0] - nx * ex[2], nx * ex[1] - ny * ex[0]};
        std::vector<Point2> face;
        for (const auto& p : points) {
          const double s = nx * p[0] + ny * p[1] + nz * p[2] + o;
          if (std::fabs(s) <= tol) {
            const double dx = p[0] - a[0], dy = p[1] - a[1], dz = p[2] - a[2];
            face.push_back({dx * ex[0] + dy * ex[1] + dz * ex[2], dx * ey[0] + dy * ey[1] + dz * ey[2]});
          }
        }
        const auto hull = convex_hull_2d(face);
        const double area = hull.size() < 3 ? 0.0 : polygon_area(hull);
        const double height = -(nx * centroid[0] + ny * centroid[1] + nz * centroid[2] + o);
        vol += area * height / 3.0;
      }
  return vol;
}

}  // namespace htv::geom
