#include "htv/oracle.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "htv/error.hpp"
#include "htv/summation.hpp"

namespace htv {

namespace {

using Index = std::array<int, 3>;

std::array<std::size_t, 3> strides_of(const std::vector<int>& shape) {
  std::array<std::size_t, 3> s{0, 0, 0};
  std::size_t acc = 1;
  for (int a = static_cast<int>(shape.size()) - 1; a >= 0; --a) {
    s[static_cast<std::size_t>(a)] = acc;
    acc *= static_cast<std::size_t>(shape[static_cast<std::size_t>(a)]);
  }
  return s;
}

std::size_t flat(const std::array<std::size_t, 3>& s, const Index& i, int d) {
  std::size_t f = 0;
  for (int a = 0; a < d; ++a) f += s[static_cast<std::size_t>(a)] * static_cast<std::size_t>(i[static_cast<std::size_t>(a)]);
  return f;
}

// Visits every index of a box of the given extents (row-major order).
template <class Fn>
void for_each_index(const std::vector<int>& extent, Fn&& fn) {
  const int d = static_cast<int>(extent.size());
  for (int e : extent)
    if (e <= 0) return;
  Index idx{0, 0, 0};
  while (true) {
    fn(idx);
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < extent[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) return;
  }
}

}  // namespace

std::vector<int> GridEvaluation::block_shape(unsigned corner_axes) const {
  std::vector<int> shape(static_cast<std::size_t>(domain_.dim()));
  for (int a = 0; a < domain_.dim(); ++a) shape[static_cast<std::size_t>(a)] = (corner_axes >> a) & 1u ? n_ + 1 : r_ * n_ + 2;
  return shape;
}

std::size_t GridEvaluation::sample_count() const {
  std::size_t c = 0;
  for (const auto& [mask, v] : blocks_) c += v.size();
  return c;
}

GridEvaluation GridEvaluation::sample(const Evaluator& f, const BoxDomain& domain, int n, int supersample) {
  const int d = domain.dim();
  if (d > 3) fail(ErrorKind::unsupported, "grid oracle supports dimensions 1 to 3");
  if (n < 8) fail(ErrorKind::invalid_input, "grid oracle needs at least 8 cells per axis");
  if (supersample == 0) supersample = d <= 2 ? 8 : 4;
  if (supersample < 1) fail(ErrorKind::invalid_input, "supersample must be >= 1 (0 for the default)");
  GridEvaluation g(domain, n, supersample);
  const int r = supersample;

  std::vector<unsigned> masks{0u};
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) masks.push_back((1u << i) | (1u << j));

  std::vector<double> x(static_cast<std::size_t>(d));
  for (unsigned mask : masks) {
    const auto shape = g.block_shape(mask);
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    std::vector<double> values(total);
    std::size_t k = 0;
    for_each_index(shape, [&](const Index& idx) {
      bool ghost = false;
      for (int a = 0; a < d; ++a) {
        const int i = idx[static_cast<std::size_t>(a)];
        const double lo = domain.lower(a), hi = domain.upper(a);
        if ((mask >> a) & 1u) {
          x[static_cast<std::size_t>(a)] = i == n ? hi : lo + (hi - lo) * i / n;
        } else {
          const int m = i - 1;
          ghost = ghost || m < 0 || m >= r * n;
          x[static_cast<std::size_t>(a)] = lo + (hi - lo) * (2.0 * m + 1.0) / (2.0 * r * n);
        }
      }
      const double v = f(x);
      if (!std::isfinite(v) && !ghost) {
        std::ostringstream os;
        os.precision(12);
        os << "non-finite sample at (";
        for (int a = 0; a < d; ++a) os << (a ? ", " : "") << x[static_cast<std::size_t>(a)];
        os << ")";
        fail(ErrorKind::non_finite, os.str());
      }
      values[k++] = v;
    });
    g.blocks_.emplace(mask, std::move(values));
  }
  return g;
}

OracleResult grid_htv(const GridEvaluation& g, SchattenOrder p) {
  const int d = g.domain().dim();
  const int n = g.resolution();
  const int r = g.supersample();
  std::array<double, 3> h{}, delta{};
  for (int a = 0; a < d; ++a) {
    h[static_cast<std::size_t>(a)] = g.spacing(a);
    delta[static_cast<std::size_t>(a)] = g.spacing(a) / (2.0 * r);
  }

  const auto& odd = g.block(0);
  const auto odd_strides = strides_of(g.block_shape(0));

  // flux integrals over cell faces: axis i, face index along i, cell index elsewhere
  std::vector<std::vector<double>> face(static_cast<std::size_t>(d));
  std::vector<std::array<std::size_t, 3>> face_strides(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    std::vector<int> extent(static_cast<std::size_t>(d), n);
    extent[static_cast<std::size_t>(i)] = n + 1;
    face_strides[static_cast<std::size_t>(i)] = strides_of(extent);
    std::vector<int> sub(static_cast<std::size_t>(d), r);
    sub[static_cast<std::size_t>(i)] = 1;
    double weight = 1.0 / (2.0 * delta[static_cast<std::size_t>(i)]);
    for (int j = 0; j < d; ++j)
      if (j != i) weight *= h[static_cast<std::size_t>(j)] / r;
    auto& out = face[static_cast<std::size_t>(i)];
    out.reserve(static_cast<std::size_t>(std::pow(n, d - 1)) * static_cast<std::size_t>(n + 1));
    for_each_index(extent, [&](const Index& a) {
      double s = 0.0;
      for_each_index(sub, [&](const Index& q) {
        Index plus{}, minus{};
        for (int j = 0; j < d; ++j) {
          const auto J = static_cast<std::size_t>(j);
          if (j == i) {
            plus[J] = r * a[J] + 1;
            minus[J] = r * a[J];
          } else {
            plus[J] = minus[J] = r * a[J] + q[J] + 1;
          }
        }
        s += odd[flat(odd_strides, plus, d)] - odd[flat(odd_strides, minus, d)];
      });
      out.push_back(s * weight);
    });
  }

  struct Pair {
    int i, j, other;
    const std::vector<double>* samples;
    std::array<std::size_t, 3> strides;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const unsigned mask = (1u << i) | (1u << j);
      int other = -1;
      for (int l = 0; l < d; ++l)
        if (l != i && l != j) other = l;
      pairs.push_back({i, j, other, &g.block(mask), strides_of(g.block_shape(mask))});
    }

  OracleResult result;
  ExactSum total;
  Matrix mu(d);
  for_each_index(std::vector<int>(static_cast<std::size_t>(d), n), [&](const Index& c) {
    for (int i = 0; i < d; ++i) {
      const auto I = static_cast<std::size_t>(i);
      Index up = c;
      up[I] += 1;
      mu(i, i) = face[I][flat(face_strides[I], up, d)] - face[I][flat(face_strides[I], c, d)];
    }
    for (const Pair& pr : pairs) {
      const auto I = static_cast<std::size_t>(pr.i), J = static_cast<std::size_t>(pr.j);
      const auto& F = *pr.samples;
      auto cross = [&](int ml) {
        Index a{}, b{}, e{}, f{};
        a[I] = c[I] + 1, a[J] = c[J] + 1;
        b[I] = c[I] + 1, b[J] = c[J];
        e[I] = c[I], e[J] = c[J] + 1;
        f[I] = c[I], f[J] = c[J];
        if (pr.other >= 0) {
          const auto L = static_cast<std::size_t>(pr.other);
          a[L] = b[L] = e[L] = f[L] = ml;
        }
        return F[flat(pr.strides, a, d)] - F[flat(pr.strides, b, d)] - F[flat(pr.strides, e, d)] +
               F[flat(pr.strides, f, d)];
      };
      double v = 0.0;
      if (pr.other < 0) {
        v = cross(0);
      } else {
        const auto L = static_cast<std::size_t>(pr.other);
        for (int q = 0; q < r; ++q) v += cross(r * c[L] + q + 1);
        v *= h[L] / r;
      }
      mu(pr.i, pr.j) = mu(pr.j, pr.i) = v;
    }
    if (!mu.all_finite()) {
      ++result.excluded;
      return;
    }
    ++result.cells;
    total.add(schatten_norm(mu, p));
  });
  result.value = total.value();
  return result;
}

std::vector<ConvergenceRow> convergence_study(const Evaluator& f, const BoxDomain& domain, SchattenOrder p,
                                              const std::vector<int>& resolutions, double reference,
                                              int supersample) {
  for (std::size_t i = 1; i < resolutions.size(); ++i)
    if (resolutions[i] <= resolutions[i - 1]) fail(ErrorKind::invalid_input, "resolutions must be increasing");
  std::vector<ConvergenceRow> rows;
  for (int n : resolutions) {
    const auto g = GridEvaluation::sample(f, domain, n, supersample);
    const auto res = grid_htv(g, p);
    double h = 0;
    for (int a = 0; a < domain.dim(); ++a) h = std::max(h, g.spacing(a));
    const double rel = reference != 0.0 ? std::fabs(res.value - reference) / std::fabs(reference) : std::fabs(res.value);
    rows.push_back({n, h, res.value, rel, res.excluded});
  }
  return rows;
}

}  // namespace htv
