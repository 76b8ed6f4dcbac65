#include "htv/relu.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <map>
#include <tuple>

#include "htv/error.hpp"

namespace htv {

namespace {

// Per-neuron affine pieces over the intervals cut by `breaks`.
struct Pieces {
  std::vector<double> slope, intercept;
};

double probe(const std::vector<double>& breaks, std::size_t t) {
  if (breaks.empty()) return 0.0;
  if (t == 0) return breaks.front() - 1.0;
  if (t == breaks.size()) return breaks.back() + 1.0;
  return 0.5 * (breaks[t - 1] + breaks[t]);
}

}  // namespace

LinearSpline relu_to_cpwl_1d(const MlpWeights& w) {
  w.validate();
  if (w.input_dim != 1) fail(ErrorKind::dimension_mismatch, "1D import needs input dimension 1");
  std::vector<double> breaks;
  std::vector<Pieces> act{{{1.0}, {0.0}}};  // the input x

  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    const DenseLayer& L = w.layers[l];
    const std::size_t np = breaks.size() + 1;
    std::vector<Pieces> pre(static_cast<std::size_t>(L.rows), Pieces{std::vector<double>(np, 0.0), std::vector<double>(np, 0.0)});
    for (int i = 0; i < L.rows; ++i) {
      auto& P = pre[static_cast<std::size_t>(i)];
      for (std::size_t t = 0; t < np; ++t) {
        double s = 0, c = L.bias[static_cast<std::size_t>(i)];
        for (int j = 0; j < L.cols; ++j) {
          const double wij = L.weights[static_cast<std::size_t>(i * L.cols + j)];
          s += wij * act[static_cast<std::size_t>(j)].slope[t];
          c += wij * act[static_cast<std::size_t>(j)].intercept[t];
        }
        P.slope[t] = s;
        P.intercept[t] = c;
      }
    }
    if (l + 1 == w.layers.size()) {
      act = std::move(pre);
      break;
    }
    // zero crossings become new breakpoints
    std::vector<double> added;
    for (const auto& P : pre)
      for (std::size_t t = 0; t < np; ++t) {
        if (P.slope[t] == 0.0) continue;
        const double x = -P.intercept[t] / P.slope[t];
        const bool above = t == 0 || x > breaks[t - 1];
        const bool below = t == breaks.size() || x < breaks[t];
        if (above && below && std::isfinite(x)) added.push_back(x);
      }
    std::vector<double> merged = breaks;
    merged.insert(merged.end(), added.begin(), added.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    const std::size_t nq = merged.size() + 1;
    std::vector<Pieces> post(pre.size(), Pieces{std::vector<double>(nq, 0.0), std::vector<double>(nq, 0.0)});
    for (std::size_t t = 0; t < nq; ++t) {
      const double x = probe(merged, t);
      const std::size_t old = static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
      for (std::size_t i = 0; i < pre.size(); ++i) {
        const double s = pre[i].slope[old], c = pre[i].intercept[old];
        if (s * x + c > 0) {
          post[i].slope[t] = s;
          post[i].intercept[t] = c;
        }
      }
    }
    breaks = std::move(merged);
    act = std::move(post);
  }

  LinearSpline out;
  const Pieces& f = act.front();
  double smax = 0;
  for (double s : f.slope) smax = std::max(smax, std::fabs(s));
  out.slopes.push_back(f.slope[0]);
  out.intercepts.push_back(f.intercept[0]);
  for (std::size_t t = 1; t < f.slope.size(); ++t) {
    if (std::fabs(f.slope[t] - out.slopes.back()) <= 1e-12 * smax) continue;
    out.breakpoints.push_back(breaks[t - 1]);
    out.slopes.push_back(f.slope[t]);
    out.intercepts.push_back(f.intercept[t]);
  }
  return out;
}

namespace {

struct Line {
  double a, b, c;  // a x + b y + c
};

ReluImport arrangement_mesh(const MlpWeights& w, const BoxDomain& box) {
  std::vector<Line> lines;
  if (w.layers.size() == 2) {
    const DenseLayer& H = w.layers[0];
    const DenseLayer& O = w.layers[1];
    for (int j = 0; j < H.rows; ++j) {
      const double a = H.weights[static_cast<std::size_t>(2 * j)];
      const double b = H.weights[static_cast<std::size_t>(2 * j + 1)];
      const double c = H.bias[static_cast<std::size_t>(j)];
      if ((a == 0 && b == 0) || O.weights[static_cast<std::size_t>(j)] == 0) continue;
      const double n = std::hypot(a, b);
      Line L{a / n, b / n, c / n};
      // canonical sign so that opposite neurons on one line coincide
      if (L.a < 0 || (L.a == 0 && L.b < 0)) L = {-L.a, -L.b, -L.c};
      const bool dup = std::any_of(lines.begin(), lines.end(), [&](const Line& M) {
        return std::fabs(M.a - L.a) < 1e-14 && std::fabs(M.b - L.b) < 1e-14 && std::fabs(M.c - L.c) < 1e-14;
      });
      if (!dup) lines.push_back(L);
    }
  }

  std::vector<std::array<double, 2>> pts{{box.lower(0), box.lower(1)},
                          {box.upper(0), box.lower(1)},
                          {box.upper(0), box.upper(1)},
                          {box.lower(0), box.upper(1)}};
  std::vector<std::vector<int>> cells{{0, 1, 2, 3}};
  std::map<std::tuple<int, int, std::size_t>, int> cut_vertex;
  const double scale = std::max({std::fabs(box.lower(0)), std::fabs(box.upper(0)), std::fabs(box.lower(1)),
                                 std::fabs(box.upper(1)), box.width(0), box.width(1)});
  const double tol = 1e-12 * scale;

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const Line& L = lines[li];
    auto side = [&](int v) {
      const double s = L.a * pts[static_cast<std::size_t>(v)][0] + L.b * pts[static_cast<std::size_t>(v)][1] + L.c;
      return std::fabs(s) <= tol ? 0.0 : s;
    };
    std::vector<std::vector<int>> next;
    for (const auto& cell : cells) {
      std::vector<int> pos, neg;
      const std::size_t m = cell.size();
      for (std::size_t k = 0; k < m; ++k) {
        const int u = cell[k], v = cell[(k + 1) % m];
        const double su = side(u), sv = side(v);
        if (su >= 0) pos.push_back(u);
        if (su <= 0) neg.push_back(u);
        if ((su > 0 && sv < 0) || (su < 0 && sv > 0)) {
          const int lo = std::min(u, v), hi = std::max(u, v);
          auto key = std::make_tuple(lo, hi, li);
          auto it = cut_vertex.find(key);
          int x;
          if (it != cut_vertex.end()) {
            x = it->second;
          } else {
            const double sl = side(lo), sh = side(hi);
            const double t = sl / (sl - sh);
            const auto& P = pts[static_cast<std::size_t>(lo)];
            const auto& Q = pts[static_cast<std::size_t>(hi)];
            pts.push_back({P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])});
            x = static_cast<int>(pts.size()) - 1;
            cut_vertex.emplace(key, x);
          }
          pos.push_back(x);
          neg.push_back(x);
        }
      }
      if (pos.size() >= 3 && neg.size() >= 3) {
        next.push_back(std::move(pos));
        next.push_back(std::move(neg));
      } else {
        next.push_back(cell);
      }
    }
    cells = std::move(next);
  }

  std::vector<double> coords, values;
  for (const auto& p : pts) {
    coords.insert(coords.end(), {p[0], p[1]});
    values.push_back(w.evaluate(std::vector<double>{p[0], p[1]}));
  }
  std::vector<int> simplices;
  for (const auto& cell : cells)
    for (std::size_t k = 1; k + 1 < cell.size(); ++k) simplices.insert(simplices.end(), {cell[0], cell[k], cell[k + 1]});
  return {SimplicialCpwl(2, std::move(coords), std::move(simplices), std::move(values)), true, ""};
}

ReluImport sampled_mesh(const MlpWeights& w, const BoxDomain& box, int n) {
  if (n < 1) fail(ErrorKind::invalid_input, "grid needs at least one square per axis");
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  auto coord = [&](int axis, int i) { return i == n ? box.upper(axis) : box.lower(axis) + box.width(axis) * i / n; };
  std::vector<double> coords, values;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double x = coord(0, i), y = coord(1, j);
      coords.insert(coords.end(), {x, y});
      values.push_back(w.evaluate(std::vector<double>{x, y}));
    }
  auto id = [&](int i, int j) { return static_cast<int>(static_cast<std::size_t>(i) * side + static_cast<std::size_t>(j)); };
  std::vector<int> simplices;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      const double fc = w.evaluate(std::vector<double>{0.5 * (coord(0, i) + coord(0, i + 1)), 0.5 * (coord(1, j) + coord(1, j + 1))});
      const double main = std::fabs(0.5 * (values[static_cast<std::size_t>(v00)] + values[static_cast<std::size_t>(v11)]) - fc);
      const double anti = std::fabs(0.5 * (values[static_cast<std::size_t>(v10)] + values[static_cast<std::size_t>(v01)]) - fc);
      if (main <= anti) {
        simplices.insert(simplices.end(), {v00, v10, v11, v00, v11, v01});
      } else {
        simplices.insert(simplices.end(), {v00, v10, v01, v10, v11, v01});
      }
    }
  std::string notice = "network has " + std::to_string(w.layers.size() - 1) +
                       " hidden layers; sampled on a " + std::to_string(n) + "x" + std::to_string(n) +
                       " grid, result is approximate";
  return {SimplicialCpwl(2, std::move(coords), std::move(simplices), std::move(values)), false, notice};
}

}  // namespace

ReluImport relu_to_cpwl_2d(const MlpWeights& w, const BoxDomain& box, const ReluImportOptions& options) {
  w.validate();
  if (w.input_dim != 2) fail(ErrorKind::dimension_mismatch, "2D import needs input dimension 2");
  if (box.dim() != 2) fail(ErrorKind::dimension_mismatch, "2D import needs a 2D box");
  if (w.layers.size() <= 2) return arrangement_mesh(w, box);
  if (!options.allow_approximate)
    fail(ErrorKind::unsupported, "exact 2D import handles one hidden layer; network has " +
                                     std::to_string(w.layers.size() - 1));
  return sampled_mesh(w, box, options.nodes);
}

}  // namespace htv
