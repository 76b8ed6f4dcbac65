#include "htv/smooth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "htv/error.hpp"

namespace htv {

namespace {

double sq_dist(std::span<const double> x, const std::vector<double>& c) {
  double s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
  return s;
}

void check_point(std::span<const double> x, int dim) {
  if (static_cast<int>(x.size()) != dim) fail(ErrorKind::dimension_mismatch, "point dimension differs from function");
}

// Hessian of w * exp(-|x - c|^2 / (2 s^2)) added into h.
void add_gauss_hessian(Matrix& h, std::span<const double> x, const std::vector<double>& c, double s, double w) {
  const double f = w * std::exp(-sq_dist(x, c) / (2 * s * s));
  const double s2 = s * s;
  const int d = h.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double di = x[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(i)];
      const double dj = x[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(j)];
      h(i, j) += f * (di * dj / (s2 * s2) - (i == j ? 1.0 / s2 : 0.0));
    }
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorKind::parse, "bad number '" + s + "' for parameter " + what);
  return v;
}

std::vector<double> parse_list(const std::string& s, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_double(item, what));
  return out;
}

// Calls fn(point, weight) for every quadrature node.
template <class Fn>
void for_each_node(const BoxDomain& box, const std::vector<int>& cells, QuadratureRule rule, Fn&& fn) {
  const int d = box.dim();
  const int per_cell = rule == QuadratureRule::midpoint ? 1 : 2;
  std::vector<int> counts(static_cast<std::size_t>(d));
  std::vector<double> width(static_cast<std::size_t>(d));
  double weight = 1.0;
  for (int a = 0; a < d; ++a) {
    counts[static_cast<std::size_t>(a)] = cells[static_cast<std::size_t>(a)] * per_cell;
    width[static_cast<std::size_t>(a)] = box.width(a) / cells[static_cast<std::size_t>(a)];
    weight *= width[static_cast<std::size_t>(a)] / per_cell;
  }
  const double g = 0.5 / std::sqrt(3.0);
  auto coord = [&](int a, int k) {
    const int cell = k / per_cell;
    const double center = box.lower(a) + (cell + 0.5) * width[static_cast<std::size_t>(a)];
    if (per_cell == 1) return center;
    return center + (k % 2 == 0 ? -g : g) * width[static_cast<std::size_t>(a)];
  };
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = coord(a, 0);
  while (true) {
    fn(std::span<const double>(x), weight);
    int a = d - 1;
    for (; a >= 0; --a) {
      auto& i = idx[static_cast<std::size_t>(a)];
      if (++i < counts[static_cast<std::size_t>(a)]) {
        x[static_cast<std::size_t>(a)] = coord(a, i);
        break;
      }
      i = 0;
      x[static_cast<std::size_t>(a)] = coord(a, 0);
    }
    if (a < 0) break;
  }
}

double integrate(const SmoothFn& f, const BoxDomain& box, const std::vector<int>& cells, QuadratureRule rule,
                 SchattenOrder p, const QuadratureOptions& options) {
  double h = std::numeric_limits<double>::infinity();
  for (int a = 0; a < box.dim(); ++a) h = std::min(h, box.width(a) / cells[static_cast<std::size_t>(a)]);
  h *= options.fd_step_ratio;
  double sum = 0.0;
  for_each_node(box, cells, rule, [&](std::span<const double> x, double w) {
    if (options.mask && !options.mask(x)) return;
    const Matrix hx = f.hessian ? f.hessian(x) : hessian_fd(f, x, h, &box);
    if (!hx.all_finite()) {
      std::ostringstream os;
      os.precision(12);
      os << "non-finite Hessian at (";
      for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
      os << ")";
      fail(ErrorKind::singular_point, os.str());
    }
    sum += schatten_norm(hx, p) * w;
  });
  return sum;
}

}  // namespace

SmoothFn quadratic_bowl(int dim, double scale) {
  if (dim < 1) fail(ErrorKind::invalid_input, "dimension must be >= 1");
  SmoothFn f;
  f.dim = dim;
  f.label = "bowl";
  f.value = [dim, scale](std::span<const double> x) {
    check_point(x, dim);
    double s = 0;
    for (double v : x) s += v * v;
    return 0.5 * scale * s;
  };
  f.hessian = [dim, scale](std::span<const double> x) {
    check_point(x, dim);
    return Matrix::identity(dim) * scale;
  };
  return f;
}

SmoothFn affine_fn(std::vector<double> a, double b) {
  if (a.empty()) fail(ErrorKind::invalid_input, "affine function needs a gradient");
  SmoothFn f;
  f.dim = static_cast<int>(a.size());
  f.label = "affine";
  f.value = [a, b](std::span<const double> x) {
    check_point(x, static_cast<int>(a.size()));
    double s = b;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
    return s;
  };
  f.hessian = [d = f.dim](std::span<const double> x) {
    check_point(x, d);
    return Matrix(d);
  };
  return f;
}

SmoothFn gaussian_bump(std::vector<double> center, double sigma, double amplitude) {
  return rbf_mixture({std::move(center)}, {amplitude}, sigma);
}

SmoothFn rbf_mixture(std::vector<std::vector<double>> centers, std::vector<double> weights, double sigma) {
  if (centers.empty()) fail(ErrorKind::invalid_input, "mixture needs at least one center");
  if (centers.size() != weights.size()) fail(ErrorKind::dimension_mismatch, "one weight per center required");
  if (!(sigma > 0) || !std::isfinite(sigma)) fail(ErrorKind::invalid_input, "width sigma must be positive");
  const int dim = static_cast<int>(centers.front().size());
  if (dim < 1) fail(ErrorKind::invalid_input, "centers need at least one coordinate");
  for (const auto& c : centers)
    if (static_cast<int>(c.size()) != dim) fail(ErrorKind::dimension_mismatch, "centers differ in dimension");
  SmoothFn f;
  f.dim = dim;
  f.label = centers.size() == 1 ? "gauss" : "rbf";
  f.value = [centers, weights, sigma, dim](std::span<const double> x) {
    check_point(x, dim);
    double s = 0;
    for (std::size_t k = 0; k < centers.size(); ++k)
      s += weights[k] * std::exp(-sq_dist(x, centers[k]) / (2 * sigma * sigma));
    return s;
  };
  f.hessian = [centers, weights, sigma, dim](std::span<const double> x) {
    check_point(x, dim);
    Matrix h(dim);
    for (std::size_t k = 0; k < centers.size(); ++k) add_gauss_hessian(h, x, centers[k], sigma, weights[k]);
    return h;
  };
  return f;
}

SmoothFn make_builtin(const std::string& label, int dim, const std::map<std::string, std::string>& params) {
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = params.find(key);
    return it == params.end() ? nullptr : &it->second;
  };
  auto number = [&](const std::string& key, double fallback) {
    const std::string* v = get(key);
    return v ? parse_double(*v, key) : fallback;
  };
  auto vec = [&](const std::string& key) {
    const std::string* v = get(key);
    std::vector<double> out = v ? parse_list(*v, ',', key) : std::vector<double>(static_cast<std::size_t>(dim), 0.0);
    if (static_cast<int>(out.size()) != dim)
      fail(ErrorKind::dimension_mismatch, "parameter " + key + " needs " + std::to_string(dim) + " values");
    return out;
  };
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params)
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
        fail(ErrorKind::invalid_input, "unknown parameter '" + k + "' for " + label);
  };
  if (label == "bowl") {
    allow({"scale"});
    return quadratic_bowl(dim, number("scale", 1.0));
  }
  if (label == "affine") {
    allow({"a", "b"});
    return affine_fn(vec("a"), number("b", 0.0));
  }
  if (label == "gauss") {
    allow({"center", "sigma", "amplitude"});
    return gaussian_bump(vec("center"), number("sigma", 1.0), number("amplitude", 1.0));
  }
  if (label == "rbf") {
    allow({"centers", "weights", "sigma"});
    const std::string* cs = get("centers");
    const std::string* ws = get("weights");
    if (!cs || !ws) fail(ErrorKind::invalid_input, "rbf needs centers=x,y;x,y and weights=w;w");
    std::vector<std::vector<double>> centers;
    std::stringstream ss(*cs);
    std::string item;
    while (std::getline(ss, item, ';')) centers.push_back(parse_list(item, ',', "centers"));
    return rbf_mixture(centers, parse_list(*ws, ';', "weights"), number("sigma", 1.0));
  }
  fail(ErrorKind::invalid_input, "unknown function '" + label + "'");
}

Matrix hessian_fd(const SmoothFn& f, std::span<const double> x, double h, const BoxDomain* domain) {
  const int d = f.dim;
  check_point(x, d);
  if (!(h > 0)) fail(ErrorKind::invalid_input, "finite-difference step must be positive");
  if (domain) {
    for (int i = 0; i < d; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      if (xi - h < domain->lower(i) || xi + h > domain->upper(i))
        fail(ErrorKind::stencil_out_of_domain, "finite-difference stencil leaves the domain on axis " + std::to_string(i));
    }
  }
  std::vector<double> y(x.begin(), x.end());
  auto at = [&](int i, double si, int j, double sj) {
    y[static_cast<std::size_t>(i)] += si;
    if (j >= 0) y[static_cast<std::size_t>(j)] += sj;
    const double v = f.value(y);
    y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    if (j >= 0) y[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
    return v;
  };
  const double f0 = f.value(x);
  Matrix hm(d);
  for (int i = 0; i < d; ++i) {
    hm(i, i) = (at(i, h, -1, 0) - 2 * f0 + at(i, -h, -1, 0)) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      const double v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4 * h * h);
      hm(i, j) = hm(j, i) = v;
    }
  }
  return hm;
}

QuadratureResult htv_quadrature(const SmoothFn& f, const QuadratureSpec& spec, SchattenOrder p,
                                const QuadratureOptions& options) {
  if (f.dim != spec.domain.dim()) fail(ErrorKind::dimension_mismatch, "function and domain dimensions differ");
  if (static_cast<int>(spec.nodes.size()) != f.dim) fail(ErrorKind::dimension_mismatch, "need one node count per axis");
  for (int n : spec.nodes)
    if (n < 2) fail(ErrorKind::invalid_input, "node counts must be >= 2");
  if (options.mask && spec.rule != QuadratureRule::midpoint)
    fail(ErrorKind::invalid_input, "masked integration uses the midpoint rule");
  if (!(options.fd_step_ratio > 0) || options.fd_step_ratio > 0.5)
    fail(ErrorKind::invalid_input, "finite-difference step ratio must be in (0, 0.5]");
  const double fine = integrate(f, spec.domain, spec.nodes, spec.rule, p, options);
  std::vector<int> half = spec.nodes;
  for (int& n : half) n = std::max(1, n / 2);
  const double coarse = integrate(f, spec.domain, half, spec.rule, p, options);
  double err = std::fabs(fine - coarse);
  if (options.mask) err *= 2;
  return {fine, err};
}

std::vector<SweepRow> sweep_rbf_width(const std::vector<std::vector<double>>& centers,
                                      const std::vector<double>& weights, const std::vector<double>& widths,
                                      const QuadratureSpec& spec, SchattenOrder p) {
  for (double s : widths)
    if (!(s > 0)) fail(ErrorKind::invalid_input, "all widths must be positive");
  std::vector<SweepRow> rows;
  for (double s : widths) {
    const auto r = htv_quadrature(rbf_mixture(centers, weights, s), spec, p);
    rows.push_back({s, r.value, r.error_estimate});
  }
  return rows;
}

}  // namespace htv
