#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "htv/box.hpp"
#include "htv/matnorm.hpp"

namespace htv {

// Function evaluator with an optional analytic Hessian. Evaluators must be
// pure (safe to call concurrently).
struct SmoothFn {
  int dim = 0;
  std::function<double(std::span<const double>)> value;
  std::function<Matrix(std::span<const double>)> hessian;  // may be empty
  std::string label;
};

// f(x) = scale * |x|^2 / 2
SmoothFn quadratic_bowl(int dim, double scale = 1.0);
// f(x) = a . x + b
SmoothFn affine_fn(std::vector<double> a, double b);
// f(x) = amplitude * exp(-|x - c|^2 / (2 sigma^2))
SmoothFn gaussian_bump(std::vector<double> center, double sigma, double amplitude = 1.0);
// f(x) = sum_k w_k exp(-|x - c_k|^2 / (2 sigma^2))
SmoothFn rbf_mixture(std::vector<std::vector<double>> centers, std::vector<double> weights, double sigma);

// Built-ins by label, parameters as name -> value text. Labels: bowl, affine,
// gauss, rbf (see README for parameters).
SmoothFn make_builtin(const std::string& label, int dim, const std::map<std::string, std::string>& params);

enum class QuadratureRule { midpoint, gauss2 };

// nodes: cells per axis (midpoint: one node per cell, gauss2: 2 per axis per cell)
struct QuadratureSpec {
  BoxDomain domain;
  std::vector<int> nodes;
  QuadratureRule rule = QuadratureRule::gauss2;
};

struct QuadratureOptions {
  // finite-difference step as a fraction of the cell width
  double fd_step_ratio = 0.125;
  // optional indicator of the integration region inside the box (midpoint
  // rule only); the error estimate is doubled when set
  std::function<bool(std::span<const double>)> mask;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Symmetrised central-difference Hessian. When `domain` is given every
// stencil point must lie inside it.
Matrix hessian_fd(const SmoothFn& f, std::span<const double> x, double h, const BoxDomain* domain = nullptr);

QuadratureResult htv_quadrature(const SmoothFn& f, const QuadratureSpec& spec, SchattenOrder p,
                                const QuadratureOptions& options = {});

struct SweepRow {
  double sigma = 0.0;
  double htv = 0.0;
  double error_estimate = 0.0;
};

std::vector<SweepRow> sweep_rbf_width(const std::vector<std::vector<double>>& centers,
                                      const std::vector<double>& weights, const std::vector<double>& widths,
                                      const QuadratureSpec& spec, SchattenOrder p);

}  // namespace htv
