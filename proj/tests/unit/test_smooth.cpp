#include <cmath>

#include "doctest.h"
#include "htv/error.hpp"
#include "htv/smooth.hpp"

using namespace htv;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::invalid_input;
}

SmoothFn without_hessian(SmoothFn f) {
  f.hessian = nullptr;
  return f;
}

}  // namespace

TEST_SUITE("smooth") {

TEST_CASE("finite-difference Hessian") {
  const SmoothFn bowl = without_hessian(quadratic_bowl(3));
  for (double h : {0.5, 0.1, 0.01}) {
    const Matrix m = hessian_fd(bowl, std::vector<double>{0.3, -0.7, 1.1}, h);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(m(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9).scale(1));
  }
  const Matrix z = hessian_fd(affine_fn({2, -1}, 3), std::vector<double>{0.2, 0.4}, 0.05);
  for (double x : z.data()) CHECK(std::fabs(x) < 1e-10);
  SmoothFn cube{1, [](std::span<const double> x) { return x[0] * x[0] * x[0]; }, nullptr, "cube"};
  CHECK(hessian_fd(cube, std::vector<double>{1.0}, 0.01)(0, 0) == doctest::Approx(6.0).epsilon(1e-3));
}

TEST_CASE("stencil must stay in the domain") {
  const BoxDomain box = BoxDomain::cube(2, -1, 1);
  CHECK(kind_of([&] { hessian_fd(quadratic_bowl(2), std::vector<double>{0.95, 0.0}, 0.1, &box); }) ==
        ErrorKind::stencil_out_of_domain);
}

TEST_CASE("quadrature examples") {
  const QuadratureSpec spec{BoxDomain::cube(2, -1, 1), {8, 8}};
  const auto r1 = htv_quadrature(quadratic_bowl(2), spec, SchattenOrder::finite(1));
  CHECK(std::fabs(r1.value - 8.0) <= 1e-10);
  CHECK(std::fabs(htv_quadrature(quadratic_bowl(2), spec, SchattenOrder::infinity()).value - 4.0) <= 1e-10);
  CHECK(std::fabs(htv_quadrature(without_hessian(quadratic_bowl(2)), spec, SchattenOrder::finite(1)).value - 8.0) <=
        1e-8);
  for (const auto& p : {SchattenOrder::finite(1), SchattenOrder::finite(2), SchattenOrder::infinity()}) {
    CHECK(std::fabs(htv_quadrature(affine_fn({3, -2}, 5), spec, p).value) <= 1e-10);
    CHECK(std::fabs(htv_quadrature(without_hessian(affine_fn({3, -2}, 5)), spec, p).value) <= 1e-10);
  }
}

TEST_CASE("gaussian quadrature converges") {
  const SmoothFn g = gaussian_bump({0, 0}, 0.4);
  const auto coarse = htv_quadrature(g, {BoxDomain::cube(2, -2, 2), {32, 32}}, SchattenOrder::finite(1));
  const auto fine = htv_quadrature(g, {BoxDomain::cube(2, -2, 2), {128, 128}}, SchattenOrder::finite(1));
  CHECK(std::fabs(coarse.value - fine.value) <= coarse.error_estimate + 1e-9);
  CHECK(fine.error_estimate < coarse.error_estimate);
}

TEST_CASE("singular points are reported") {
  SmoothFn cone{2, [](std::span<const double> x) { return std::hypot(x[0], x[1]); },
                [](std::span<const double> x) {
                  const double r = std::hypot(x[0], x[1]);
                  return Matrix{{x[1] * x[1] / (r * r * r), -x[0] * x[1] / (r * r * r)},
                                {-x[0] * x[1] / (r * r * r), x[0] * x[0] / (r * r * r)}};
                },
                "cone"};
  const QuadratureSpec spec{BoxDomain::cube(2, -1, 1), {3, 3}, QuadratureRule::midpoint};
  CHECK(kind_of([&] { htv_quadrature(cone, spec, SchattenOrder::finite(1)); }) == ErrorKind::singular_point);
}

TEST_CASE("rbf width sweep") {
  const QuadratureSpec spec{BoxDomain::cube(2, -1, 1), {16, 16}};
  const auto zero = sweep_rbf_width({{0, 0}}, {0.0}, {0.1, 0.2}, spec, SchattenOrder::finite(1));
  for (const auto& r : zero) CHECK(r.htv == 0.0);

  // d = 2 single bump: sigma-invariant on a box 12 sigma wide
  std::vector<double> values;
  for (double s : {0.1, 0.2, 0.4}) {
    const double half = 6 * s;
    const auto r = htv_quadrature(gaussian_bump({0, 0}, s), {BoxDomain::cube(2, -half, half), {64, 64}},
                                  SchattenOrder::finite(1));
    values.push_back(r.value);
  }
  CHECK(values[1] == doctest::Approx(values[0]).epsilon(1e-2));
  CHECK(values[2] == doctest::Approx(values[0]).epsilon(1e-2));
}

TEST_CASE("builtins by label") {
  const SmoothFn b = make_builtin("bowl", 2, {{"scale", "2"}});
  CHECK(b.value(std::vector<double>{1, 1}) == doctest::Approx(2.0));
  const SmoothFn a = make_builtin("affine", 2, {{"a", "1,2"}, {"b", "3"}});
  CHECK(a.value(std::vector<double>{1, 1}) == doctest::Approx(6.0));
  const SmoothFn r = make_builtin("rbf", 2, {{"centers", "0,0;1,1"}, {"weights", "1;-1"}, {"sigma", "0.5"}});
  CHECK(r.value(std::vector<double>{0, 0}) == doctest::Approx(1 - std::exp(-4.0)));
  CHECK(kind_of([] { make_builtin("nope", 2, {}); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { make_builtin("bowl", 2, {{"sclae", "1"}}); }) == ErrorKind::invalid_input);
}

TEST_CASE("analytic and numerical Hessians agree") {
  const SmoothFn g = rbf_mixture({{0, 0}, {0.5, -0.3}}, {1.0, -0.7}, 0.3);
  for (double x : {-0.4, 0.1, 0.6})
    for (double y : {-0.5, 0.0, 0.35}) {
      const std::vector<double> pt{x, y};
      const Matrix a = g.hessian(pt);
      const Matrix n = hessian_fd(g, pt, 1e-3);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::fabs(n(i, j) - a(i, j)) <= 1e-4);
    }
}

}  // TEST_SUITE
