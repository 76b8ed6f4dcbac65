#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "htv/error.hpp"
#include "htv/relu.hpp"

using namespace htv;

TEST_SUITE("relu") {

TEST_CASE("single neuron in 1D") {
  MlpWeights w;
  w.input_dim = 1;
  w.layers = {{1, 1, {1}, {0}}, {1, 1, {1}, {0}}};
  const auto s = relu_to_cpwl_1d(w);
  CHECK(s.breakpoints == std::vector<double>{0});
  CHECK(s.slopes == std::vector<double>{0, 1});
  CHECK(tv2_1d(s.breakpoints, s.slopes) == 1.0);
}

TEST_CASE("hat network") {
  const auto s = relu_to_cpwl_1d(fixtures::hat_network());
  CHECK(s.breakpoints == std::vector<double>{-1, 0, 1});
  CHECK(s.slopes == std::vector<double>{0, 1, -1, 0});
  CHECK(tv2_1d(s.breakpoints, s.slopes) == 4.0);
  const auto m = spline_to_mesh(s, -2, 2);
  CHECK(htv::htv(m, SchattenOrder::finite(1)) == 4.0);
}

TEST_CASE("deep 1D nets match evaluation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MlpWeights w = fixtures::random_network(seed, {1, 10, 10, 10, 1});
    const auto s = relu_to_cpwl_1d(w);
    for (std::size_t i = 1; i < s.breakpoints.size(); ++i) CHECK(s.breakpoints[i - 1] < s.breakpoints[i]);
    for (double x = -4; x <= 4; x += 0.173) {
      const double ref = w.evaluate(std::vector<double>{x});
      CHECK(s(x) == doctest::Approx(ref).epsilon(1e-9).scale(1 + std::fabs(ref)));
    }
    const double lo = std::min(-4.0, s.breakpoints.empty() ? 0.0 : s.breakpoints.front() - 1);
    const double hi = std::max(4.0, s.breakpoints.empty() ? 0.0 : s.breakpoints.back() + 1);
    const auto m = spline_to_mesh(s, lo, hi);
    const double tv = tv2_1d(s.breakpoints, s.slopes);
    // slopes recomputed from vertex values carry rounding
    CHECK(std::fabs(tv - htv::htv(m, SchattenOrder::finite(2))) <= 1e-12 * tv);
    const auto back = extract_spline_1d(m);
    CHECK(tv2_1d(back.breakpoints, back.slopes) == htv::htv(m, SchattenOrder::finite(2)));
  }
}

TEST_CASE("2D single neuron") {
  MlpWeights w;
  w.input_dim = 2;
  w.layers = {{1, 2, {1, 0}, {0}}, {1, 1, {1}, {0}}};
  const auto r = relu_to_cpwl_2d(w, BoxDomain::cube(2, -1, 1));
  CHECK(r.exact);
  CHECK(htv::htv(r.mesh, SchattenOrder::finite(1)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("zero network") {
  MlpWeights w;
  w.input_dim = 2;
  w.layers = {{2, 2, {0, 0, 0, 0}, {0, 0}}, {1, 2, {0, 0}, {0}}};
  CHECK(htv::htv(relu_to_cpwl_2d(w, BoxDomain::cube(2, -1, 1)).mesh, SchattenOrder::finite(1)) == 0.0);
}

TEST_CASE("one hidden layer arrangement matches the network") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MlpWeights w = fixtures::random_network(100 + seed, {2, 8, 1});
    const auto r = relu_to_cpwl_2d(w, BoxDomain::cube(2, -2, 2));
    CHECK(r.exact);
    for (double x = -1.95; x < 2; x += 0.37)
      for (double y = -1.9; y < 2; y += 0.41) {
        const std::vector<double> pt{x, y};
        CHECK(r.mesh.evaluate(pt) == doctest::Approx(w.evaluate(pt)).epsilon(1e-10).scale(1));
      }
  }
}

TEST_CASE("deeper nets use the sampled path") {
  const auto r = relu_to_cpwl_2d(fixtures::pyramid_network(), BoxDomain::cube(2, -2, 2), {32, true});
  CHECK_FALSE(r.exact);
  CHECK_FALSE(r.notice.empty());
  CHECK(htv::htv(r.mesh, SchattenOrder::finite(1)) == doctest::Approx(16.0).epsilon(0.03));
  try {
    relu_to_cpwl_2d(fixtures::pyramid_network(), BoxDomain::cube(2, -2, 2), {32, false});
    FAIL("exact path accepted a deep net");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported);
  }
}

}  // TEST_SUITE
