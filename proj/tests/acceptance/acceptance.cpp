// One line per criterion: [PASS] or [FAIL], a short detail and the runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "htv/cpwl.hpp"
#include "htv/error.hpp"
#include "htv/fence.hpp"
#include "htv/mixed_fields.hpp"
#include "htv/oracle.hpp"
#include "htv/relu.hpp"
#include "htv/smooth.hpp"
#include "htv/transforms.hpp"

using namespace htv;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    } else if (!cond) {
      detail += "; " + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const SchattenOrder kOrders[] = {SchattenOrder::finite(1), SchattenOrder::finite(2), SchattenOrder::infinity()};

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

Outcome affine_null_space() {
  Outcome o;
  double worst = 0;
  const auto mesh = fixtures::affine_2d();
  const SmoothFn f = affine_fn({3, -2}, 5);
  const SmoothFn f3 = affine_fn({1, 2, -1}, 0.5);
  const auto g2 = GridEvaluation::sample(f.value, BoxDomain::cube(2, -1, 1), 32);
  const auto g3 = GridEvaluation::sample(f3.value, BoxDomain::cube(3, -1, 1), 8);
  for (const auto& p : kOrders) {
    const double v[] = {
        htv::htv(mesh, p),
        htv_quadrature(f, {BoxDomain::cube(2, -1, 1), {16, 16}}, p).value,
        htv_quadrature(f3, {BoxDomain::cube(3, -1, 1), {6, 6, 6}}, p).value,
        grid_htv(g2, p).value,
        grid_htv(g3, p).value,
    };
    for (double x : v) worst = std::max(worst, std::fabs(x));
  }
  o.require(worst <= 1e-10, fmt("max |value| %.3g > 1e-10", worst));
  if (o.ok) o.detail = fmt("max |value| %.3g", worst);
  return o;
}

Outcome cpwl_p_invariance() {
  Outcome o;
  double worst = 0;
  const SchattenOrder ps[] = {SchattenOrder::finite(1), SchattenOrder::finite(1.5), SchattenOrder::finite(2),
                              SchattenOrder::finite(3), SchattenOrder::infinity()};
  const auto meshes = fixtures::all_meshes();
  for (const auto& [name, m] : meshes) {
    const double ref = htv::htv(m, ps[0]);
    for (const auto& p : ps) worst = std::max(worst, rel(htv::htv(m, p), ref));
  }
  o.require(meshes.size() >= 5, "fewer than 5 fixtures");
  o.require(worst <= 1e-12, fmt("max relative spread %.3g > 1e-12", worst));
  if (o.ok) o.detail = std::to_string(meshes.size()) + " meshes, max relative spread " + fmt("%.3g", worst);
  return o;
}

Outcome pyramid_closed_form() {
  Outcome o;
  const auto m = fixtures::pyramid_2d();
  const auto fences = hessian_fences(m);
  std::string oracle_detail;
  for (const auto& p : kOrders) {
    o.require(std::fabs(htv::htv(m, p) - 16.0) <= 1e-10, "closed form off for p=" + p.to_string());
    o.require(std::fabs(fences_total_norm(fences, p) - 16.0) <= 1e-10, "fence sum off for p=" + p.to_string());
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = GridEvaluation::sample(fixtures::mesh_evaluator(m), BoxDomain::cube(2, -2, 2), 256);
  for (const auto& p : kOrders) {
    const double v = grid_htv(g, p).value;
    oracle_detail += " p=" + p.to_string() + ":" + fmt("%.4f", v);
    o.require(rel(v, 16.0) <= 0.02, "oracle " + fmt("%.4f", v) + " off by more than 2% for p=" + p.to_string());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 30, fmt("oracle took %.1f s", secs));
  if (o.ok) o.detail = "closed form and fences 16, oracle" + oracle_detail;
  return o;
}

Outcome sobolev_compatibility() {
  Outcome o;
  const BoxDomain unit = BoxDomain::cube(2, -1, 1);
  const double b1 = htv_quadrature(quadratic_bowl(2), {unit, {8, 8}}, SchattenOrder::finite(1)).value;
  const double bi = htv_quadrature(quadratic_bowl(2), {unit, {8, 8}}, SchattenOrder::infinity()).value;
  o.require(std::fabs(b1 - 8) <= 1e-10, fmt("bowl p=1 gives %.12g", b1));
  o.require(std::fabs(bi - 4) <= 1e-10, fmt("bowl p=inf gives %.12g", bi));
  const SmoothFn bump = gaussian_bump({0.1, -0.2}, 0.4);
  const BoxDomain box = BoxDomain::cube(2, -2, 2);
  const auto g = GridEvaluation::sample(bump.value, box, 256);
  double worst = 0;
  for (const auto& p : kOrders) {
    const double q = htv_quadrature(bump, {box, {256, 256}}, p).value;
    worst = std::max(worst, rel(grid_htv(g, p).value, q));
  }
  o.require(worst <= 1e-2, fmt("gaussian oracle vs quadrature %.3g > 1e-2", worst));
  if (o.ok) o.detail = fmt("bowl 8 and 4, gaussian max relative gap %.3g", worst);
  return o;
}

Outcome invariance_laws() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> alpha(0.4, 2.5), shift(-1, 1), sign(-1, 1);
  double worst_cpwl = 0;

  const auto pyr = fixtures::pyramid_2d();
  const auto hat = fixtures::hat_1d();
  const auto tet = fixtures::two_tet_3d();
  const auto p1 = SchattenOrder::finite(1);
  const double pyr0 = htv::htv(pyr, p1), hat0 = htv::htv(hat, p1), tet0 = htv::htv(tet, p1);
  for (int k = 0; k < 20; ++k) {
    const DomainTransform t2(random_orthonormal(2, rng), alpha(rng), {shift(rng), shift(rng)});
    worst_cpwl = std::max(worst_cpwl, rel(htv::htv(apply_to_cpwl(pyr, t2), p1) / pyr0, predicted_factor(t2, 2)));
    const double a1 = alpha(rng) * (sign(rng) < 0 ? -1 : 1);
    const DomainTransform t1(Matrix::identity(1), a1, {shift(rng)});
    const double f1 = htv::htv(apply_to_cpwl(hat, t1), p1) / hat0;
    worst_cpwl = std::max(worst_cpwl, rel(f1, std::fabs(a1)));
    const DomainTransform t3(random_orthonormal(3, rng), alpha(rng), {shift(rng), shift(rng), shift(rng)});
    const double f3 = htv::htv(apply_to_cpwl(tet, t3), p1) / tet0;
    worst_cpwl = std::max(worst_cpwl, rel(f3, 1.0 / std::fabs(t3.scale())));
  }
  o.require(worst_cpwl <= 1e-9, fmt("cpwl factor off by %.3g", worst_cpwl));

  // smooth: the bump on [-2, 2]^2 against its transforms on the co-transformed domain
  const BoxDomain box = BoxDomain::cube(2, -2, 2);
  const SmoothFn bump = gaussian_bump({0.2, -0.1}, 0.3);
  const int n = 128;
  const auto base = htv_quadrature(bump, {box, {n, n}, QuadratureRule::midpoint}, p1);
  int smooth_bad = 0;
  double worst_smooth = 0;
  for (int k = 0; k < 20; ++k) {
    const DomainTransform t(random_orthonormal(2, rng), alpha(rng), {0.3 * shift(rng), 0.3 * shift(rng)});
    const auto tb = transform_box(box, t);
    const int m = static_cast<int>(std::ceil(n * tb.box.width(0) * t.scale() / box.width(0)));
    QuadratureOptions opt;
    opt.mask = [&](std::span<const double> x) { return box.contains(t.forward(x)); };
    const auto r = htv_quadrature(apply_to_smooth(bump, t), {tb.box, {m, m}, QuadratureRule::midpoint}, p1, opt);
    const double measured = r.value / base.value;
    const double err = std::fabs(measured / predicted_factor(t, 2) - 1);
    const double allowed = std::max(1e-3, 4 * (r.error_estimate + base.error_estimate) / base.value);
    worst_smooth = std::max(worst_smooth, err);
    smooth_bad += err > allowed;
  }
  o.require(smooth_bad == 0, std::to_string(smooth_bad) + " smooth 2D transforms outside the bound");

  // smooth scaling in d = 1 (factor |alpha|) and d = 3 (factor 1 / |alpha|)
  for (int d : {1, 3}) {
    const BoxDomain b = BoxDomain::cube(d, -2, 2);
    const SmoothFn f = gaussian_bump(std::vector<double>(static_cast<std::size_t>(d), 0.1), 0.4);
    const int cells = d == 1 ? 256 : 32;
    const std::vector<int> nodes(static_cast<std::size_t>(d), cells);
    const auto r0 = htv_quadrature(f, {b, nodes}, p1);
    for (double a : {0.5, 2.0, -1.5}) {
      const auto t = DomainTransform::scaling(d, a);
      const auto r1 = htv_quadrature(apply_to_smooth(f, t), {transform_box(b, t).box, nodes}, p1);
      const double err = std::fabs(r1.value / r0.value / predicted_factor(t, d) - 1);
      const double allowed = std::max(1e-3, 4 * (r0.error_estimate + r1.error_estimate) / r0.value);
      worst_smooth = std::max(worst_smooth, err);
      o.require(err <= allowed, "d=" + std::to_string(d) + fmt(" alpha=%g: factor off by %.3g", a, err));
    }
  }
  if (o.ok) o.detail = fmt("cpwl max %.3g, smooth max %.3g", worst_cpwl, worst_smooth);
  return o;
}

Outcome fence_calculus() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> len(0.1, 3.0);
  int homog = 0, additive = 0, rejected = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const int d = 2 + rep % 2;
    Matrix w(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) w(i, j) = g(rng);
    const double a = g(rng);
    const auto p = kOrders[rep % 3];
    if (d == 2) {
      const double x0 = g(rng), l = len(rng), s = g(rng), c = g(rng);
      const DiracFence f(w, {{x0}, {x0 + l}}, {s}, {c});
      homog += rel(fence_norm(f.scaled(a), p), std::fabs(a) * fence_norm(f, p)) <= 1e-12;
      const DiracFence next(w, {{x0 + l}, {x0 + 2 * l}}, {s}, {c});
      // vertical segment through the middle of f
      const double xm = x0 + 0.5 * l, ym = s * xm + c;
      const DiracFence cross(w, {{ym - 1}, {ym + 1}}, {0.0}, {xm}, {0});
      const DiracFence pair1[] = {f, next}, pair2[] = {f, cross};
      additive += fences_total_norm(pair1, p) == fence_norm(f, p) + fence_norm(next, p);
      additive += fences_total_norm(pair2, p) == fence_norm(f, p) + fence_norm(cross, p);
      const DiracFence inside(w, {{x0 + 0.25 * l}, {x0 + 0.75 * l}}, {s}, {c});
      const DiracFence bad[] = {f, inside};
      try {
        fences_total_norm(bad, p);
      } catch (const Error& e) {
        rejected += e.kind() == ErrorKind::non_additive;
      }
    } else {
      const double l = len(rng), ox = g(rng), oy = g(rng);
      const std::vector<double> lin{g(rng), g(rng)};
      const double c = g(rng);
      const DiracFence f(w, {{ox, oy}, {ox + l, oy}, {ox, oy + l}}, lin, {c});
      homog += rel(fence_norm(f.scaled(a), p), std::fabs(a) * fence_norm(f, p)) <= 1e-12;
      // the other half of the square over the same plane shares only an edge
      const DiracFence other(w, {{ox + l, oy + l}, {ox + l, oy}, {ox, oy + l}}, lin, {c});
      const DiracFence pair[] = {f, other};
      additive += fences_total_norm(pair, p) == fence_norm(f, p) + fence_norm(other, p);
      additive += 1;
      const DiracFence inside(w, {{ox + 0.1 * l, oy + 0.1 * l}, {ox + 0.5 * l, oy + 0.1 * l}, {ox + 0.1 * l, oy + 0.5 * l}},
                              lin, {c});
      const DiracFence bad[] = {f, inside};
      try {
        fences_total_norm(bad, p);
      } catch (const Error& e) {
        rejected += e.kind() == ErrorKind::non_additive;
      }
    }
  }
  o.require(homog == 500, std::to_string(500 - homog) + " homogeneity failures");
  o.require(additive == 1000, std::to_string(1000 - additive) + " additivity failures");
  o.require(rejected == 500, std::to_string(500 - rejected) + " overlaps accepted");
  if (o.ok) o.detail = "500 random fences";
  return o;
}

MatrixField random_field(std::mt19937_64& rng, int d, int nodes, FieldKind kind) {
  std::normal_distribution<double> g;
  std::vector<Matrix> ms;
  for (int k = 0; k < nodes; ++k) {
    Matrix m(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = g(rng);
    ms.push_back(m);
  }
  return MatrixField(BoxDomain({0.0}, {1.0}), {nodes}, std::move(ms), kind);
}

Outcome mixed_norm_duality() {
  Outcome o;
  std::mt19937_64 rng(99);
  const SchattenOrder orders[] = {SchattenOrder::finite(1), SchattenOrder::finite(1.5), SchattenOrder::finite(2),
                                  SchattenOrder::finite(4), SchattenOrder::infinity()};
  int holder = 0, witness = 0, chain = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = 1 + rep % 4;
    const auto w = random_field(rng, d, 6, FieldKind::measure);
    const auto f = random_field(rng, d, 6, FieldKind::test);
    const auto p = orders[rep % 5];
    const auto q = p.conjugate();
    const double pr = std::fabs(pairing(w, f));
    holder += pr <= norm_sp_m(w, p) * norm_linf_sq(f, q) + 1e-9 && pr <= norm_m_sp(w, p) * norm_sq_linf(f, q) + 1e-9;
    witness += std::fabs(pairing(w, witness_field(w, p)) - norm_sp_m(w, p)) <= 1e-9 * std::max(1.0, norm_sp_m(w, p));
    const auto c = equivalence_constants(d, q);
    const double a = norm_linf_sq(f, q), b = norm_sq_linf(f, q);
    chain += c.lower * b <= a * (1 + 1e-12) && a <= c.upper * b * (1 + 1e-12);
  }
  o.require(holder == 1000, std::to_string(1000 - holder) + " pairing bound violations");
  o.require(witness == 1000, std::to_string(1000 - witness) + " witnesses short of the norm");
  o.require(chain == 1000, std::to_string(1000 - chain) + " equivalence chain violations");
  if (o.ok) o.detail = "1000 random fields";
  return o;
}

Outcome one_dimensional() {
  Outcome o;
  int equal = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = fixtures::random_mesh_1d(seed, 3 + static_cast<int>(seed % 40));
    const auto s = extract_spline_1d(m);
    equal += tv2_1d(s.breakpoints, s.slopes) == htv::htv(m, SchattenOrder::finite(1));
  }
  o.require(equal == 100, std::to_string(100 - equal) + " of 100 meshes differ");
  const auto s = relu_to_cpwl_1d(fixtures::hat_network());
  const double tv = tv2_1d(s.breakpoints, s.slopes);
  o.require(tv == 4.0, fmt("hat network gives %.17g", tv));
  const double via_mesh = htv::htv(spline_to_mesh(s, -2, 2), SchattenOrder::finite(2));
  o.require(via_mesh == 4.0, fmt("hat network mesh gives %.17g", via_mesh));
  if (o.ok) o.detail = "100 meshes equal, hat network 4";
  return o;
}

Outcome refinement_invariance() {
  Outcome o;
  double worst = 0;
  auto meshes = fixtures::all_meshes();
  meshes.push_back({"affine", fixtures::affine_2d()});
  for (const auto& [name, m] : meshes) {
    const auto r = barycentric_refinement(m);
    for (const auto& p : kOrders) {
      const double a = htv::htv(m, p), b = htv::htv(r, p);
      const double e = a == 0 ? std::fabs(b) : rel(b, a);
      worst = std::max(worst, e);
      o.require(e <= 1e-10, name + fmt(": relative change %.3g", e));
    }
  }
  if (o.ok) o.detail = std::to_string(meshes.size()) + fmt(" meshes, max relative change %.3g", worst);
  return o;
}

Outcome rbf_sweep() {
  Outcome o;
  const auto csv = std::filesystem::temp_directory_path() / "htv_acceptance_sweep.csv";
  std::ostringstream out, err;
  const int code = cli::run({"sweep-rbf", "--centers", std::string(HTV_TEST_DATA_DIR) + "/centers5.json", "--widths",
                             "0.05,0.1,0.15,0.2,0.3,0.4,0.6,0.8", "--csv", csv.string(), "--nodes", "128"},
                            out, err);
  o.require(code == 0, "sweep-rbf exited with " + std::to_string(code) + ": " + err.str());
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  o.require(line == "sigma,htv,error_estimate", "unexpected CSV header '" + line + "'");
  int rows = 0;
  while (std::getline(in, line)) {
    double s = 0, h = 0, e = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s, &h, &e) == 3 && std::isfinite(h) && h > 0) ++rows;
  }
  o.require(rows == 8, std::to_string(rows) + " valid CSV rows, expected 8");
  std::filesystem::remove(csv);

  // single bump on a box of 12 sigma: HTV does not depend on sigma in 2D
  std::vector<double> values;
  for (double sigma : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    const BoxDomain box = BoxDomain::cube(2, -6 * sigma, 6 * sigma);
    values.push_back(htv_quadrature(gaussian_bump({0, 0}, sigma), {box, {96, 96}}, SchattenOrder::finite(1)).value);
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double spread = (*hi - *lo) / *lo;
  o.require(spread <= 0.01, fmt("single-bump spread %.3g > 1%%", spread));
  if (o.ok) o.detail = fmt("8 CSV rows, single-bump spread %.3g", spread);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit;  // seconds, 0: none
  };
  const Criterion all[] = {
      {1, "affine functions have zero HTV", affine_null_space, 1},
      {2, "CPWL values do not depend on p", cpwl_p_invariance, 1},
      {3, "pyramid closed form", pyramid_closed_form, 0},
      {4, "smooth functions", sobolev_compatibility, 30},
      {5, "invariance laws", invariance_laws, 60},
      {6, "fence calculus", fence_calculus, 5},
      {7, "mixed-norm duality", mixed_norm_duality, 10},
      {8, "1D equivalence", one_dimensional, 5},
      {9, "refinement invariance", refinement_invariance, 0},
      {10, "RBF width sweep", rbf_sweep, 0},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit > 0 && secs >= c.limit) r.require(false, fmt("took %.2f s, limit %.0f s", secs, c.limit));
    failed += !r.ok;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", r.ok ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(all)) - failed, std::size(all));
  return failed == 0 ? 0 : 1;
}
