#include "htv/mixed_fields.hpp"

#include <algorithm>
#include <cmath>

#include "htv/error.hpp"

namespace htv {

namespace {

void require_nonempty(const MatrixField& f) {
  if (f.size() == 0) fail(ErrorKind::empty_field, "matrix field has no nodes");
}

// Entrywise reduction over nodes into one d x d matrix.
template <class Op>
Matrix entrywise(const MatrixField& f, Op op) {
  const int d = f.matrix_dim();
  Matrix out(d);
  std::vector<double> acc(static_cast<std::size_t>(d * d), 0.0);
  for (const Matrix& m : f.nodes())
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = op(acc[i], std::fabs(m.data()[i]));
  return Matrix(d, std::move(acc));
}

}  // namespace

MatrixField::MatrixField(BoxDomain domain, std::vector<int> resolution, std::vector<Matrix> nodes, FieldKind kind)
    : domain_(std::move(domain)), resolution_(std::move(resolution)), nodes_(std::move(nodes)), kind_(kind) {
  if (static_cast<int>(resolution_.size()) != domain_.dim())
    fail(ErrorKind::dimension_mismatch, "field resolution needs one entry per box axis");
  std::size_t count = 1;
  for (int r : resolution_) {
    if (r < 0) fail(ErrorKind::invalid_input, "field resolution must be nonnegative");
    count *= static_cast<std::size_t>(r);
  }
  if (count != nodes_.size())
    fail(ErrorKind::grid_mismatch, "field has " + std::to_string(nodes_.size()) + " nodes, grid needs " +
                                       std::to_string(count));
  for (const Matrix& m : nodes_)
    if (m.dim() != nodes_.front().dim()) fail(ErrorKind::dimension_mismatch, "field node matrices differ in size");
}

std::vector<double> MatrixField::node_position(std::size_t index) const {
  const int d = domain_.dim();
  std::vector<double> x(static_cast<std::size_t>(d));
  // last axis varies fastest
  for (int a = d - 1; a >= 0; --a) {
    const int r = resolution_[static_cast<std::size_t>(a)];
    const std::size_t i = index % static_cast<std::size_t>(r);
    index /= static_cast<std::size_t>(r);
    x[static_cast<std::size_t>(a)] =
        r == 1 ? 0.5 * (domain_.lower(a) + domain_.upper(a))
               : domain_.lower(a) + domain_.width(a) * static_cast<double>(i) / (r - 1);
  }
  return x;
}

double MatrixField::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < domain_.dim(); ++a) {
    const int r = resolution_[static_cast<std::size_t>(a)];
    if (r == 0) return 0.0;
    v *= r == 1 ? domain_.width(a) : domain_.width(a) / (r - 1);
  }
  return v;
}

MatrixField MatrixField::sample(const BoxDomain& domain, std::vector<int> resolution, FieldKind kind,
                                const std::function<Matrix(std::span<const double>)>& fn) {
  std::size_t count = 1;
  for (int r : resolution) count *= static_cast<std::size_t>(std::max(r, 0));
  MatrixField f(domain, resolution, std::vector<Matrix>(count, Matrix(1)), kind);
  const double vol = kind == FieldKind::measure ? f.cell_volume() : 1.0;
  std::vector<Matrix> nodes;
  nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) nodes.push_back(fn(f.node_position(i)) * vol);
  return MatrixField(domain, std::move(resolution), std::move(nodes), kind);
}

double norm_linf_sq(const MatrixField& f, SchattenOrder q) {
  require_nonempty(f);
  return schatten_norm(entrywise(f, [](double a, double b) { return std::max(a, b); }), q);
}

double norm_sq_linf(const MatrixField& f, SchattenOrder q) {
  require_nonempty(f);
  double m = 0.0;
  for (const Matrix& a : f.nodes()) m = std::max(m, schatten_norm(a, q));
  return m;
}

double norm_m_sp(const MatrixField& w, SchattenOrder p) {
  require_nonempty(w);
  return schatten_norm(entrywise(w, [](double a, double b) { return a + b; }), p);
}

double norm_sp_m(const MatrixField& w, SchattenOrder p) {
  require_nonempty(w);
  double s = 0.0;
  for (const Matrix& a : w.nodes()) s += schatten_norm(a, p);
  return s;
}

double pairing(const MatrixField& w, const MatrixField& f) {
  if (w.domain() != f.domain() || w.resolution() != f.resolution() || w.size() != f.size())
    fail(ErrorKind::grid_mismatch, "pairing needs fields on the same grid");
  if (w.kind() != FieldKind::measure || f.kind() != FieldKind::test)
    fail(ErrorKind::invalid_input, "pairing takes a measure field and a test field");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += inner_product(w.nodes()[i], f.nodes()[i]);
  return s;
}

MatrixField witness_field(const MatrixField& w, SchattenOrder p) {
  require_nonempty(w);
  std::vector<Matrix> nodes;
  nodes.reserve(w.size());
  for (const Matrix& a : w.nodes()) nodes.push_back(a.is_zero() ? Matrix(a.dim()) : duality_witness(a, p));
  return MatrixField(w.domain(), w.resolution(), std::move(nodes), FieldKind::test);
}

EquivalenceConstants equivalence_constants(int d, SchattenOrder q) {
  if (d < 1) fail(ErrorKind::invalid_input, "dimension must be >= 1");
  const double inv_q = q.is_infinite() ? 0.0 : 1.0 / q.value();
  const double dd = d;
  // c1 ||A||_sum <= ||A||_Sq <= c2 ||A||_sum
  const double c1 = std::pow(dd, std::min(0.0, inv_q - 0.5)) / dd;
  const double c2 = std::pow(dd, std::max(0.0, inv_q - 0.5));
  return {c1 / c2, c2 / c1 * dd * dd};
}

}  // namespace htv
