#include "htv/matnorm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "htv/error.hpp"

namespace htv {

namespace {

void check_dim(int dim) {
  if (dim < 1) fail(ErrorKind::invalid_input, "matrix dimension must be >= 1");
}

void check_same(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim())
    fail(ErrorKind::dimension_mismatch,
         "matrix dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

}  // namespace

Matrix::Matrix(int dim) : dim_(dim) {
  check_dim(dim);
  a_.assign(static_cast<std::size_t>(dim * dim), 0.0);
}

Matrix::Matrix(int dim, std::vector<double> row_major) : dim_(dim), a_(std::move(row_major)) {
  check_dim(dim);
  if (a_.size() != static_cast<std::size_t>(dim * dim))
    fail(ErrorKind::invalid_input, "matrix needs " + std::to_string(dim * dim) + " entries, got " +
                                       std::to_string(a_.size()));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  dim_ = static_cast<int>(rows.size());
  check_dim(dim_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != dim_) fail(ErrorKind::invalid_input, "matrix must be square");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return m;
}

Matrix Matrix::outer(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) fail(ErrorKind::dimension_mismatch, "outer product of unequal vectors");
  Matrix m(static_cast<int>(u.size()));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) m(i, j) = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](double x) { return x == 0.0; });
}

bool Matrix::all_finite() const {
  return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
}

Matrix& Matrix::operator+=(const Matrix& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  check_same(a, b);
  const int d = a.dim();
  Matrix c(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (static_cast<int>(x.size()) != a.dim()) fail(ErrorKind::dimension_mismatch, "matrix-vector size mismatch");
  std::vector<double> y(x.size(), 0.0);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) y[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
  return y;
}

// ---- SchattenOrder

SchattenOrder SchattenOrder::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "Schatten order must be a finite number >= 1 (or infinity), got " << p;
    fail(ErrorKind::invalid_order, os.str());
  }
  return SchattenOrder(p, false);
}

SchattenOrder SchattenOrder::infinity() noexcept { return SchattenOrder(0.0, true); }

SchattenOrder SchattenOrder::parse(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "inf" || t == "infinity" || t == "+inf" || t == "\xe2\x88\x9e") return infinity();
  double p = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, p);
  if (ec != std::errc() || ptr != last || t.empty())
    fail(ErrorKind::invalid_order, "cannot read Schatten order '" + std::string(text) + "'");
  return finite(p);
}

double SchattenOrder::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : p_;
}

SchattenOrder SchattenOrder::conjugate() const {
  if (infinite_) return finite(1.0);
  if (p_ == 1.0) return infinity();
  return finite(p_ / (p_ - 1.0));
}

std::string SchattenOrder::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << p_;
  return os.str();
}

// ---- SVD (one-sided Jacobi)

Svd svd(const Matrix& m) {
  const int d = m.dim();
  if (d < 1) fail(ErrorKind::invalid_input, "empty matrix");
  if (d > kMaxMatrixDim)
    fail(ErrorKind::unsupported, "singular values supported up to dimension " + std::to_string(kMaxMatrixDim));
  if (!m.all_finite()) fail(ErrorKind::invalid_input, "matrix has non-finite entries");

  double scale = 0.0;
  for (double x : m.data()) scale = std::max(scale, std::fabs(x));

  // columns of w are rotated until mutually orthogonal
  std::vector<double> w(static_cast<std::size_t>(d * d));
  std::vector<double> v(static_cast<std::size_t>(d * d), 0.0);
  auto W = [&](int i, int j) -> double& { return w[static_cast<std::size_t>(i * d + j)]; };
  auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i * d + j)]; };
  for (int i = 0; i < d; ++i) {
    V(i, i) = 1.0;
    for (int j = 0; j < d; ++j) W(i, j) = scale > 0 ? m(i, j) / scale : 0.0;
  }

  constexpr double tol = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < d - 1; ++p)
      for (int q = p + 1; q < d; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (int i = 0; i < d; ++i) {
          alpha += W(i, p) * W(i, p);
          beta += W(i, q) * W(i, q);
          gamma += W(i, p) * W(i, q);
        }
        if (gamma == 0.0 || std::fabs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < d; ++i) {
          const double wp = W(i, p), wq = W(i, q);
          W(i, p) = c * wp - s * wq;
          W(i, q) = s * wp + c * wq;
          const double vp = V(i, p), vq = V(i, q);
          V(i, p) = c * vp - s * vq;
          V(i, q) = s * vp + c * vq;
        }
      }
    if (!rotated) break;
  }

  std::vector<double> norms(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += W(i, j) * W(i, j);
    norms[static_cast<std::size_t>(j)] = std::sqrt(s);
  }
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return norms[static_cast<std::size_t>(a)] > norms[static_cast<std::size_t>(b)];
  });

  Svd out{Matrix(d), std::vector<double>(static_cast<std::size_t>(d)), Matrix(d)};
  int filled = 0;
  for (int k = 0; k < d; ++k) {
    const int j = order[static_cast<std::size_t>(k)];
    const double nj = norms[static_cast<std::size_t>(j)];
    out.sigma[static_cast<std::size_t>(k)] = nj * scale;
    for (int i = 0; i < d; ++i) out.v(i, k) = V(i, j);
    if (nj > 0.0) {
      for (int i = 0; i < d; ++i) out.u(i, k) = W(i, j) / nj;
      filled = k + 1;
    }
  }
  // complete U for zero singular values (Gram-Schmidt on the standard basis)
  int next_basis = 0;
  for (int k = filled; k < d; ++k) {
    for (; next_basis < d; ++next_basis) {
      std::vector<double> e(static_cast<std::size_t>(d), 0.0);
      e[static_cast<std::size_t>(next_basis)] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (int c = 0; c < k; ++c) {
          double dot = 0;
          for (int i = 0; i < d; ++i) dot += out.u(i, c) * e[static_cast<std::size_t>(i)];
          for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i)] -= dot * out.u(i, c);
        }
      double n = 0;
      for (double x : e) n += x * x;
      n = std::sqrt(n);
      if (n > 1e-6) {
        for (int i = 0; i < d; ++i) out.u(i, k) = e[static_cast<std::size_t>(i)] / n;
        ++next_basis;
        break;
      }
    }
  }
  return out;
}

SingularSpectrum singular_values(const Matrix& m) { return {svd(m).sigma}; }

double schatten_norm(std::span<const double> s, SchattenOrder p) {
  double mx = 0.0;
  for (double x : s) mx = std::max(mx, x);
  if (p.is_infinite() || mx == 0.0) return mx;
  const double pv = p.value();
  double acc = 0.0;
  if (pv == 1.0) {
    for (double x : s) acc += x;
    return acc;
  }
  for (double x : s) acc += std::pow(x / mx, pv);
  return mx * std::pow(acc, 1.0 / pv);
}

double schatten_norm(const Matrix& m, SchattenOrder p) {
  const auto s = singular_values(m);
  return schatten_norm(s.values, p);
}

double inner_product(const Matrix& a, const Matrix& b) {
  check_same(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

Matrix duality_witness(const Matrix& m, SchattenOrder p) {
  if (m.is_zero()) fail(ErrorKind::undefined_witness, "duality witness of the zero matrix is undefined");
  const Svd s = svd(m);
  const int d = m.dim();
  const double cut = 1e-12 * s.sigma[0];
  std::vector<double> coef(static_cast<std::size_t>(d), 0.0);
  if (p.is_infinite()) {
    coef[0] = 1.0;
  } else if (p.value() == 1.0) {
    for (int k = 0; k < d; ++k) coef[static_cast<std::size_t>(k)] = s.sigma[static_cast<std::size_t>(k)] > cut ? 1.0 : 0.0;
  } else {
    const double norm = schatten_norm(s.sigma, p);
    for (int k = 0; k < d; ++k) {
      const double sk = s.sigma[static_cast<std::size_t>(k)];
      coef[static_cast<std::size_t>(k)] = sk > cut ? std::pow(sk / norm, p.value() - 1.0) : 0.0;
    }
  }
  Matrix f(d);
  for (int k = 0; k < d; ++k) {
    const double c = coef[static_cast<std::size_t>(k)];
    if (c == 0.0) continue;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) f(i, j) += c * s.u(i, k) * s.v(j, k);
  }
  return f;
}

}  // namespace htv
