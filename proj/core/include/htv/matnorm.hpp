#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace htv {

// Square dense matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int dim);
  Matrix(int dim, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int dim);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix outer(std::span<const double> u, std::span<const double> v);

  int dim() const noexcept { return dim_; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * dim_ + j)]; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * dim_ + j)]; }
  std::span<const double> data() const noexcept { return a_; }

  Matrix transpose() const;
  double trace() const;
  bool is_zero() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

// Schatten order p in [1, inf]; infinity is a separate state, not a big float.
class SchattenOrder {
 public:
  static SchattenOrder finite(double p);
  static SchattenOrder infinity() noexcept;
  // Accepts a decimal number >= 1, "inf", "infinity" or "∞".
  static SchattenOrder parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  // +inf for the infinite order.
  double value() const noexcept;
  SchattenOrder conjugate() const;
  std::string to_string() const;

  friend bool operator==(const SchattenOrder&, const SchattenOrder&) = default;

 private:
  SchattenOrder(double p, bool infinite) : p_(p), infinite_(infinite) {}
  double p_;
  bool infinite_;
};

struct SingularSpectrum {
  std::vector<double> values;  // nonincreasing
};

// m = U diag(sigma) V^T with orthonormal U and V; sigma nonincreasing.
struct Svd {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

constexpr int kMaxMatrixDim = 16;

Svd svd(const Matrix& m);
SingularSpectrum singular_values(const Matrix& m);
double schatten_norm(const Matrix& m, SchattenOrder p);
double schatten_norm(std::span<const double> spectrum, SchattenOrder p);
double inner_product(const Matrix& a, const Matrix& b);
Matrix duality_witness(const Matrix& m, SchattenOrder p);

}  // namespace htv
