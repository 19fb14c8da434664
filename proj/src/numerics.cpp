#include "grj/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "grj/error.hpp"

namespace grj {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix " + std::to_string(rows_) + "x" + std::to_string(cols_) + " given " +
                    std::to_string(data_.size()) + " entries");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> v) {
  return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

Vector Matrix::col(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
  Matrix out(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < idx.size(); ++k) out(i, k) = (*this)(i, idx[k]);
  return out;
}

bool Matrix::all_finite() const { return grj::all_finite(data_); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

Vector mul_transposed(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw Error(ErrorCode::DimensionMismatch, "transposed product");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_entry(const Matrix& m) { return norm_inf(m.data()); }

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

LuFactorization lu_factor(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "lu_factor needs a square matrix");
  if (!m.all_finite()) throw Error(ErrorCode::NonFiniteEvaluation, "lu_factor input");
  const std::size_t n = m.rows();
  LuFactorization f{m, std::vector<std::size_t>(n), 1};
  std::iota(f.pivot.begin(), f.pivot.end(), std::size_t{0});
  Matrix& a = f.factors;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (std::abs(a(p, k)) < kSingularPivot) {
      throw Error(ErrorCode::SingularMatrix, "pivot " + std::to_string(k) + " below threshold");
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.pivot[k], f.pivot[p]);
      f.sign = -f.sign;
    }
    const double inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a(i, k) * inv;
      a(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return f;
}

namespace {

void check_rhs(const LuFactorization& f, std::size_t rows) {
  if (rows != f.size()) throw Error(ErrorCode::DimensionMismatch, "lu_solve right-hand side");
}

// In-place solve of L·U·x = b for a single permuted column.
void solve_column(const Matrix& lu, Vector& x) {
  const std::size_t n = lu.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
    x[i] /= lu(i, i);
  }
}

// In-place solve of Uᵀ·Lᵀ·y = b.
void solve_column_transposed(const Matrix& lu, Vector& y) {
  const std::size_t n = lu.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) y[i] -= lu(j, i) * y[j];
    y[i] /= lu(i, i);
  }
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = i + 1; j < n; ++j) y[i] -= lu(j, i) * y[j];
}

}  // namespace

Vector lu_solve(const LuFactorization& f, std::span<const double> rhs) {
  check_rhs(f, rhs.size());
  Vector x(rhs.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rhs[f.pivot[i]];
  solve_column(f.factors, x);
  return x;
}

Matrix lu_solve(const LuFactorization& f, const Matrix& rhs) {
  check_rhs(f, rhs.rows());
  Matrix out(rhs.rows(), rhs.cols());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    const Vector x = lu_solve(f, rhs.col(j));
    for (std::size_t i = 0; i < x.size(); ++i) out(i, j) = x[i];
  }
  return out;
}

// Aᵀ = Uᵀ·Lᵀ·P, so Aᵀx = b solves Uᵀ·Lᵀ·y = b then x = Pᵀy.
Vector lu_solve_transposed(const LuFactorization& f, std::span<const double> rhs) {
  check_rhs(f, rhs.size());
  Vector y(rhs.begin(), rhs.end());
  solve_column_transposed(f.factors, y);
  Vector x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[f.pivot[i]] = y[i];
  return x;
}

Matrix lu_solve_transposed(const LuFactorization& f, const Matrix& rhs) {
  check_rhs(f, rhs.rows());
  Matrix out(rhs.rows(), rhs.cols());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    const Vector x = lu_solve_transposed(f, rhs.col(j));
    for (std::size_t i = 0; i < x.size(); ++i) out(i, j) = x[i];
  }
  return out;
}

Matrix lu_lower(const LuFactorization& f) {
  const std::size_t n = f.size();
  Matrix l = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) l(i, j) = f.factors(i, j);
  return l;
}

Matrix lu_upper(const LuFactorization& f) {
  const std::size_t n = f.size();
  Matrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) u(i, j) = f.factors(i, j);
  return u;
}

Matrix finite_diff_jacobian(const VectorMap& map, const Vector& x, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  Matrix jac;
  Vector probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const Vector plus = map(probe);
    probe[i] = x[i] - h;
    const Vector minus = map(probe);
    probe[i] = x[i];
    if (!all_finite(plus) || !all_finite(minus) || plus.size() != minus.size()) {
      throw Error(ErrorCode::NonFiniteEvaluation, "finite_diff_jacobian probe along coordinate " +
                                                      std::to_string(i));
    }
    if (i == 0) jac = Matrix(plus.size(), x.size());
    for (std::size_t j = 0; j < plus.size(); ++j) jac(j, i) = (plus[j] - minus[j]) / (2.0 * h);
  }
  return jac;
}

}  // namespace grj
