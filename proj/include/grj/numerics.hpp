#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace grj {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  /// Single column built from a vector.
  static Matrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector col(std::size_t j) const;

  const std::vector<double>& data() const noexcept { return data_; }

  Matrix transposed() const;
  /// Columns selected in the given order.
  Matrix select_cols(std::span<const std::size_t> idx) const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);
Matrix operator-(const Matrix& a, const Matrix& b);
/// aᵀ·x without forming the transpose.
Vector mul_transposed(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);
double max_abs_entry(const Matrix& m);
bool all_finite(std::span<const double> v);

/// Packed LU factors of P·A = L·U with unit-diagonal L.
struct LuFactorization {
  Matrix factors;
  std::vector<std::size_t> pivot;  // row i of P·A is row pivot[i] of A
  int sign = 1;

  std::size_t size() const noexcept { return factors.rows(); }
};

inline constexpr double kSingularPivot = 1e-12;

/// Partial-pivoting LU. Throws SingularMatrix when a pivot magnitude drops below
/// kSingularPivot.
LuFactorization lu_factor(const Matrix& m);

/// Solves A·X = rhs.
Matrix lu_solve(const LuFactorization& f, const Matrix& rhs);
Vector lu_solve(const LuFactorization& f, std::span<const double> rhs);
/// Solves Aᵀ·X = rhs.
Matrix lu_solve_transposed(const LuFactorization& f, const Matrix& rhs);
Vector lu_solve_transposed(const LuFactorization& f, std::span<const double> rhs);

/// Lower and upper factors unpacked, mostly for tests.
Matrix lu_lower(const LuFactorization& f);
Matrix lu_upper(const LuFactorization& f);

using VectorMap = std::function<Vector(const Vector&)>;

inline constexpr double kDefaultFdStep = 1e-6;

/// Central-difference Jacobian; entry (j, i) = (map_j(x + h e_i) - map_j(x - h e_i)) / 2h.
Matrix finite_diff_jacobian(const VectorMap& map, const Vector& x, double h = kDefaultFdStep);

}  // namespace grj
