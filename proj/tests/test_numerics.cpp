#include <doctest.h>

#include <cmath>
#include <random>

#include "grj/error.hpp"
#include "grj/numerics.hpp"
#include "oracles.hpp"

using namespace grj;

namespace {

Matrix permuted(const Matrix& a, const std::vector<std::size_t>& pivot) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(pivot[i], j);
  return out;
}

Matrix well_conditioned(std::mt19937_64& rng, std::size_t n) {
  Matrix a = oracle::random_matrix(rng, n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
  return a;
}

}  // namespace

TEST_CASE("matrix basics") {
  const Matrix a(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a(1, 2) == 6);
  CHECK(a.col(1) == Vector{2, 5});
  const Matrix t = a.transposed();
  CHECK(t.rows() == 3);
  CHECK(t(2, 1) == 6);
  const std::vector<std::size_t> idx{2, 0};
  const Matrix s = a.select_cols(idx);
  CHECK(s(0, 0) == 3);
  CHECK(s(1, 1) == 4);
  CHECK((a * Vector{1, 1, 1}) == Vector{6, 15});
  CHECK(mul_transposed(a, Vector{1, 1}) == Vector{5, 7, 9});
  const Matrix p = a * t;
  CHECK(p(0, 0) == 14);
  CHECK(p(1, 1) == 77);
  CHECK(max_abs_entry(a - a) == 0.0);
  CHECK(Matrix::identity(3)(1, 1) == 1.0);
  CHECK(Matrix::column(Vector{1, 2}).rows() == 2);
  CHECK_THROWS_AS(Matrix(2, 2, {1, 2, 3}), Error);
  CHECK_THROWS_AS(a * a, Error);
}

TEST_CASE("vector helpers") {
  CHECK(dot(Vector{1, 2}, Vector{3, 4}) == 11);
  CHECK(norm2(Vector{3, 4}) == 5);
  CHECK(norm_inf(Vector{-7, 4}) == 7);
  CHECK(all_finite(Vector{1, 2}));
  CHECK_FALSE(all_finite(Vector{1, NAN}));
  CHECK_FALSE(Matrix(1, 1, {INFINITY}).all_finite());
}

TEST_CASE("lu of the identity") {
  const LuFactorization f = lu_factor(Matrix::identity(2));
  CHECK(f.pivot == std::vector<std::size_t>{0, 1});
  CHECK(max_abs_entry(lu_lower(f) - Matrix::identity(2)) == 0.0);
  CHECK(max_abs_entry(lu_upper(f) - Matrix::identity(2)) == 0.0);
  CHECK(lu_solve(f, Vector{3, 5}) == Vector{3, 5});
}

TEST_CASE("lu of a permutation swaps rows") {
  const Matrix a(2, 2, {0, 1, 1, 0});
  const LuFactorization f = lu_factor(a);
  CHECK(f.pivot == std::vector<std::size_t>{1, 0});
  CHECK(f.sign == -1);
  CHECK(max_abs_entry(lu_lower(f) * lu_upper(f) - permuted(a, f.pivot)) == 0.0);
}

TEST_CASE("singular and malformed inputs") {
  CHECK_THROWS_WITH_AS(lu_factor(Matrix(2, 2, {1, 2, 2, 4})), doctest::Contains("pivot"), Error);
  try {
    lu_factor(Matrix(2, 2, {1, 2, 2, 4}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
  CHECK_THROWS_AS(lu_factor(Matrix(2, 3)), Error);
  const LuFactorization f = lu_factor(Matrix::identity(2));
  try {
    lu_solve(f, Vector{1, 2, 3});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("diagonal solve") {
  const LuFactorization f = lu_factor(Matrix(2, 2, {2, 0, 0, 4}));
  const Vector x = lu_solve(f, Vector{2, 4});
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 1.0);
}

TEST_CASE("randomized reconstruction and solve residuals") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 20);
    const Matrix a = well_conditioned(rng, n);
    const LuFactorization f = lu_factor(a);
    const double rel = max_abs_entry(lu_lower(f) * lu_upper(f) - permuted(a, f.pivot)) /
                       max_abs_entry(a);
    CHECK(rel <= 1e-10);

    const Matrix b = oracle::random_matrix(rng, n, 3);
    const Matrix x = lu_solve(f, b);
    CHECK(max_abs_entry(a * x - b) / max_abs_entry(b) <= 1e-9);
    const Matrix xt = lu_solve_transposed(f, b);
    CHECK(max_abs_entry(a.transposed() * xt - b) / max_abs_entry(b) <= 1e-9);

    const Vector v = b.col(0);
    const Vector y = lu_solve_transposed(f, v);
    const Vector back = mul_transposed(a, y);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(back[i] - v[i]) <= 1e-9 * norm_inf(v));
  }
}

TEST_CASE("5x5 solve matches an independent elimination") {
  std::mt19937_64 rng(5);
  const Matrix a = well_conditioned(rng, 5);
  const Vector b{1, -2, 3, 0.5, 4};
  const Vector x = lu_solve(lu_factor(a), b);
  const Vector ref = oracle::gauss_solve(a, b);
  for (std::size_t i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  Vector res = a * x;
  for (std::size_t i = 0; i < 5; ++i) res[i] -= b[i];
  CHECK(norm2(res) / norm2(b) <= 1e-9);
}

TEST_CASE("finite difference jacobian") {
  const Matrix id = finite_diff_jacobian([](const Vector& x) { return x; }, {0.3, -1.2, 7.0});
  CHECK(max_abs_entry(id - Matrix::identity(3)) <= 1e-9);

  const Matrix j = finite_diff_jacobian(
      [](const Vector& x) { return Vector{x[0] * x[0], x[0] * x[1]}; }, {1.0, 2.0});
  CHECK(max_abs_entry(j - Matrix(2, 2, {2, 0, 2, 1})) <= 1e-6);

  const Matrix g = finite_diff_jacobian(
      [](const Vector& x) { return Vector{x[0] * x[0] + x[1] * x[1] - 1.0}; }, {0.6, 0.8});
  CHECK(max_abs_entry(g - Matrix(1, 2, {1.2, 1.6})) <= 1e-6);

  // Cubic polynomial: exact derivative up to truncation O(h^2).
  const Matrix c = finite_diff_jacobian(
      [](const Vector& x) { return Vector{x[0] * x[0] * x[1] + x[1] * x[1] * x[1]}; }, {1.5, -0.7});
  CHECK(c(0, 0) == doctest::Approx(2 * 1.5 * -0.7).epsilon(1e-6));
  CHECK(c(0, 1) == doctest::Approx(1.5 * 1.5 + 3 * 0.49).epsilon(1e-6));

  try {
    finite_diff_jacobian([](const Vector& x) { return Vector{std::log(x[0])}; }, {0.0});
    FAIL("expected NonFiniteEvaluation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteEvaluation);
  }
  CHECK_THROWS_AS(finite_diff_jacobian([](const Vector& x) { return x; }, {1.0}, 0.0), Error);
}
