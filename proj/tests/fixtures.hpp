#pragma once

// Small hand-built problems shared by the unit tests.

#include <string>

#include "grj/problem.hpp"

namespace fixture {

using grj::Matrix;
using grj::MopProblem;
using grj::Vector;

// Objectives given by a constant Jacobian c (r x n): F(x) = c x.
// Equalities a x = rhs with constant a (m x n). Box [lo, hi].
inline MopProblem affine(std::string name, const Matrix& c, const Matrix& a, const Vector& rhs,
                         const Vector& lo, const Vector& hi) {
  MopProblem p;
  p.name = std::move(name);
  p.n = lo.size();
  p.r = c.rows();
  p.m = a.rows();
  p.lower = lo;
  p.upper = hi;
  p.eval_f = [c](const Vector& x) { return c * x; };
  p.jac_f = [c](const Vector&) { return c; };
  p.eval_g = [a, rhs](const Vector& x) {
    Vector g = a * x;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= rhs[i];
    return g;
  };
  p.jac_g = [a](const Vector&) { return a; };
  return p;
}

// F = (-x2, -x1 - 3 x2) on x1 + x2 = 1, box [0, 1]^2. With B = {x1} the
// reduced Jacobian is U_N = [-1; -2], so both objectives decrease along +x2.
inline MopProblem descent_affine() {
  return affine("descent_affine", Matrix(2, 2, {0, -1, -1, -3}), Matrix(1, 2, {1, 1}), {1.0},
                {0.0, 0.0}, {1.0, 1.0});
}

// descent_affine with x2 <= 0.8, so the descent stops at (0.2, 0.8) where x1
// is interior and a basis exists.
inline MopProblem capped_descent_affine() {
  return affine("capped_descent_affine", Matrix(2, 2, {0, -1, -1, -3}), Matrix(1, 2, {1, 1}), {1.0},
                {0.0, 0.0}, {1.0, 0.8});
}

// One quadratic objective sum (x_i - t_i)^2 with no equalities.
inline MopProblem unconstrained_quadratic(const Vector& target, const Vector& lo, const Vector& hi) {
  MopProblem p;
  p.name = "quadratic";
  p.n = target.size();
  p.r = 1;
  p.m = 0;
  p.lower = lo;
  p.upper = hi;
  p.eval_f = [target](const Vector& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - target[i]) * (x[i] - target[i]);
    return Vector{s};
  };
  p.jac_f = [target](const Vector& x) {
    Matrix j(1, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) j(0, i) = 2.0 * (x[i] - target[i]);
    return j;
  };
  p.eval_g = [](const Vector&) { return Vector{}; };
  p.jac_g = [n = target.size()](const Vector&) { return Matrix(0, n); };
  return p;
}

}  // namespace fixture
