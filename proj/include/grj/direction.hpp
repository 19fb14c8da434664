#pragma once

#include <cstddef>

#include "grj/numerics.hpp"

namespace grj {

/// Positive functional applied to bound gaps: phi(t) = 0 iff t = 0.
struct PhiChoice {
  enum class Kind { Power, Indicator };
  Kind kind = Kind::Power;
  double p = 1.0;  // exponent for Kind::Power, in (0, 1]

  static PhiChoice power(double p);
  static PhiChoice indicator() { return {Kind::Indicator, 0.0}; }

  /// Power functionals are continuous with a finite right derivative at 0 only for p = 1.
  bool convergence_grade() const { return kind == Kind::Power && p == 1.0; }
};

double phi_eval(const PhiChoice& c, double t);

/// Distances of the nonbasic variables to their bounds.
struct BoundGaps {
  Vector to_lower;
  Vector to_upper;

  std::size_t size() const noexcept { return to_lower.size(); }
};

/// Point of the unit simplex.
struct SimplexWeights {
  Vector lambda;

  static SimplexWeights uniform(std::size_t r);
};

struct ReducedDirection {
  SimplexWeights weights;
  double value = 0.0;
  Vector d_n;
  /// Frank-Wolfe gap 2f + max_j u^j.d at the returned weights.
  double gap = 0.0;
  bool certified = false;
  int iterations = 0;
};

/// f(lambda, x) = 1/2 sum_i phi(b_i - x_i) [z_i]_-^2 + phi(x_i - a_i) [z_i]_+^2, z = U_N^T lambda.
double subproblem_value(const Matrix& u_n, const BoundGaps& gaps, const SimplexWeights& lam,
                        const PhiChoice& c);

/// d_i = -phi(x_i - a_i) z_i if z_i > 0, else -phi(b_i - x_i) z_i.
Vector delta_direction(const Matrix& u_n, const BoundGaps& gaps, const SimplexWeights& lam,
                       const PhiChoice& c);

/// Gradient in lambda: -U_N delta_N(lambda).
Vector subproblem_gradient(const Matrix& u_n, const BoundGaps& gaps, const SimplexWeights& lam,
                           const PhiChoice& c);

/// Euclidean projection onto {lambda >= 0, sum lambda = 1}.
Vector project_to_simplex(std::span<const double> v);

struct SubproblemOptions {
  double tol = 1e-10;
  int max_iters = 500;
};

/// Minimizes the subproblem over the simplex. Each iteration first tries the
/// exact minimizer of the active quadratic piece and otherwise takes a
/// projected gradient step with Armijo backtracking. `certified` is set when the Frank-Wolfe gap falls to
/// tol * max(1, f); otherwise the best iterate is returned uncertified.
ReducedDirection solve_subproblem(const Matrix& u_n, const BoundGaps& gaps, const PhiChoice& c,
                                  const SubproblemOptions& opts = {});

}  // namespace grj
