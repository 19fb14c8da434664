#pragma once

#include <cstddef>
#include <vector>

#include "grj/numerics.hpp"
#include "grj/problem.hpp"

namespace grj {

inline constexpr double kDefaultMarginTol = 1e-8;

/// Split of the variable indices into basics B (|B| = m) and nonbasics N.
struct BasisPartition {
  std::vector<std::size_t> basic;
  std::vector<std::size_t> nonbasic;

  bool operator==(const BasisPartition&) const = default;
};

/// Factorized A_B(x) together with the generalized reduced Jacobian
/// U_N(x) = JF_N(x) - JF_B(x) A_B(x)^-1 A_N(x), one row per objective.
struct ReducedState {
  BasisPartition partition;
  LuFactorization ab_factor;
  Matrix u_n;
};

/// min(x_i - a_i, b_i - x_i).
double interiority_margin(const MopProblem& p, const Vector& x, std::size_t i);

/// Greedy basis: columns sorted by interiority margin (descending, ties by index),
/// each accepted only while the basic block stays numerically nonsingular.
/// Throws NoNondegenerateBasis or RankDeficientJacobian.
BasisPartition select_basis(const MopProblem& p, const Vector& x,
                            double margin_tol = kDefaultMarginTol);

/// True when some basic variable is within margin_tol of a bound.
bool is_degenerate(const MopProblem& p, const Vector& x, const BasisPartition& part,
                   double margin_tol = kDefaultMarginTol);

ReducedState reduced_jacobian(const MopProblem& p, const Vector& x, const BasisPartition& part);

/// Basic direction d_B = -A_B^-1 A_N d_N for a nonbasic direction.
Vector basic_direction(const MopProblem& p, const Vector& x, const ReducedState& state,
                       std::span<const double> d_n);

/// Scatters basic and nonbasic values into a full vector.
Vector assemble(const BasisPartition& part, std::span<const double> xb, std::span<const double> xn);
Vector gather(std::span<const double> x, std::span<const std::size_t> idx);

/// Up to max_extra further Newton steps, each kept only if it lowers ||G||_inf.
Vector polish_basics(const MopProblem& p, const BasisPartition& part, Vector y,
                     const Vector& xn, int max_extra = 3);

/// Newton iteration y <- y - A_B(y, xn)^-1 G(y, xn), refactorizing every step.
/// Returns y with ||G(y, xn)||_inf < eps. Throws NewtonDiverged or SingularBasis
/// (reported as SingularMatrix).
Vector restore_basics(const MopProblem& p, const BasisPartition& part, const Vector& xb_init,
                      const Vector& xn, double eps = kFeasibilityTol, int max_newton = 200);

}  // namespace grj
