#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "grj/numerics.hpp"

namespace grj {

using MatrixMap = std::function<Matrix(const Vector&)>;

inline constexpr double kFeasibilityTol = 1e-6;
inline constexpr double kBoxTol = 1e-12;
inline constexpr double kDefaultSlackUpper = 1e6;

/// min F(x) s.t. G(x) = 0, lower <= x <= upper.
struct MopProblem {
  std::string name;
  std::size_t n = 0;  // variables
  std::size_t r = 0;  // objectives
  std::size_t m = 0;  // equalities
  VectorMap eval_f;
  VectorMap eval_g;
  MatrixMap jac_f;
  MatrixMap jac_g;
  Vector lower;
  Vector upper;
  /// Optional map applied to a box sample before restoration (slack warm start).
  std::function<Vector(const Vector&)> warm_start;

  /// Throws InvalidArgument when dimensions or bounds are inconsistent.
  void validate() const;
};

/// Inequality-constrained input form: F, equalities E(x) = 0, inequalities H(x) <= 0.
struct RawProblem {
  std::string name;
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t e = 0;  // equalities
  std::size_t q = 0;  // inequalities
  VectorMap eval_f;
  VectorMap eval_e;
  VectorMap eval_h;
  MatrixMap jac_f;
  MatrixMap jac_e;
  MatrixMap jac_h;
  Vector lower;
  Vector upper;
  double slack_upper = kDefaultSlackUpper;
  /// Per-inequality slack bounds; when nonempty they replace slack_upper.
  Vector slack_uppers;
};

struct FeasiblePoint {
  Vector x;
  double constraint_residual = 0.0;
};

struct Evaluation {
  Vector objectives;
  Vector constraints;
};

/// Appends one slack per inequality: H(x) + s = 0 with 0 <= s <= slack_upper.
/// Variables are ordered (x, s); equalities are ordered (E, H + s).
MopProblem slackify(const RawProblem& raw, double slack_upper);
inline MopProblem slackify(const RawProblem& raw) { return slackify(raw, raw.slack_upper); }

/// Replaces both Jacobians with central differences. Opt-in for user problems
/// without analytic derivatives; expect roughly 1e-6 relative accuracy.
MopProblem with_finite_difference_jacobians(MopProblem p, double h = kDefaultFdStep);

bool in_box(const MopProblem& p, const Vector& x, double tol = kBoxTol);

/// Returns (F(x), G(x)). Throws OutOfBox or NonFiniteEvaluation.
Evaluation evaluate(const MopProblem& p, const Vector& x);

struct RestoreOptions {
  double eps = kFeasibilityTol;
  int max_newton = 200;
  double margin_tol = 1e-8;
};

/// Samples the box, picks a basis and Newton-restores the basics until a point
/// with ||G||_inf <= eps inside the box appears. Deterministic in `seed`.
FeasiblePoint feasible_start(const MopProblem& p, std::uint64_t seed, int max_attempts = 10000,
                             const RestoreOptions& restore = {});

}  // namespace grj
