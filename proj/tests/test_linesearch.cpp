#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "grj/error.hpp"
#include "grj/linesearch.hpp"
#include "grj/solver.hpp"
#include "grj/suite.hpp"

using namespace grj;

namespace {

struct Setup {
  ReducedState state;
  ReducedDirection dir;
};

Setup prepare(const MopProblem& p, const Vector& x) {
  const BasisPartition part = select_basis(p, x);
  Setup s{reduced_jacobian(p, x, part), {}};
  s.dir = solve_subproblem(s.state.u_n, nonbasic_gaps(p, x, part), PhiChoice::power(1.0));
  return s;
}

// Re-checks the three acceptance tests without using the line search code.
void check_accepted(const MopProblem& p, const Vector& x, const Setup& s, const StepResult& step,
                    double beta) {
  CHECK(step.t > 0.0);
  CHECK(norm_inf(p.eval_g(step.x_new.x)) < 1e-6);
  CHECK(in_box(p, step.x_new.x, 0.0));
  const Vector f0 = p.eval_f(x);
  const Vector f1 = p.eval_f(step.x_new.x);
  CHECK(f1 == step.f_new);
  const Vector slope = s.state.u_n * s.dir.d_n;
  for (std::size_t j = 0; j < p.r; ++j) {
    CHECK(f1[j] - f0[j] < beta * step.t * slope[j]);
    CHECK(beta * step.t * slope[j] < 0.0);
  }
  // Nonbasics move linearly.
  const BasisPartition& part = s.state.partition;
  for (std::size_t k = 0; k < part.nonbasic.size(); ++k) {
    const std::size_t i = part.nonbasic[k];
    CHECK(step.x_new.x[i] == doctest::Approx(x[i] + step.t * s.dir.d_n[k]).epsilon(1e-14));
  }
}

}  // namespace

TEST_CASE("maximal feasible step") {
  CHECK(max_feasible_step(Vector{0.5}, Vector{-0.25}, Vector{0.0}, Vector{1.0}) == 2.0);
  CHECK(max_feasible_step(Vector{0.5, 0.5}, Vector{1.0, -1.0}, Vector{0.0, 0.0},
                          Vector{1.0, 1.0}) == 0.5);
  CHECK(max_feasible_step(Vector{0.0, 0.3}, Vector{2.0, 0.0}, Vector{0.0, 0.0},
                          Vector{1.0, 1.0}) == 0.5);
  try {
    max_feasible_step(Vector{0.5}, Vector{0.0}, Vector{0.0}, Vector{1.0});
    FAIL("expected ZeroDirection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDirection);
  }
}

TEST_CASE("affine problem accepts the full step") {
  const MopProblem p = fixture::descent_affine();
  const Vector x{0.7, 0.3};
  const Setup s = prepare(p, x);
  CHECK(s.state.u_n(0, 0) == doctest::Approx(-1.0));
  CHECK(s.state.u_n(1, 0) == doctest::Approx(-2.0));
  const StepResult step = armijo_search(p, x, s.state, s.dir);
  CHECK(step.halvings == 0);
  CHECK(step.newton_iters == 1);
  // x2 moves to its upper bound exactly.
  CHECK(step.x_new.x[1] == 1.0);
  CHECK(step.x_new.x[0] == doctest::Approx(0.0).scale(1.0));
  check_accepted(p, x, s, step, 0.25);
}

TEST_CASE("EL3 step below the critical arc") {
  const MopProblem p = make_el3();
  const Vector x{std::sqrt(0.96), 0.2};
  const Setup s = prepare(p, x);
  REQUIRE(s.dir.value > 0.0);
  const StepResult step = armijo_search(p, x, s.state, s.dir);
  const Vector& y = step.x_new.x;
  CHECK(std::fabs(y[0] * y[0] + y[1] * y[1] - 1.0) <= 1e-6);
  check_accepted(p, x, s, step, 0.25);
}

TEST_CASE("larger beta needs at least as many halvings") {
  const MopProblem p = make_el3();
  const Vector x{std::sqrt(0.96), 0.2};
  const Setup s = prepare(p, x);
  int previous = -1;
  for (double beta : {0.01, 0.25, 0.5, 0.9, 0.999}) {
    LineSearchOptions opts;
    opts.beta = beta;
    const StepResult step = armijo_search(p, x, s.state, s.dir, opts);
    CHECK(step.halvings >= previous);
    previous = step.halvings;
    check_accepted(p, x, s, step, beta);
  }
}

TEST_CASE("line search rejects invalid beta") {
  const MopProblem p = make_el3();
  const Vector x{std::sqrt(0.96), 0.2};
  const Setup s = prepare(p, x);
  LineSearchOptions opts;
  opts.beta = 1.0;
  CHECK_THROWS_AS(armijo_search(p, x, s.state, s.dir, opts), Error);
}

TEST_CASE("line search failure is reported") {
  // An ascent direction for both objectives can never pass the Armijo test.
  const MopProblem p = fixture::descent_affine();
  const Vector x{0.7, 0.3};
  Setup s = prepare(p, x);
  s.dir.d_n[0] = -s.dir.d_n[0];
  LineSearchOptions opts;
  opts.max_halvings = 5;
  try {
    armijo_search(p, x, s.state, s.dir, opts);
    FAIL("expected LineSearchFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LineSearchFailed);
  }
}

TEST_CASE("unconstrained problem steps without restoration") {
  const MopProblem p = fixture::unconstrained_quadratic({0.2, 0.9}, {0.0, 0.0}, {1.0, 1.0});
  const Vector x{0.6, 0.4};
  const Setup s = prepare(p, x);
  const StepResult step = armijo_search(p, x, s.state, s.dir);
  CHECK(step.newton_iters == 0);
  check_accepted(p, x, s, step, 0.25);
}
