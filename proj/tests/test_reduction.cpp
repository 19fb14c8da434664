#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "grj/error.hpp"
#include "grj/reduction.hpp"
#include "grj/suite.hpp"
#include "oracles.hpp"

using namespace grj;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::Io;
}

MopProblem simplex_line() {
  return fixture::affine("line", Matrix(1, 2, {1, 0}), Matrix(1, 2, {1, 1}), {1.4}, {0.0, 0.0},
                         {1.0, 1.0});
}

}  // namespace

TEST_CASE("basis selection prefers the larger margin") {
  const BasisPartition part = select_basis(simplex_line(), {0.5, 0.9});
  CHECK(part.basic == std::vector<std::size_t>{0});
  CHECK(part.nonbasic == std::vector<std::size_t>{1});

  const BasisPartition el3 = select_basis(make_el3(), {0.6, 0.8});
  CHECK(el3.basic == std::vector<std::size_t>{0});
  CHECK(el3.nonbasic == std::vector<std::size_t>{1});
  // Deterministic on repetition.
  CHECK(select_basis(make_el3(), {0.6, 0.8}) == el3);
}

TEST_CASE("basis selection failures") {
  CHECK(code_of([] { select_basis(make_el3(), {1.0, 0.0}); }) == ErrorCode::NoNondegenerateBasis);
  CHECK(code_of([] { select_basis(simplex_line(), {0.0, 1.0}); }) ==
        ErrorCode::NoNondegenerateBasis);
  // Columns with margin but dependent on each other.
  const MopProblem dup = fixture::affine("dup", Matrix(1, 3, {1, 0, 0}),
                                         Matrix(2, 3, {1, 1, 0, 2, 2, 0}), {1.0, 2.0},
                                         {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  CHECK(code_of([&] { select_basis(dup, {0.5, 0.5, 0.5}); }) == ErrorCode::RankDeficientJacobian);
  // Full rank overall, but the only column for row 2 sits on a bound.
  const MopProblem pinned = fixture::affine("pinned", Matrix(1, 3, {1, 0, 0}),
                                            Matrix(2, 3, {1, 1, 0, 0, 0, 1}), {1.0, 0.0},
                                            {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  CHECK(code_of([&] { select_basis(pinned, {0.5, 0.5, 0.0}); }) ==
        ErrorCode::NoNondegenerateBasis);
}

TEST_CASE("basis margins are positive and the block is invertible") {
  const MopProblem p = slackify(make_disc_brake());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FeasiblePoint s = feasible_start(p, seed);
    const BasisPartition part = select_basis(p, s.x);
    CHECK(part.basic.size() == p.m);
    CHECK(part.basic.size() + part.nonbasic.size() == p.n);
    for (std::size_t i : part.basic) CHECK(interiority_margin(p, s.x, i) > kDefaultMarginTol);
    CHECK_FALSE(is_degenerate(p, s.x, part));
    CHECK_NOTHROW(lu_factor(p.jac_g(s.x).select_cols(part.basic)));
  }
}

TEST_CASE("degeneracy test") {
  const MopProblem p = simplex_line();
  const BasisPartition part{{0}, {1}};
  CHECK_FALSE(is_degenerate(p, {0.5, 0.9}, part));
  CHECK(is_degenerate(p, {1.0, 0.4}, part));
  CHECK(is_degenerate(p, {1.0 - 1e-9, 0.4}, part));
}

TEST_CASE("reduced Jacobian of affine data") {
  const MopProblem p = fixture::affine("aff", Matrix(2, 2, {1, 1, 1, -1}), Matrix(1, 2, {1, 1}),
                                       {1.0}, {0.0, 0.0}, {1.0, 1.0});
  const ReducedState st = reduced_jacobian(p, {0.4, 0.6}, {{0}, {1}});
  CHECK(st.u_n.rows() == 2);
  CHECK(st.u_n.cols() == 1);
  CHECK(st.u_n(0, 0) == doctest::Approx(0.0));
  CHECK(st.u_n(1, 0) == doctest::Approx(-2.0));

  const ReducedState d = reduced_jacobian(fixture::descent_affine(), {0.5, 0.5}, {{0}, {1}});
  CHECK(d.u_n(0, 0) == doctest::Approx(-1.0));
  CHECK(d.u_n(1, 0) == doctest::Approx(-2.0));
}

TEST_CASE("reduced Jacobian without equalities is JF") {
  const MopProblem p = fixture::unconstrained_quadratic({0.2, 0.7}, {0.0, 0.0}, {1.0, 1.0});
  const Vector x{0.5, 0.5};
  const BasisPartition part = select_basis(p, x);
  CHECK(part.basic.empty());
  const ReducedState st = reduced_jacobian(p, x, part);
  CHECK(max_abs_entry(st.u_n - p.jac_f(x)) == 0.0);
}

TEST_CASE("EL3 reduced Jacobian matches the restored-map derivative") {
  const MopProblem p = make_el3();
  const Vector x{0.6, 0.8};
  const BasisPartition part = select_basis(p, x);
  const ReducedState st = reduced_jacobian(p, x, part);
  const Matrix fd = oracle::reduced_jacobian_fd(p, part.basic, part.nonbasic, x);
  CHECK(max_abs_entry(st.u_n - fd) <= 1e-5);
}

TEST_CASE("JF d equals U_N d_N along the tangent direction") {
  std::mt19937_64 rng(9);
  const MopProblem p = slackify(make_welded_beam());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FeasiblePoint s = feasible_start(p, seed);
    const BasisPartition part = select_basis(p, s.x);
    const ReducedState st = reduced_jacobian(p, s.x, part);
    const Matrix dn_m = oracle::random_matrix(rng, part.nonbasic.size(), 1);
    const Vector d_n = dn_m.col(0);
    const Vector d_b = basic_direction(p, s.x, st, d_n);
    const Vector d = assemble(part, d_b, d_n);
    const Vector lhs = p.jac_f(s.x) * d;
    const Vector rhs = st.u_n * d_n;
    for (std::size_t j = 0; j < p.r; ++j)
      CHECK(std::fabs(lhs[j] - rhs[j]) <= 1e-9 * std::max(1.0, std::fabs(rhs[j])));
    // The direction is tangent: JG d = 0.
    CHECK(norm_inf(p.jac_g(s.x) * d) <= 1e-9 * std::max(1.0, max_abs_entry(p.jac_g(s.x))));
  }
}

TEST_CASE("gather and assemble are inverse") {
  const BasisPartition part{{2, 0}, {1, 3}};
  const Vector x{1, 2, 3, 4};
  const Vector xb = gather(x, part.basic);
  CHECK(xb == Vector{3, 1});
  CHECK(assemble(part, xb, gather(x, part.nonbasic)) == x);
}

TEST_CASE("Newton restoration on EL3") {
  const MopProblem p = make_el3();
  const BasisPartition part{{0}, {1}};
  // First Newton step from 1 at x2 = 0.6: 1 - (1 + 0.36 - 1) / 2 = 0.82.
  const Vector one = restore_basics(p, part, {1.0}, {0.6}, 0.1, 1);
  CHECK(one[0] == doctest::Approx(0.82));
  const Vector y = restore_basics(p, part, {1.0}, {0.6});
  CHECK(std::fabs(y[0] - 0.8) <= 1e-7);
  CHECK(std::fabs(y[0] * y[0] + 0.36 - 1.0) < 1e-6);
  CHECK(code_of([&] { restore_basics(p, part, {1.0}, {2.0}); }) == ErrorCode::NewtonDiverged);
  CHECK(code_of([&] { restore_basics(p, part, {1.0, 2.0}, {0.6}); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("Newton is exact on affine constraints") {
  const MopProblem p = simplex_line();
  const Vector y = restore_basics(p, {{0}, {1}}, {0.0}, {0.9}, 1e-12, 1);
  CHECK(y[0] == doctest::Approx(0.5));
}

TEST_CASE("Newton reports a singular basic block") {
  const MopProblem p = make_el3();
  // A_B = 2 x1 vanishes at x1 = 0.
  CHECK(code_of([&] { restore_basics(p, {{0}, {1}}, {0.0}, {0.5}); }) == ErrorCode::SingularMatrix);
}

TEST_CASE("polishing never increases the residual") {
  const MopProblem p = make_el3();
  const BasisPartition part{{0}, {1}};
  const Vector rough{0.8 + 1e-4};
  const double before = std::fabs(p.eval_g(assemble(part, rough, Vector{0.6}))[0]);
  const Vector y = polish_basics(p, part, rough, {0.6});
  const double after = std::fabs(p.eval_g(assemble(part, y, Vector{0.6}))[0]);
  CHECK(after < before);
  CHECK(after <= 1e-14);
}
