#include "grj/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "grj/error.hpp"

namespace grj {

namespace {

// Relative residual below which a candidate column counts as dependent on the
// columns already in the basic block.
constexpr double kRankTol = 1e-6;

// Orthogonalizes `c` against `basis` (twice, for stability) and returns the
// residual norm relative to ||c||.
double relative_residual(const std::vector<Vector>& basis, Vector& c) {
  const double norm0 = norm2(c);
  if (norm0 == 0.0) return 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& q : basis) {
      const double proj = dot(q, c);
      for (std::size_t i = 0; i < c.size(); ++i) c[i] -= proj * q[i];
    }
  }
  return norm2(c) / norm0;
}

std::size_t numerical_rank(const Matrix& a) {
  std::vector<Vector> basis;
  for (std::size_t j = 0; j < a.cols() && basis.size() < a.rows(); ++j) {
    Vector c = a.col(j);
    if (relative_residual(basis, c) > kRankTol) {
      const double nrm = norm2(c);
      for (double& v : c) v /= nrm;
      basis.push_back(std::move(c));
    }
  }
  return basis.size();
}

}  // namespace

double interiority_margin(const MopProblem& p, const Vector& x, std::size_t i) {
  return std::min(x[i] - p.lower[i], p.upper[i] - x[i]);
}

BasisPartition select_basis(const MopProblem& p, const Vector& x, double margin_tol) {
  const std::size_t n = p.n;
  const std::size_t m = p.m;
  BasisPartition part;
  if (m == 0) {
    part.nonbasic.resize(n);
    std::iota(part.nonbasic.begin(), part.nonbasic.end(), std::size_t{0});
    return part;
  }
  const Matrix a = p.jac_g(x);
  if (a.rows() != m || a.cols() != n) throw Error(ErrorCode::DimensionMismatch, p.name + ": JG");
  if (!a.all_finite()) throw Error(ErrorCode::NonFiniteEvaluation, p.name + ": JG");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> margin(n);
  for (std::size_t i = 0; i < n; ++i) margin[i] = interiority_margin(p, x, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return margin[i] > margin[j]; });

  std::vector<Vector> basis;
  std::vector<char> is_basic(n, 0);
  for (std::size_t i : order) {
    if (basis.size() == m) break;
    if (!(margin[i] > margin_tol)) break;
    Vector c = a.col(i);
    if (relative_residual(basis, c) > kRankTol) {
      const double nrm = norm2(c);
      for (double& v : c) v /= nrm;
      basis.push_back(std::move(c));
      is_basic[i] = 1;
    }
  }
  if (basis.size() < m) {
    if (numerical_rank(a) < m) throw Error(ErrorCode::RankDeficientJacobian, p.name);
    throw Error(ErrorCode::NoNondegenerateBasis,
                p.name + ": only " + std::to_string(basis.size()) + " of " + std::to_string(m) +
                    " interior columns are independent");
  }
  // Basic indices keep the acceptance order; the block is nonsingular in any order.
  for (std::size_t i : order)
    if (is_basic[i]) part.basic.push_back(i);
  for (std::size_t i = 0; i < n; ++i)
    if (!is_basic[i]) part.nonbasic.push_back(i);
  return part;
}

bool is_degenerate(const MopProblem& p, const Vector& x, const BasisPartition& part,
                   double margin_tol) {
  return std::any_of(part.basic.begin(), part.basic.end(),
                     [&](std::size_t i) { return !(interiority_margin(p, x, i) > margin_tol); });
}

Vector gather(std::span<const double> x, std::span<const std::size_t> idx) {
  Vector out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = x[idx[k]];
  return out;
}

Vector assemble(const BasisPartition& part, std::span<const double> xb,
                std::span<const double> xn) {
  Vector x(part.basic.size() + part.nonbasic.size());
  for (std::size_t k = 0; k < part.basic.size(); ++k) x[part.basic[k]] = xb[k];
  for (std::size_t k = 0; k < part.nonbasic.size(); ++k) x[part.nonbasic[k]] = xn[k];
  return x;
}

ReducedState reduced_jacobian(const MopProblem& p, const Vector& x, const BasisPartition& part) {
  const Matrix jf = p.jac_f(x);
  if (jf.rows() != p.r || jf.cols() != p.n) throw Error(ErrorCode::DimensionMismatch, p.name + ": JF");
  if (!jf.all_finite()) throw Error(ErrorCode::NonFiniteEvaluation, p.name + ": JF");
  ReducedState state{part, {}, jf.select_cols(part.nonbasic)};
  if (part.basic.empty()) return state;

  const Matrix a = p.jac_g(x);
  state.ab_factor = lu_factor(a.select_cols(part.basic));
  const Matrix a_n = a.select_cols(part.nonbasic);
  const Matrix jf_b = jf.select_cols(part.basic);
  for (std::size_t j = 0; j < p.r; ++j) {
    // y = A_B^-T (JF_B row j); u^j = JF_N row j - A_N^T y
    const Vector y = lu_solve_transposed(state.ab_factor, jf_b.row(j));
    const Vector correction = mul_transposed(a_n, y);
    for (std::size_t k = 0; k < part.nonbasic.size(); ++k) state.u_n(j, k) -= correction[k];
  }
  if (!state.u_n.all_finite()) throw Error(ErrorCode::NonFiniteEvaluation, p.name + ": U_N");
  return state;
}

Vector basic_direction(const MopProblem& p, const Vector& x, const ReducedState& state,
                       std::span<const double> d_n) {
  if (state.partition.basic.empty()) return {};
  const Matrix a_n = p.jac_g(x).select_cols(state.partition.nonbasic);
  Vector d_b = lu_solve(state.ab_factor, a_n * d_n);
  for (double& v : d_b) v = -v;
  return d_b;
}

Vector polish_basics(const MopProblem& p, const BasisPartition& part, Vector y,
                     const Vector& xn, int max_extra) {
  double residual = norm_inf(p.eval_g(assemble(part, y, xn)));
  for (int it = 0; it < max_extra && residual > 0.0; ++it) {
    Vector step;
    try {
      step = lu_solve(lu_factor(p.jac_g(assemble(part, y, xn)).select_cols(part.basic)),
                      p.eval_g(assemble(part, y, xn)));
    } catch (const Error&) {
      break;
    }
    Vector next = y;
    for (std::size_t k = 0; k < y.size(); ++k) next[k] -= step[k];
    if (!all_finite(next)) break;
    const Vector g = p.eval_g(assemble(part, next, xn));
    if (!all_finite(g) || !(norm_inf(g) < residual)) break;
    residual = norm_inf(g);
    y = std::move(next);
  }
  return y;
}

Vector restore_basics(const MopProblem& p, const BasisPartition& part, const Vector& xb_init,
                      const Vector& xn, double eps, int max_newton) {
  if (xb_init.size() != part.basic.size() || xn.size() != part.nonbasic.size())
    throw Error(ErrorCode::DimensionMismatch, p.name + ": restore_basics");
  Vector y = xb_init;
  for (int it = 0;; ++it) {
    const Vector x = assemble(part, y, xn);
    const Vector g = p.eval_g(x);
    if (!all_finite(g)) throw Error(ErrorCode::NewtonDiverged, p.name + ": non-finite residual");
    if (norm_inf(g) < eps) return y;
    if (it == max_newton)
      throw Error(ErrorCode::NewtonDiverged,
                  p.name + ": no convergence in " + std::to_string(max_newton) + " steps");
    const LuFactorization ab = lu_factor(p.jac_g(x).select_cols(part.basic));
    const Vector step = lu_solve(ab, g);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] -= step[k];
    if (!all_finite(y)) throw Error(ErrorCode::NewtonDiverged, p.name + ": non-finite iterate");
  }
}

}  // namespace grj
