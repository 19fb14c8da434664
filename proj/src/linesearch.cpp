#include "grj/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "grj/error.hpp"

namespace grj {

double max_feasible_step(std::span<const double> xn, std::span<const double> d_n,
                         std::span<const double> lower_n, std::span<const double> upper_n) {
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d_n.size(); ++i) {
    if (d_n[i] < 0.0) {
      t = std::min(t, (lower_n[i] - xn[i]) / d_n[i]);
    } else if (d_n[i] > 0.0) {
      t = std::min(t, (upper_n[i] - xn[i]) / d_n[i]);
    }
  }
  if (std::isinf(t)) throw Error(ErrorCode::ZeroDirection, "max_feasible_step");
  return t;
}

namespace {

// Nonbasic trial point x_N + t d_N, clamped to the box. On the first trial the
// blocking components land exactly on their bounds.
Vector trial_nonbasics(const Vector& xn, const Vector& d_n, const Vector& lo, const Vector& hi,
                       double t, double t_max) {
  Vector out(xn.size());
  for (std::size_t i = 0; i < xn.size(); ++i) {
    out[i] = std::clamp(xn[i] + t * d_n[i], lo[i], hi[i]);
    if (t == t_max && d_n[i] != 0.0) {
      const double bound = d_n[i] < 0.0 ? lo[i] : hi[i];
      if ((bound - xn[i]) / d_n[i] == t_max) out[i] = bound;
    }
  }
  return out;
}

bool armijo_holds(const Vector& f_new, const Vector& f0, const Vector& slope, double beta,
                  double t) {
  if (!all_finite(f_new)) return false;
  for (std::size_t j = 0; j < f0.size(); ++j) {
    if (!(f_new[j] < f0[j] + beta * t * slope[j])) return false;
  }
  return true;
}

}  // namespace

StepResult armijo_search(const MopProblem& p, const Vector& x, const ReducedState& state,
                         const ReducedDirection& dir, const LineSearchOptions& opts) {
  if (!(opts.beta > 0.0 && opts.beta < 1.0))
    throw Error(ErrorCode::InvalidArgument, "Armijo constant must lie in (0, 1)");
  const BasisPartition& part = state.partition;
  const Vector xn = gather(x, part.nonbasic);
  const Vector xb = gather(x, part.basic);
  const Vector lo_n = gather(p.lower, part.nonbasic);
  const Vector hi_n = gather(p.upper, part.nonbasic);
  const Vector lo_b = gather(p.lower, part.basic);
  const Vector hi_b = gather(p.upper, part.basic);
  const Vector f0 = p.eval_f(x);
  const Vector slope = state.u_n * dir.d_n;
  const double t_max = max_feasible_step(xn, dir.d_n, lo_n, hi_n);

  StepResult res;
  double t = t_max;
  for (int halving = 0; halving <= opts.max_halvings; ++halving, t *= 0.5) {
    res.halvings = halving;
    const Vector xn_t = trial_nonbasics(xn, dir.d_n, lo_n, hi_n, t, t_max);
    if (part.basic.empty()) {
      Vector f_new = p.eval_f(xn_t);
      if (armijo_holds(f_new, f0, slope, opts.beta, t)) {
        res.t = t;
        res.x_new = {xn_t, 0.0};
        res.f_new = std::move(f_new);
        return res;
      }
      continue;
    }
    Vector y = xb;
    Vector point = assemble(part, y, xn_t);
    Vector g = p.eval_g(point);
    for (int l = 1; l <= opts.max_newton; ++l) {
      Vector step;
      try {
        const LuFactorization ab = lu_factor(p.jac_g(point).select_cols(part.basic));
        step = lu_solve(ab, g);
      } catch (const Error&) {
        break;  // singular or non-finite block: shorten the step
      }
      ++res.newton_iters;
      for (std::size_t k = 0; k < y.size(); ++k) y[k] -= step[k];
      if (!all_finite(y)) break;
      point = assemble(part, y, xn_t);
      g = p.eval_g(point);
      if (!all_finite(g)) break;
      double residual = norm_inf(g);
      if (residual < opts.eps) {
        y = polish_basics(p, part, std::move(y), xn_t);
        point = assemble(part, y, xn_t);
        g = p.eval_g(point);
        residual = norm_inf(g);
        bool inside = true;
        for (std::size_t k = 0; k < y.size(); ++k)
          inside = inside && lo_b[k] <= y[k] && y[k] <= hi_b[k];
        if (inside) {
          Vector f_new = p.eval_f(point);
          if (armijo_holds(f_new, f0, slope, opts.beta, t)) {
            res.t = t;
            res.x_new = {std::move(point), residual};
            res.f_new = std::move(f_new);
            return res;
          }
        }
        break;  // polished restoration rejected: further Newton steps repeat it
      }
    }
  }
  throw Error(ErrorCode::LineSearchFailed,
              p.name + ": no acceptable step after " + std::to_string(opts.max_halvings) +
                  " halvings");
}

}  // namespace grj
