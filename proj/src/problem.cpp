#include "grj/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "grj/error.hpp"
#include "grj/reduction.hpp"

namespace grj {

void MopProblem::validate() const {
  auto fail = [this](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, name + ": " + what);
  };
  if (n == 0 || r == 0) fail("need at least one variable and one objective");
  if (m >= n) fail("equality count must be below variable count");
  if (lower.size() != n || upper.size() != n) fail("bound vectors must have n entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i]))
      fail("bounds must be finite with lower < upper at index " + std::to_string(i));
  }
  if (!eval_f || !eval_g || !jac_f || !jac_g) fail("missing callable");
}

MopProblem slackify(const RawProblem& raw, double slack_upper) {
  const std::size_t n = raw.n;
  const std::size_t e = raw.e;
  const std::size_t q = raw.q;
  Vector bounds = raw.slack_uppers.empty() ? Vector(q, slack_upper) : raw.slack_uppers;
  if (bounds.size() != q) throw Error(ErrorCode::DimensionMismatch, raw.name + ": slack bounds");
  for (double b : bounds)
    if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::NonPositiveSlackBound, raw.name);

  MopProblem p;
  p.name = raw.name;
  p.n = n + q;
  p.r = raw.r;
  p.m = e + q;
  p.lower = raw.lower;
  p.upper = raw.upper;
  p.lower.resize(n + q, 0.0);
  p.upper.insert(p.upper.end(), bounds.begin(), bounds.end());

  auto head = [n](const Vector& x) { return Vector(x.begin(), x.begin() + static_cast<long>(n)); };

  p.eval_f = [f = raw.eval_f, head](const Vector& x) { return f(head(x)); };
  p.jac_f = [jf = raw.jac_f, head, n, q, r = raw.r](const Vector& x) {
    const Matrix j = jf(head(x));
    Matrix out(r, n + q);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < n; ++b) out(a, b) = j(a, b);
    return out;
  };
  p.eval_g = [raw, head, n, e, q](const Vector& x) {
    const Vector xo = head(x);
    Vector g(e + q);
    if (e > 0) {
      const Vector ev = raw.eval_e(xo);
      std::copy(ev.begin(), ev.end(), g.begin());
    }
    if (q > 0) {
      const Vector hv = raw.eval_h(xo);
      for (std::size_t k = 0; k < q; ++k) g[e + k] = hv[k] + x[n + k];
    }
    return g;
  };
  p.jac_g = [raw, head, n, e, q](const Vector& x) {
    const Vector xo = head(x);
    Matrix out(e + q, n + q);
    if (e > 0) {
      const Matrix je = raw.jac_e(xo);
      for (std::size_t a = 0; a < e; ++a)
        for (std::size_t b = 0; b < n; ++b) out(a, b) = je(a, b);
    }
    if (q > 0) {
      const Matrix jh = raw.jac_h(xo);
      for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = 0; b < n; ++b) out(e + a, b) = jh(a, b);
        out(e + a, n + a) = 1.0;
      }
    }
    return out;
  };
  if (q > 0) {
    p.warm_start = [h = raw.eval_h, head, n, q, bounds](const Vector& x) {
      Vector y = x;
      const Vector hv = h(head(x));
      for (std::size_t k = 0; k < q; ++k) {
        const double s = std::isfinite(hv[k]) ? -hv[k] : 0.0;
        y[n + k] = std::clamp(s, 0.0, bounds[k]);
      }
      return y;
    };
  }
  return p;
}

MopProblem with_finite_difference_jacobians(MopProblem p, double h) {
  p.jac_f = [f = p.eval_f, h](const Vector& x) { return finite_diff_jacobian(f, x, h); };
  p.jac_g = [g = p.eval_g, h, m = p.m, n = p.n](const Vector& x) {
    if (m == 0) return Matrix(0, n);
    return finite_diff_jacobian(g, x, h);
  };
  return p;
}

bool in_box(const MopProblem& p, const Vector& x, double tol) {
  if (x.size() != p.n) return false;
  for (std::size_t i = 0; i < p.n; ++i) {
    if (x[i] < p.lower[i] - tol || x[i] > p.upper[i] + tol) return false;
  }
  return true;
}

Evaluation evaluate(const MopProblem& p, const Vector& x) {
  if (x.size() != p.n) throw Error(ErrorCode::DimensionMismatch, p.name + ": point size");
  if (!in_box(p, x)) throw Error(ErrorCode::OutOfBox, p.name);
  Evaluation ev{p.eval_f(x), p.eval_g(x)};
  if (!all_finite(ev.objectives) || !all_finite(ev.constraints))
    throw Error(ErrorCode::NonFiniteEvaluation, p.name);
  return ev;
}

FeasiblePoint feasible_start(const MopProblem& p, std::uint64_t seed, int max_attempts,
                             const RestoreOptions& restore) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vector x(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
      std::uniform_real_distribution<double> dist(p.lower[i], p.upper[i]);
      x[i] = dist(rng);
    }
    if (p.warm_start) x = p.warm_start(x);
    if (p.m == 0) {
      const Vector f = p.eval_f(x);
      if (all_finite(f)) return {x, 0.0};
      continue;
    }
    try {
      const BasisPartition part = select_basis(p, x, restore.margin_tol);
      const Vector xn = gather(x, part.nonbasic);
      const Vector xb = polish_basics(
          p, part, restore_basics(p, part, gather(x, part.basic), xn, restore.eps, restore.max_newton),
          xn);
      Vector y = assemble(part, xb, xn);
      if (!in_box(p, y, 0.0)) continue;
      const Vector g = p.eval_g(y);
      const Vector f = p.eval_f(y);
      if (!all_finite(f)) continue;
      const double res = norm_inf(g);
      if (res <= restore.eps) return {std::move(y), res};
    } catch (const Error&) {
      // singular basis, divergent Newton or bad evaluation: draw again
    }
  }
  throw Error(ErrorCode::NoFeasiblePointFound,
              p.name + " after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace grj
