#include "grj/direction.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>
#include <string>

#include "grj/error.hpp"

namespace grj {

PhiChoice PhiChoice::power(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "phi exponent must lie in (0, 1]");
  return {Kind::Power, p};
}

double phi_eval(const PhiChoice& c, double t) {
  const double a = std::abs(t);
  if (c.kind == PhiChoice::Kind::Indicator) return a == 0.0 ? 0.0 : 1.0;
  if (c.p == 1.0) return a;
  return std::pow(a, c.p) / c.p;
}

SimplexWeights SimplexWeights::uniform(std::size_t r) {
  return {Vector(r, 1.0 / static_cast<double>(r))};
}

namespace {

struct Weighted {
  Vector w_lower;  // phi(x_i - a_i), multiplies [z_i]_+
  Vector w_upper;  // phi(b_i - x_i), multiplies [z_i]_-
};

Weighted phi_weights(const BoundGaps& gaps, const PhiChoice& c) {
  Weighted w{Vector(gaps.size()), Vector(gaps.size())};
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    w.w_lower[i] = phi_eval(c, gaps.to_lower[i]);
    w.w_upper[i] = phi_eval(c, gaps.to_upper[i]);
  }
  return w;
}

void check_dims(const Matrix& u_n, const BoundGaps& gaps, std::size_t r) {
  if (u_n.cols() != gaps.size() || gaps.to_upper.size() != gaps.size() || u_n.rows() != r)
    throw Error(ErrorCode::DimensionMismatch, "subproblem data");
}

struct Eval {
  double value = 0.0;
  Vector delta;
  Vector grad;
};

Eval eval_all(const Matrix& u_n, const Weighted& w, std::span<const double> lambda) {
  const Vector z = mul_transposed(u_n, lambda);
  Eval e{0.0, Vector(z.size()), {}};
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double weight = z[i] > 0.0 ? w.w_lower[i] : w.w_upper[i];
    e.delta[i] = -weight * z[i];
    e.value += weight * z[i] * z[i];
  }
  e.value *= 0.5;
  e.grad = u_n * e.delta;
  for (double& g : e.grad) g = -g;
  return e;
}

// 2f + max_j u^j.delta; equals grad.lambda - min_j grad_j.
double frank_wolfe_gap(const Eval& e) {
  const double min_grad = *std::min_element(e.grad.begin(), e.grad.end());
  return std::max(0.0, 2.0 * e.value - min_grad);
}

// Minimizer of the quadratic piece active at lambda, plus a small proximal
// term toward lambda, over the affine hull of the support of lambda and the
// Frank-Wolfe vertex, with the `pinned` columns held at z_i = 0, pulled back into the simplex along the segment
// from lambda. Empty when the KKT system is singular.
Vector piece_step(const Matrix& u_n, const Weighted& w, const Vector& lambda, const Eval& cur,
                  const std::vector<std::size_t>& pinned) {
  const std::size_t r = lambda.size();
  const std::size_t fw = static_cast<std::size_t>(
      std::min_element(cur.grad.begin(), cur.grad.end()) - cur.grad.begin());
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < r; ++j)
    if (lambda[j] > 0.0 || j == fw) support.push_back(j);
  const std::size_t k = pinned.size();
  const Vector z = mul_transposed(u_n, lambda);
  Vector target;
  // A zero weight that the solution would make negative leaves the support.
  while (true) {
    const std::size_t s = support.size();
    if (k + 1 > s) return {};
    const std::size_t dim = s + k + 1;
    Matrix kkt(dim, dim);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (std::find(pinned.begin(), pinned.end(), i) != pinned.end()) continue;
      const double weight = z[i] > 0.0 ? w.w_lower[i] : w.w_upper[i];
      for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b)
          kkt(a, b) += weight * u_n(support[a], i) * u_n(support[b], i);
    }
    double trace = 0.0;
    for (std::size_t a = 0; a < s; ++a) trace += kkt(a, a);
    const double prox = 1e-9 * std::max(1.0, trace);
    for (std::size_t a = 0; a < s; ++a) {
      kkt(a, a) += prox;
      for (std::size_t c = 0; c < k; ++c) {
        kkt(a, s + c) = u_n(support[a], pinned[c]);
        kkt(s + c, a) = u_n(support[a], pinned[c]);
      }
      kkt(a, s + k) = 1.0;
      kkt(s + k, a) = 1.0;
    }
    Vector rhs(dim, 0.0);
    for (std::size_t a = 0; a < s; ++a) rhs[a] = prox * lambda[support[a]];
    rhs[s + k] = 1.0;
    Vector sol;
    try {
      sol = lu_solve(lu_factor(kkt), rhs);
    } catch (const Error&) {
      return {};
    }
    if (!std::all_of(sol.begin(), sol.end(), [](double v) { return std::isfinite(v); })) return {};
    target.assign(r, 0.0);
    for (std::size_t a = 0; a < s; ++a) target[support[a]] = sol[a];
    const auto blocked = std::find_if(support.begin(), support.end(), [&](std::size_t j) {
      return lambda[j] == 0.0 && target[j] < 0.0;
    });
    if (blocked == support.end()) break;
    support.erase(blocked);
  }
  double tau = 1.0;
  for (std::size_t j = 0; j < r; ++j)
    if (target[j] < 0.0) tau = std::min(tau, lambda[j] / (lambda[j] - target[j]));
  Vector out(r);
  for (std::size_t j = 0; j < r; ++j) out[j] = std::max(0.0, lambda[j] + tau * (target[j] - lambda[j]));
  double sum = 0.0;
  for (double v : out) sum += v;
  for (double& v : out) v /= sum;
  return out;
}

// Best piece step over pinning the 0, 1, 2, ... columns with the smallest
// weighted |z_i|, which resolves iterates zig-zagging across a kink z_i = 0.
std::optional<std::pair<Vector, Eval>> best_piece_step(const Matrix& u_n, const Weighted& w,
                                                       const Vector& lambda, const Eval& cur) {
  const Vector z = mul_transposed(u_n, lambda);
  std::vector<std::size_t> order(z.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto scaled = [&](std::size_t i) {
    return std::fabs(z[i]) * std::sqrt(std::max(w.w_lower[i], w.w_upper[i]));
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scaled(a) < scaled(b); });
  std::optional<std::pair<Vector, Eval>> best;
  const double gap = frank_wolfe_gap(cur);
  for (std::size_t k = 0; k <= std::min(order.size(), lambda.size() - 1); ++k) {
    const std::vector<std::size_t> pinned(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    Vector trial = piece_step(u_n, w, lambda, cur, pinned);
    if (trial.empty() || trial == lambda) continue;
    Eval next = eval_all(u_n, w, trial);
    // Near the minimum value changes sit at rounding level; the gap decides.
    const bool improves = next.value < cur.value ||
                          (next.value <= cur.value * (1.0 + 1e-12) && frank_wolfe_gap(next) < gap);
    if (!improves) continue;
    if (!best || next.value < best->second.value ||
        (next.value == best->second.value && frank_wolfe_gap(next) < frank_wolfe_gap(best->second)))
      best.emplace(std::move(trial), std::move(next));
  }
  return best;
}

}  // namespace

double subproblem_value(const Matrix& u_n, const BoundGaps& gaps, const SimplexWeights& lam,
                        const PhiChoice& c) {
  check_dims(u_n, gaps, lam.lambda.size());
  return eval_all(u_n, phi_weights(gaps, c), lam.lambda).value;
}

Vector delta_direction(const Matrix& u_n, const BoundGaps& gaps, const SimplexWeights& lam,
                       const PhiChoice& c) {
  check_dims(u_n, gaps, lam.lambda.size());
  return eval_all(u_n, phi_weights(gaps, c), lam.lambda).delta;
}

Vector subproblem_gradient(const Matrix& u_n, const BoundGaps& gaps, const SimplexWeights& lam,
                           const PhiChoice& c) {
  check_dims(u_n, gaps, lam.lambda.size());
  return eval_all(u_n, phi_weights(gaps, c), lam.lambda).grad;
}

Vector project_to_simplex(std::span<const double> v) {
  Vector sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) theta = t;
  }
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

ReducedDirection solve_subproblem(const Matrix& u_n, const BoundGaps& gaps, const PhiChoice& c,
                                  const SubproblemOptions& opts) {
  const std::size_t r = u_n.rows();
  if (r == 0) throw Error(ErrorCode::DimensionMismatch, "subproblem needs at least one objective");
  check_dims(u_n, gaps, r);
  if (!u_n.all_finite()) throw Error(ErrorCode::NonFiniteEvaluation, "U_N");
  const Weighted w = phi_weights(gaps, c);

  Vector lambda = SimplexWeights::uniform(r).lambda;
  Eval cur = eval_all(u_n, w, lambda);
  double gap = frank_wolfe_gap(cur);
  double step = 1.0;
  Vector prev_lambda;
  Vector prev_grad;
  int it = 0;
  bool certified = gap <= opts.tol * std::max(1.0, cur.value);

  for (; !certified && it < opts.max_iters; ++it) {
    // Exact minimizer of the active quadratic piece, when it improves.
    if (auto piece = best_piece_step(u_n, w, lambda, cur)) {
      prev_lambda = std::move(lambda);
      prev_grad = std::move(cur.grad);
      lambda = std::move(piece->first);
      cur = std::move(piece->second);
      gap = frank_wolfe_gap(cur);
      certified = gap <= opts.tol * std::max(1.0, cur.value);
      continue;
    }
    // Projected gradient with a Barzilai-Borwein trial step.
    if (!prev_lambda.empty()) {
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t j = 0; j < r; ++j) {
        const double s = lambda[j] - prev_lambda[j];
        ss += s * s;
        sy += s * (cur.grad[j] - prev_grad[j]);
      }
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(step * 4.0, 1e12);
    }
    Vector trial(r);
    Eval next;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      for (std::size_t j = 0; j < r; ++j) trial[j] = lambda[j] - step * cur.grad[j];
      trial = project_to_simplex(trial);
      double decrease = 0.0;
      for (std::size_t j = 0; j < r; ++j) decrease += cur.grad[j] * (trial[j] - lambda[j]);
      next = eval_all(u_n, w, trial);
      if (next.value <= cur.value + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || trial == lambda) break;
    prev_lambda = std::move(lambda);
    prev_grad = std::move(cur.grad);
    lambda = std::move(trial);
    cur = std::move(next);
    gap = frank_wolfe_gap(cur);
    certified = gap <= opts.tol * std::max(1.0, cur.value);
  }

  ReducedDirection out;
  out.weights.lambda = std::move(lambda);
  out.value = cur.value;
  out.d_n = std::move(cur.delta);
  out.gap = gap;
  out.certified = certified;
  out.iterations = it;
  return out;
}

}  // namespace grj
