#include "grj/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "grj/error.hpp"
#include "grj/reduction.hpp"
#include "grj/solver.hpp"

namespace grj {

double distance_to_set(std::span<const double> y, const std::vector<Vector>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& a : set) {
    double s = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) s += (y[j] - a[j]) * (y[j] - a[j]);
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

namespace {

void check_same_dim(const Front& a, const Front& b) {
  if (a.points.empty() || b.points.empty()) return;
  if (a.points.front().size() != b.points.front().size())
    throw Error(ErrorCode::DimensionMismatch, "fronts of different objective counts");
}

}  // namespace

Front reference_front(const std::vector<Front>& fronts) {
  std::vector<Vector> all;
  std::set<Vector> seen;
  for (const Front& f : fronts)
    for (const Vector& y : f.points)
      if (seen.insert(y).second) all.push_back(y);
  if (all.empty()) throw Error(ErrorCode::EmptyUnion, "reference_front");
  Front out;
  out.points = nondominated_filter(all, Dominance::Strict);
  out.problem = fronts.front().problem;
  out.solver = "reference";
  return out;
}

double purity(const Front& fps, const Front& fp, double match_tol) {
  check_same_dim(fps, fp);
  if (fps.points.empty()) return 0.0;
  std::size_t matched = 0;
  for (const Vector& y : fps.points) {
    const bool hit = std::any_of(fp.points.begin(), fp.points.end(), [&](const Vector& z) {
      double d = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) d = std::max(d, std::abs(y[j] - z[j]));
      return d <= match_tol;
    });
    if (hit) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(fps.points.size());
}

double spread(const Front& fps, const Front& fp) {
  check_same_dim(fps, fp);
  if (fp.points.size() < 2) throw Error(ErrorCode::DegenerateReference, "spread needs |F_p| >= 2");
  if (fps.points.empty()) throw Error(ErrorCode::DegenerateReference, "empty approximation");
  const std::size_t r = fp.points.front().size();

  double extreme_sum = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    const Vector* best = &fp.points.front();
    for (const Vector& y : fp.points) {
      if (y[j] < (*best)[j]) {
        best = &y;
      } else if (y[j] == (*best)[j] && y < *best) {
        best = &y;
      }
    }
    extreme_sum += distance_to_set(*best, fps.points);
  }

  // d(y, F_ps \ {y}); the removal drops exact matches only
  Vector dist(fp.points.size());
  for (std::size_t k = 0; k < fp.points.size(); ++k) {
    const Vector& y = fp.points[k];
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& a : fps.points) {
      if (a == y) continue;
      double s = 0.0;
      for (std::size_t j = 0; j < r; ++j) s += (y[j] - a[j]) * (y[j] - a[j]);
      best = std::min(best, s);
    }
    dist[k] = std::isinf(best) ? 0.0 : std::sqrt(best);
  }
  double mean = 0.0;
  for (double d : dist) mean += d;
  mean /= static_cast<double>(dist.size());
  double deviation = 0.0;
  for (double d : dist) deviation += std::abs(d - mean);

  const double denom = extreme_sum + static_cast<double>(fp.points.size()) * mean;
  if (!(denom > 0.0)) throw Error(ErrorCode::DegenerateReference, "spread denominator is zero");
  return (extreme_sum + deviation) / denom;
}

double generational_distance(const Front& fps, const Front& fp) {
  check_same_dim(fps, fp);
  if (fps.points.empty() || fp.points.empty())
    throw Error(ErrorCode::InvalidArgument, "generational distance needs nonempty fronts");
  double sum = 0.0;
  for (const Vector& y : fps.points) {
    const double d = distance_to_set(y, fp.points);
    sum += d * d;
  }
  return std::sqrt(sum) / static_cast<double>(fps.points.size());
}

namespace {

// All index subsets of {0..n-1} with k elements, in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

double grid_value(double lo, double hi, std::size_t k, std::size_t grid) {
  if (grid == 1) return 0.5 * (lo + hi);
  if (k + 1 == grid) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid - 1);
}

}  // namespace

Front brute_force_front(const MopProblem& p, std::size_t grid_per_dim) {
  if (grid_per_dim == 0) throw Error(ErrorCode::InvalidArgument, "grid must be positive");
  const std::size_t free_dims = p.n - p.m;
  if (free_dims > 3) throw Error(ErrorCode::InvalidArgument, p.name + ": oracle needs n - m <= 3");

  std::vector<Vector> values;
  std::size_t total = 1;
  for (std::size_t d = 0; d < free_dims; ++d) total *= grid_per_dim;

  for (const std::vector<std::size_t>& nonbasic : combinations(p.n, free_dims)) {
    BasisPartition part;
    part.nonbasic = nonbasic;
    for (std::size_t i = 0; i < p.n; ++i)
      if (!std::binary_search(nonbasic.begin(), nonbasic.end(), i)) part.basic.push_back(i);
    const Vector lo_b = gather(p.lower, part.basic);
    const Vector hi_b = gather(p.upper, part.basic);
    Vector center(part.basic.size());
    for (std::size_t k = 0; k < center.size(); ++k) center[k] = 0.5 * (lo_b[k] + hi_b[k]);
    Vector warm = center;

    for (std::size_t flat = 0; flat < total; ++flat) {
      Vector xn(free_dims);
      std::size_t rest = flat;
      for (std::size_t d = 0; d < free_dims; ++d) {
        const std::size_t i = nonbasic[d];
        xn[d] = grid_value(p.lower[i], p.upper[i], rest % grid_per_dim, grid_per_dim);
        rest /= grid_per_dim;
      }
      Vector xb;
      bool ok = false;
      for (const Vector* init : {&warm, &center}) {
        try {
          xb = part.basic.empty() ? Vector{} : restore_basics(p, part, *init, xn, kFeasibilityTol, 200);
        } catch (const Error&) {
          continue;
        }
        ok = true;
        for (std::size_t k = 0; k < xb.size(); ++k) ok = ok && lo_b[k] <= xb[k] && xb[k] <= hi_b[k];
        if (ok) break;
      }
      if (!ok) continue;
      warm = xb;
      const Vector f = p.eval_f(assemble(part, xb, xn));
      if (all_finite(f)) values.push_back(f);
    }
  }
  if (values.empty()) throw Error(ErrorCode::OracleInfeasible, p.name);
  Front out;
  out.points = nondominated_filter(values, Dominance::Weak, kArchiveDedupTol);
  out.problem = p.name;
  out.solver = "oracle";
  return out;
}

double purity_measure(double purity) {
  return purity > 0.0 ? 1.0 / purity : std::numeric_limits<double>::infinity();
}

std::vector<ProfileCurve> performance_profile(const std::vector<std::string>& solvers,
                                              const std::vector<std::vector<double>>& measures) {
  if (measures.size() != solvers.size())
    throw Error(ErrorCode::DimensionMismatch, "one measure row per solver");
  const std::size_t n_problems = measures.empty() ? 0 : measures.front().size();
  for (const auto& row : measures)
    if (row.size() != n_problems) throw Error(ErrorCode::DimensionMismatch, "ragged measure table");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> ratio(solvers.size(), std::vector<double>(n_problems, inf));
  for (std::size_t q = 0; q < n_problems; ++q) {
    double best = inf;
    for (const auto& row : measures) best = std::min(best, row[q]);
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      const double m = measures[s][q];
      if (std::isinf(best) || std::isnan(m) || std::isinf(m)) continue;
      if (best == 0.0) {
        ratio[s][q] = m == 0.0 ? 1.0 : inf;
      } else {
        ratio[s][q] = m / best;
      }
    }
  }

  std::vector<ProfileCurve> curves;
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    ProfileCurve c{solvers[s], {}};
    std::vector<double> finite;
    for (double v : ratio[s])
      if (std::isfinite(v)) finite.push_back(v);
    std::sort(finite.begin(), finite.end());
    const double total = static_cast<double>(std::max<std::size_t>(n_problems, 1));
    auto rho_at = [&](double alpha) {
      return static_cast<double>(std::upper_bound(finite.begin(), finite.end(), alpha) -
                                 finite.begin()) /
             total;
    };
    c.breakpoints.emplace_back(1.0, rho_at(1.0));
    for (double v : finite) {
      if (v <= 1.0 || v == c.breakpoints.back().first) continue;
      c.breakpoints.emplace_back(v, rho_at(v));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace grj
