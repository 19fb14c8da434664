#include "grj/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "grj/error.hpp"

namespace grj {

void SolverConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(beta > 0.0 && beta < 1.0)) fail("beta must lie in (0, 1)");
  if (!(stop_tol > 0.0) || !(eps > 0.0) || !(margin_tol > 0.0) || !(subproblem.tol > 0.0))
    fail("tolerances must be positive");
  if (max_outer < 0 || newton_cap < 1 || max_halvings < 0 || subproblem.max_iters < 1)
    fail("iteration caps out of range");
  if (phi.kind == PhiChoice::Kind::Power && !(phi.p > 0.0 && phi.p <= 1.0))
    fail("phi exponent must lie in (0, 1]");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::KktStationary: return "KktStationary";
    case SolveStatus::MaxOuterReached: return "MaxOuterReached";
    case SolveStatus::LineSearchFailed: return "LineSearchFailed";
    case SolveStatus::BasisFailure: return "BasisFailure";
  }
  return "Unknown";
}

BoundGaps nonbasic_gaps(const MopProblem& p, const Vector& x, const BasisPartition& part) {
  BoundGaps gaps{Vector(part.nonbasic.size()), Vector(part.nonbasic.size())};
  for (std::size_t k = 0; k < part.nonbasic.size(); ++k) {
    const std::size_t i = part.nonbasic[k];
    gaps.to_lower[k] = std::max(0.0, x[i] - p.lower[i]);
    gaps.to_upper[k] = std::max(0.0, p.upper[i] - x[i]);
  }
  return gaps;
}

KktCertificate kkt_certificate(const MopProblem& p, const Vector& x, const ReducedState& state,
                               const SimplexWeights& lam) {
  const BasisPartition& part = state.partition;
  const Matrix jf = p.jac_f(x);
  KktCertificate cert{lam, Vector(p.m, 0.0), Vector(p.n, 0.0), Vector(p.n, 0.0), 0.0, 0.0};
  Vector jac_sum = mul_transposed(jf, lam.lambda);  // JF^T lambda
  if (p.m > 0) {
    // u = -A_B^-T JF_B^T lambda
    const Vector jfb_lam = gather(jac_sum, part.basic);
    cert.u = lu_solve_transposed(state.ab_factor, jfb_lam);
    for (double& v : cert.u) v = -v;
    const Vector jg_u = mul_transposed(p.jac_g(x), cert.u);
    for (std::size_t i = 0; i < p.n; ++i) jac_sum[i] += jg_u[i];
  }
  const Vector z = mul_transposed(state.u_n, lam.lambda);
  for (std::size_t k = 0; k < part.nonbasic.size(); ++k) {
    const std::size_t i = part.nonbasic[k];
    cert.v[i] = std::max(0.0, z[k]);
    cert.w[i] = std::max(0.0, -z[k]);
  }
  double lower_term = 0.0;
  double upper_term = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    jac_sum[i] += cert.w[i] - cert.v[i];
    lower_term += cert.v[i] * (x[i] - p.lower[i]);
    upper_term += cert.w[i] * (p.upper[i] - x[i]);
  }
  cert.stationarity_residual = norm_inf(jac_sum);
  cert.complementarity_residual = std::max(std::abs(lower_term), std::abs(upper_term));
  return cert;
}

SolveResult grj_solve(const MopProblem& p, const FeasiblePoint& x0, const SolverConfig& cfg) {
  cfg.validate();
  SolveResult out;
  Vector x = x0.x;
  out.trace.push_back({0, x, p.eval_f(x), x0.constraint_residual});

  const LineSearchOptions ls{cfg.beta, cfg.eps, cfg.newton_cap, cfg.max_halvings};
  std::optional<BasisPartition> part;
  bool reselect = true;
  bool retried = false;

  for (;;) {
    TraceRecord& rec = out.trace.back();
    try {
      if (reselect || !part || is_degenerate(p, x, *part, cfg.margin_tol)) {
        BasisPartition next = select_basis(p, x, cfg.margin_tol);
        rec.basis_changed = part.has_value() && !(next == *part);
        part = std::move(next);
        reselect = false;
      }
    } catch (const Error& e) {
      out.status = SolveStatus::BasisFailure;
      out.message = e.what();
      break;
    }

    ReducedState state;
    try {
      state = reduced_jacobian(p, x, *part);
    } catch (const Error& e) {
      out.status = SolveStatus::BasisFailure;
      out.message = e.what();
      break;
    }
    const BoundGaps gaps = nonbasic_gaps(p, x, *part);
    const ReducedDirection dir = solve_subproblem(state.u_n, gaps, cfg.phi, cfg.subproblem);
    rec.value = dir.value;

    if (dir.value < cfg.stop_tol) {
      out.status = SolveStatus::KktStationary;
      out.certificate = kkt_certificate(p, x, state, dir.weights);
      break;
    }
    if (out.iterations() >= cfg.max_outer) {
      out.status = SolveStatus::MaxOuterReached;
      break;
    }

    StepResult step;
    try {
      step = armijo_search(p, x, state, dir, ls);
    } catch (const Error& e) {
      if (!retried) {
        // one forced reselection; an unchanged basis would fail identically
        retried = true;
        BasisPartition fresh;
        try {
          fresh = select_basis(p, x, cfg.margin_tol);
        } catch (const Error&) {
          fresh = *part;
        }
        if (!(fresh == *part)) {
          part = std::move(fresh);
          rec.basis_changed = true;
          continue;
        }
      }
      out.status = SolveStatus::LineSearchFailed;
      out.message = e.what();
      break;
    }
    retried = false;
    rec.step = step.t;
    rec.halvings = step.halvings;
    rec.newton_iters = step.newton_iters;
    x = std::move(step.x_new.x);
    out.trace.push_back(
        {static_cast<int>(out.trace.size()), x, std::move(step.f_new), step.x_new.constraint_residual});
  }
  out.x_final = x;
  out.f_final = out.trace.back().f;
  return out;
}

bool dominates(std::span<const double> a, std::span<const double> b, Dominance mode) {
  bool strictly_better_somewhere = false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (mode == Dominance::Strict) {
      if (!(a[j] < b[j])) return false;
    } else {
      if (a[j] > b[j]) return false;
      if (a[j] < b[j]) strictly_better_somewhere = true;
    }
  }
  return mode == Dominance::Strict ? !a.empty() : strictly_better_somewhere;
}

namespace {

std::vector<char> dominated_flags(const std::vector<Vector>& points, Dominance mode) {
  std::vector<char> flags(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size() && !flags[i]; ++j)
      flags[i] = j != i && dominates(points[j], points[i], mode);
  return flags;
}

// Sweep over points sorted by (f1, f2): a point is weakly dominated iff some
// earlier, non-identical point has f2 no larger.
std::vector<char> weakly_dominated_2d(const std::vector<Vector>& points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<char> flags(points.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end < order.size() && points[order[end]] == points[order[k]]) ++end;
    const bool dominated = best <= points[order[k]][1];
    for (std::size_t g = k; g < end; ++g) flags[order[g]] = dominated;
    best = std::min(best, points[order[k]][1]);
    k = end;
  }
  return flags;
}

}  // namespace

std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points, Dominance mode,
                                              double dedup_tol) {
  if (!points.empty()) {
    const std::size_t r = points.front().size();
    for (const Vector& v : points)
      if (v.size() != r) throw Error(ErrorCode::DimensionMismatch, "nondominated_filter");
  }
  const std::vector<char> dominated = mode == Dominance::Weak && !points.empty() &&
                                              points.front().size() == 2
                                          ? weakly_dominated_2d(points)
                                          : dominated_flags(points, mode);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (dominated[i]) continue;
    if (dedup_tol > 0.0) {
      const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
        double dist = 0.0;
        for (std::size_t c = 0; c < points[i].size(); ++c)
          dist = std::max(dist, std::abs(points[i][c] - points[k][c]));
        return dist <= dedup_tol;
      });
      if (duplicate) continue;
    }
    kept.push_back(i);
  }
  return kept;
}

std::vector<Vector> nondominated_filter(const std::vector<Vector>& points, Dominance mode,
                                        double dedup_tol) {
  std::vector<Vector> out;
  for (std::size_t i : nondominated_indices(points, mode, dedup_tol)) out.push_back(points[i]);
  return out;
}

std::uint64_t start_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

StartOutcome run_start(const MopProblem& p, std::size_t index, const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  StartOutcome o;
  o.index = index;
  try {
    o.start = feasible_start(p, start_seed(cfg.seed, index), cfg.max_start_attempts,
                             RestoreOptions{cfg.eps, cfg.newton_cap, cfg.margin_tol});
    o.result = grj_solve(p, *o.start, cfg);
  } catch (const Error& e) {
    o.error = e.what();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

}  // namespace

PopulationResult solve_population(const MopProblem& p, std::size_t n_starts,
                                  const SolverConfig& cfg, unsigned jobs) {
  if (n_starts == 0) throw Error(ErrorCode::InvalidArgument, "n_starts must be at least 1");
  cfg.validate();
  PopulationResult out;
  out.starts.resize(n_starts);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n_starts; ++i) out.starts[i] = run_start(p, i, cfg);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned workers = std::min<std::size_t>(jobs, n_starts);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_starts; i = next++) out.starts[i] = run_start(p, i, cfg);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<ArchiveEntry> candidates;
  for (const StartOutcome& o : out.starts) {
    if (!o.result) continue;
    const SolveStatus s = o.result->status;
    if (s == SolveStatus::KktStationary || s == SolveStatus::MaxOuterReached)
      candidates.push_back({o.index, o.result->x_final, o.result->f_final});
  }
  std::vector<Vector> values;
  for (const ArchiveEntry& c : candidates) values.push_back(c.f);
  for (std::size_t i : nondominated_indices(values, Dominance::Weak, kArchiveDedupTol))
    out.archive.push_back(candidates[i]);
  return out;
}

}  // namespace grj
