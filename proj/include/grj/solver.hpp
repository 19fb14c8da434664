#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "grj/direction.hpp"
#include "grj/linesearch.hpp"
#include "grj/problem.hpp"
#include "grj/reduction.hpp"

namespace grj {

struct SolverConfig {
  double beta = 0.25;
  PhiChoice phi = PhiChoice::power(1.0);
  double stop_tol = 1e-6;
  int max_outer = 500;
  double eps = kFeasibilityTol;
  int newton_cap = 200;
  int max_halvings = 60;
  double margin_tol = kDefaultMarginTol;
  SubproblemOptions subproblem;
  std::uint64_t seed = 7;
  int max_start_attempts = 10000;

  /// Throws InvalidArgument on out-of-range settings.
  void validate() const;
};

/// Multipliers for JF^T lambda + JG^T u - v + w = 0, v.(x - a) = 0, w.(b - x) = 0.
struct KktCertificate {
  SimplexWeights lambda;
  Vector u;
  Vector v;
  Vector w;
  double stationarity_residual = 0.0;
  double complementarity_residual = 0.0;
};

enum class SolveStatus { KktStationary, MaxOuterReached, LineSearchFailed, BasisFailure };

const char* to_string(SolveStatus s);

struct TraceRecord {
  int iter = 0;
  Vector x;
  Vector f;
  double constraint_residual = 0.0;
  double value = std::numeric_limits<double>::quiet_NaN();  // subproblem value at x
  double step = 0.0;                                       // accepted t leaving x
  bool basis_changed = false;
  int halvings = 0;
  int newton_iters = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxOuterReached;
  Vector x_final;
  Vector f_final;
  std::optional<KktCertificate> certificate;
  std::vector<TraceRecord> trace;
  std::string message;

  int iterations() const { return trace.empty() ? 0 : static_cast<int>(trace.size()) - 1; }
};

inline constexpr double kStationarityThreshold = 1e-4;
inline constexpr double kComplementarityThreshold = 1e-6;

/// Bound gaps of the nonbasic variables, clamped at zero.
BoundGaps nonbasic_gaps(const MopProblem& p, const Vector& x, const BasisPartition& part);

KktCertificate kkt_certificate(const MopProblem& p, const Vector& x, const ReducedState& state,
                               const SimplexWeights& lam);

/// Reduced Jacobian descent from a feasible point until the subproblem value
/// drops below cfg.stop_tol. Numerical failures end up in the status.
SolveResult grj_solve(const MopProblem& p, const FeasiblePoint& x0, const SolverConfig& cfg);

enum class Dominance {
  Weak,    // y dominates y' when y <= y' with y != y'
  Strict,  // y < y' in every component
};

bool dominates(std::span<const double> a, std::span<const double> b, Dominance mode);

/// Indices of points not dominated by any input point, in input order. With a
/// positive dedup_tol, later points within that inf-norm distance of an earlier
/// retained point are dropped.
std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points,
                                              Dominance mode = Dominance::Weak,
                                              double dedup_tol = 0.0);

std::vector<Vector> nondominated_filter(const std::vector<Vector>& points,
                                        Dominance mode = Dominance::Weak, double dedup_tol = 0.0);

inline constexpr double kArchiveDedupTol = 1e-8;

struct StartOutcome {
  std::size_t index = 0;
  std::optional<FeasiblePoint> start;
  std::optional<SolveResult> result;
  std::string error;  // set when no feasible start was found
  double seconds = 0.0;
};

struct ArchiveEntry {
  std::size_t start = 0;
  Vector x;
  Vector f;
};

struct PopulationResult {
  std::vector<StartOutcome> starts;
  std::vector<ArchiveEntry> archive;
};

/// Seed of the i-th start of a population.
std::uint64_t start_seed(std::uint64_t seed, std::size_t index);

/// Independent solves from n_starts seeded feasible starts; the archive keeps
/// the nondominated terminal points of KktStationary and MaxOuterReached runs.
/// Results are ordered by start index whatever the number of jobs.
PopulationResult solve_population(const MopProblem& p, std::size_t n_starts,
                                  const SolverConfig& cfg, unsigned jobs = 1);

}  // namespace grj
