#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "grj/numerics.hpp"
#include "grj/problem.hpp"

namespace grj {

/// Approximate Pareto front of one problem produced by one solver.
struct Front {
  std::vector<Vector> points;
  std::string problem;
  std::string solver;
};

struct MetricsReport {
  double purity = 0.0;
  double spread = 0.0;
  double gd = 0.0;
  double cpu_seconds = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double kPurityMatchTol = 1e-6;

/// Union of the fronts minus every point strictly dominated by another union
/// member. Exact duplicates collapse. Throws EmptyUnion.
Front reference_front(const std::vector<Front>& fronts);

/// Share of fps points lying within match_tol (inf-norm) of some fp point.
double purity(const Front& fps, const Front& fp, double match_tol = kPurityMatchTol);

/// Spread Delta*. Extremes are the fp points minimizing each objective, ties
/// broken lexicographically on the remaining objectives. Throws
/// DegenerateReference when |fp| < 2 or the denominator vanishes.
double spread(const Front& fps, const Front& fp);

/// (1/|fps|) sqrt(sum over fps of d(y, fp)^2).
double generational_distance(const Front& fps, const Front& fp);

/// Euclidean distance from y to the nearest point of a set (+inf for an empty set).
double distance_to_set(std::span<const double> y, const std::vector<Vector>& set);

/// Grid oracle: for every choice of n - m nonbasic coordinates, grids them
/// with grid_per_dim points per axis, Newton-restores the rest and keeps the
/// feasible samples; returns their weakly nondominated objective vectors.
/// Requires n - m <= 3. Throws OracleInfeasible when nothing restores.
Front brute_force_front(const MopProblem& p, std::size_t grid_per_dim);

struct ProfileCurve {
  std::string solver;
  /// (alpha, rho) pairs; rho holds from alpha up to the next breakpoint.
  std::vector<std::pair<double, double>> breakpoints;
};

/// Performance profiles from measures[s][p] (smaller is better). Ratios are
/// m / min_s m; +inf measures never count as solved. A zero best measure gives
/// ratio 1 to the solvers attaining it and +inf to the rest.
std::vector<ProfileCurve> performance_profile(const std::vector<std::string>& solvers,
                                              const std::vector<std::vector<double>>& measures);

/// Measure used for purity in profiles: 1/P, with P = 0 mapped to +inf.
double purity_measure(double purity);

}  // namespace grj
