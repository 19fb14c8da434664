#pragma once

#include "grj/direction.hpp"
#include "grj/problem.hpp"
#include "grj/reduction.hpp"

namespace grj {

struct StepResult {
  double t = 0.0;
  FeasiblePoint x_new;
  Vector f_new;
  int newton_iters = 0;
  int halvings = 0;
};

struct LineSearchOptions {
  double beta = 0.25;
  double eps = kFeasibilityTol;  // restoration tolerance
  int max_newton = 200;          // Newton steps per trial step length
  int max_halvings = 60;
};

/// t_N = min over d_i < 0 of (a_i - x_i)/d_i and over d_i > 0 of (b_i - x_i)/d_i.
/// Throws ZeroDirection when d_n vanishes.
double max_feasible_step(std::span<const double> xn, std::span<const double> d_n,
                         std::span<const double> lower_n, std::span<const double> upper_n);

/// Feasible Armijo search: tries t = t_N, t_N/2, ... and for each t runs Newton
/// on the basics from x_B, accepting the first iterate with ||G|| < eps,
/// a_B <= y_B <= b_B and F < F(x) + beta t U_N d_N in every component.
/// Throws LineSearchFailed after max_halvings.
StepResult armijo_search(const MopProblem& p, const Vector& x, const ReducedState& state,
                         const ReducedDirection& dir, const LineSearchOptions& opts = {});

}  // namespace grj
