#pragma once

#include <functional>
#include <string>
#include <vector>

#include "grj/problem.hpp"

namespace grj {

/// EL3: min (x2^3 + log(x1^2 + 1), sin(x1 / (x2 + 2))) s.t. x1^2 + x2^2 = 1, x in [0, 1]^2.
MopProblem make_el3();

enum class DiscBrakeForm {
  /// Minimum radius gap as 20 - (x2 - x1) <= 0 and the torque constraint over
  /// (x2^2 - x1^2); admits a nonempty feasible set.
  Corrected,
  /// Minimum-gap and torque constraints in their alternative literal form; the feasible set is empty.
  Verbatim,
};

RawProblem make_disc_brake(DiscBrakeForm form = DiscBrakeForm::Corrected);
RawProblem make_welded_beam();

/// F = (x1 + x2, x1 - x2) on x1 + x2 = 1, x in [0, 1]^2. f1 is constant on the
/// feasible set, so every feasible point is Pareto KKT-stationary.
MopProblem make_affine2();

/// F = (||x - c1||^2, ||x - c2||^2) on sum(x) = 1, x in [0, 1]^n with n = c1.size().
MopProblem make_sphere2(const Vector& c1, const Vector& c2);
/// Registered instance: n = 2, c1 = (0.8, 0.4), c2 = (0.1, 1.1).
MopProblem make_sphere2();

struct RegistryEntry {
  std::string name;
  int r = 0;   // objectives
  int ov = 0;  // original variables
  int l = 0;   // linear constraints
  int nl = 0;  // nonlinear constraints
  std::function<MopProblem()> make;
};

class ProblemRegistry {
 public:
  /// Registry holding EL3, Disc Brake, Welded Beam, affine2 and sphere2.
  static ProblemRegistry builtin();

  /// Throws InvalidArgument on a duplicate name.
  void add(RegistryEntry entry);

  const std::vector<RegistryEntry>& entries() const { return entries_; }
  /// Lookup ignoring case, spaces, '_' and '-'. Returns nullptr when absent.
  const RegistryEntry* find(const std::string& name) const;
  /// Throws UnknownProblem listing the registered names.
  MopProblem make(const std::string& name) const;
  std::string names() const;

 private:
  std::vector<RegistryEntry> entries_;
};

/// Directory-safe form of a problem name ("Disc Brake" -> "Disc_Brake").
std::string problem_slug(const std::string& name);

}  // namespace grj
