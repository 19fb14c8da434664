#include "grj/suite.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "grj/error.hpp"

namespace grj {

MopProblem make_el3() {
  MopProblem p;
  p.name = "EL3";
  p.n = 2;
  p.r = 2;
  p.m = 1;
  p.lower = {0.0, 0.0};
  p.upper = {1.0, 1.0};
  p.eval_f = [](const Vector& x) {
    return Vector{x[1] * x[1] * x[1] + std::log(x[0] * x[0] + 1.0), std::sin(x[0] / (x[1] + 2.0))};
  };
  p.jac_f = [](const Vector& x) {
    const double q = x[1] + 2.0;
    const double c = std::cos(x[0] / q);
    return Matrix(2, 2,
                  {2.0 * x[0] / (x[0] * x[0] + 1.0), 3.0 * x[1] * x[1],  //
                   c / q, -c * x[0] / (q * q)});
  };
  p.eval_g = [](const Vector& x) { return Vector{x[0] * x[0] + x[1] * x[1] - 1.0}; };
  p.jac_g = [](const Vector& x) { return Matrix(1, 2, {2.0 * x[0], 2.0 * x[1]}); };
  return p;
}

RawProblem make_disc_brake(DiscBrakeForm form) {
  RawProblem p;
  p.name = "Disc Brake";
  p.n = 4;
  p.r = 2;
  p.e = 0;
  p.q = 5;
  p.lower = {55.0, 75.0, 1000.0, 2.0};
  p.upper = {80.0, 110.0, 3000.0, 20.0};
  // Twice the suprema of -h over the feasible region: never active, and never
  // coincident with a bound on x.
  p.slack_uppers = {70.0, 45.0, 0.8, 4.0, 2.6e5};

  p.eval_f = [](const Vector& x) {
    const double d2 = x[1] * x[1] - x[0] * x[0];
    const double d3 = x[1] * x[1] * x[1] - x[0] * x[0] * x[0];
    return Vector{4.9e-5 * d2 * (x[3] - 1.0), 9.82e6 * d2 / (x[2] * x[3] * d3)};
  };
  p.jac_f = [](const Vector& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    const double d2 = x2 * x2 - x1 * x1;
    const double d3 = x2 * x2 * x2 - x1 * x1 * x1;
    const double ratio_dx1 = (-2.0 * x1 * d3 + 3.0 * x1 * x1 * d2) / (d3 * d3);
    const double ratio_dx2 = (2.0 * x2 * d3 - 3.0 * x2 * x2 * d2) / (d3 * d3);
    const double k = 9.82e6 / (x3 * x4);
    const double f2 = k * d2 / d3;
    return Matrix(2, 4,
                  {-9.8e-5 * x1 * (x4 - 1.0), 9.8e-5 * x2 * (x4 - 1.0), 0.0, 4.9e-5 * d2,  //
                   k * ratio_dx1, k * ratio_dx2, -f2 / x3, -f2 / x4});
  };
  p.eval_e = [](const Vector&) { return Vector{}; };
  p.jac_e = [](const Vector&) { return Matrix(0, 4); };

  const bool verbatim = form == DiscBrakeForm::Verbatim;
  p.eval_h = [verbatim](const Vector& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    const double d2 = x2 * x2 - x1 * x1;
    const double d3 = x2 * x2 * x2 - x1 * x1 * x1;
    const double gap = verbatim ? (x2 - x1) + 20.0 : 20.0 - (x2 - x1);
    const double torque = verbatim ? 2.66 * x3 * x4 * (-d3) / (1e2 * d2 * d2) + 900.0
                                   : 900.0 - 2.66e-2 * x3 * x4 * d3 / d2;
    return Vector{gap, 2.5 * (x4 + 1.0) - 30.0, x3 / (3.14 * d2) - 0.4,
                  2.22 * x3 * (-d3) / (1e3 * d2 * d2) - 1.0, torque};
  };
  p.jac_h = [verbatim](const Vector& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    const double d2 = x2 * x2 - x1 * x1;
    const double d3 = x2 * x2 * x2 - x1 * x1 * x1;
    // s = d3 / d2^2 and t = d3 / d2
    const double s = d3 / (d2 * d2);
    const double s_dx1 = (-3.0 * x1 * x1 * d2 + 4.0 * x1 * d3) / (d2 * d2 * d2);
    const double s_dx2 = (3.0 * x2 * x2 * d2 - 4.0 * x2 * d3) / (d2 * d2 * d2);
    const double t = d3 / d2;
    const double t_dx1 = (-3.0 * x1 * x1 * d2 + 2.0 * x1 * d3) / (d2 * d2);
    const double t_dx2 = (3.0 * x2 * x2 * d2 - 2.0 * x2 * d3) / (d2 * d2);
    Matrix j(5, 4);
    j(0, 0) = verbatim ? -1.0 : 1.0;
    j(0, 1) = verbatim ? 1.0 : -1.0;
    j(1, 3) = 2.5;
    j(2, 0) = 2.0 * x1 * x3 / (3.14 * d2 * d2);
    j(2, 1) = -2.0 * x2 * x3 / (3.14 * d2 * d2);
    j(2, 2) = 1.0 / (3.14 * d2);
    j(3, 0) = -2.22e-3 * x3 * s_dx1;
    j(3, 1) = -2.22e-3 * x3 * s_dx2;
    j(3, 2) = -2.22e-3 * s;
    if (verbatim) {
      j(4, 0) = -2.66e-2 * x3 * x4 * s_dx1;
      j(4, 1) = -2.66e-2 * x3 * x4 * s_dx2;
      j(4, 2) = -2.66e-2 * x4 * s;
      j(4, 3) = -2.66e-2 * x3 * s;
    } else {
      j(4, 0) = -2.66e-2 * x3 * x4 * t_dx1;
      j(4, 1) = -2.66e-2 * x3 * x4 * t_dx2;
      j(4, 2) = -2.66e-2 * x4 * t;
      j(4, 3) = -2.66e-2 * x3 * t;
    }
    return j;
  };
  return p;
}

namespace {

constexpr double kShearCoeff = 6e3 / 1.4142135623730951;  // 6e3 / sqrt(2)

struct ShearStress {
  double value;
  double grad[4];
};

// Shear stress of the weld and its gradient (x4 does not enter).
ShearStress shear_stress(const Vector& x) {
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  const double s = x1 + x3;
  const double rad = std::sqrt(0.25 * (x2 * x2 + s * s));
  const double rad_d[3] = {0.25 * s / rad, 0.25 * x2 / rad, 0.25 * s / rad};

  const double tau1 = kShearCoeff / (x1 * x2);
  const double tau1_d[3] = {-tau1 / x1, -tau1 / x2, 0.0};

  const double polar = x2 * x2 / 12.0 + 0.25 * s * s;
  const double polar_d[3] = {0.5 * s, x2 / 6.0, 0.5 * s};
  const double num = 3e3 * (14.0 + 0.5 * x2 * rad);
  const double num_d[3] = {1.5e3 * x2 * rad_d[0], 1.5e3 * (rad + x2 * rad_d[1]),
                           1.5e3 * x2 * rad_d[2]};
  const double den = 0.707 * x1 * x2 * polar;
  const double den_d[3] = {0.707 * (x2 * polar + x1 * x2 * polar_d[0]),
                           0.707 * (x1 * polar + x1 * x2 * polar_d[1]),
                           0.707 * x1 * x2 * polar_d[2]};
  const double tau2 = num / den;
  double tau2_d[3];
  for (int i = 0; i < 3; ++i) tau2_d[i] = (num_d[i] * den - num * den_d[i]) / (den * den);

  const double cross = x2 * tau1 * tau2 / rad;
  const double q = tau1 * tau1 + tau2 * tau2 + cross;
  ShearStress out{std::sqrt(q), {0.0, 0.0, 0.0, 0.0}};
  for (int i = 0; i < 3; ++i) {
    const double dx2 = i == 1 ? 1.0 : 0.0;
    const double cross_d = (dx2 * tau1 * tau2 + x2 * (tau1_d[i] * tau2 + tau1 * tau2_d[i])) / rad -
                           x2 * tau1 * tau2 * rad_d[i] / (rad * rad);
    const double q_d = 2.0 * tau1 * tau1_d[i] + 2.0 * tau2 * tau2_d[i] + cross_d;
    out.grad[i] = q_d / (2.0 * out.value);
  }
  return out;
}

}  // namespace

RawProblem make_welded_beam() {
  RawProblem p;
  p.name = "Welded Beam";
  p.n = 4;
  p.r = 2;
  p.e = 0;
  p.q = 4;
  p.lower = {0.125, 0.1, 0.1, 0.125};
  p.upper = {5.0, 10.0, 10.0, 5.0};
  // Twice the suprema of -h over the box: never active, and never coincident
  // with a bound on x.
  p.slack_uppers = {27200.0, 6.0 / 504.0, 1800.0, 9.75};
  p.eval_f = [](const Vector& x) {
    return Vector{1.10471 * x[0] * x[0] * x[1] + 0.04811 * x[2] * x[3] * (14.0 + x[2]),
                  2.1952 / (x[2] * x[2] * x[2] * x[3])};
  };
  p.jac_f = [](const Vector& x) {
    const double f2 = 2.1952 / (x[2] * x[2] * x[2] * x[3]);
    return Matrix(2, 4,
                  {2.20942 * x[0] * x[1], 1.10471 * x[0] * x[0], 0.04811 * x[3] * (14.0 + 2.0 * x[2]),
                   0.04811 * x[2] * (14.0 + x[2]),  //
                   0.0, 0.0, -3.0 * f2 / x[2], -f2 / x[3]});
  };
  p.eval_e = [](const Vector&) { return Vector{}; };
  p.jac_e = [](const Vector&) { return Matrix(0, 4); };
  p.eval_h = [](const Vector& x) {
    const double x3 = x[2], x4 = x[3];
    return Vector{shear_stress(x).value - 13600.0, 1.0 / (x3 * x3 * x3 * x4) - 3.0 / 504.0,
                  x3 * x4 * x4 * x4 * (0.0282346 * x3 - 1.0) - 6e3 / 64746.022, x[0] - x4};
  };
  p.jac_h = [](const Vector& x) {
    const double x3 = x[2], x4 = x[3];
    const ShearStress tau = shear_stress(x);
    Matrix j(4, 4);
    for (int i = 0; i < 4; ++i) j(0, i) = tau.grad[i];
    j(1, 2) = -3.0 / (x3 * x3 * x3 * x3 * x4);
    j(1, 3) = -1.0 / (x3 * x3 * x3 * x4 * x4);
    j(2, 2) = x4 * x4 * x4 * (0.0564692 * x3 - 1.0);
    j(2, 3) = 3.0 * x3 * x4 * x4 * (0.0282346 * x3 - 1.0);
    j(3, 0) = 1.0;
    j(3, 3) = -1.0;
    return j;
  };
  return p;
}

MopProblem make_affine2() {
  MopProblem p;
  p.name = "affine2";
  p.n = 2;
  p.r = 2;
  p.m = 1;
  p.lower = {0.0, 0.0};
  p.upper = {1.0, 1.0};
  p.eval_f = [](const Vector& x) { return Vector{x[0] + x[1], x[0] - x[1]}; };
  p.jac_f = [](const Vector&) { return Matrix(2, 2, {1.0, 1.0, 1.0, -1.0}); };
  p.eval_g = [](const Vector& x) { return Vector{x[0] + x[1] - 1.0}; };
  p.jac_g = [](const Vector&) { return Matrix(1, 2, {1.0, 1.0}); };
  return p;
}

MopProblem make_sphere2(const Vector& c1, const Vector& c2) {
  if (c1.size() != c2.size() || c1.size() < 2)
    throw Error(ErrorCode::DimensionMismatch, "sphere2 centers");
  const std::size_t n = c1.size();
  MopProblem p;
  p.name = "sphere2";
  p.n = n;
  p.r = 2;
  p.m = 1;
  p.lower = Vector(n, 0.0);
  p.upper = Vector(n, 1.0);
  p.eval_f = [c1, c2](const Vector& x) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      a += (x[i] - c1[i]) * (x[i] - c1[i]);
      b += (x[i] - c2[i]) * (x[i] - c2[i]);
    }
    return Vector{a, b};
  };
  p.jac_f = [c1, c2, n](const Vector& x) {
    Matrix j(2, n);
    for (std::size_t i = 0; i < n; ++i) {
      j(0, i) = 2.0 * (x[i] - c1[i]);
      j(1, i) = 2.0 * (x[i] - c2[i]);
    }
    return j;
  };
  p.eval_g = [](const Vector& x) {
    double s = -1.0;
    for (double v : x) s += v;
    return Vector{s};
  };
  p.jac_g = [n](const Vector&) { return Matrix(1, n, Vector(n, 1.0)); };
  return p;
}

MopProblem make_sphere2() { return make_sphere2({0.8, 0.4}, {0.1, 1.1}); }

ProblemRegistry ProblemRegistry::builtin() {
  ProblemRegistry reg;
  reg.add({"EL3", 2, 2, 0, 1, [] { return make_el3(); }});
  reg.add({"Disc Brake", 2, 4, 2, 3, [] { return slackify(make_disc_brake()); }});
  reg.add({"Welded Beam", 2, 4, 1, 3, [] { return slackify(make_welded_beam()); }});
  reg.add({"affine2", 2, 2, 1, 0, [] { return make_affine2(); }});
  reg.add({"sphere2", 2, 2, 1, 0, [] { return make_sphere2(); }});
  return reg;
}

namespace {

std::string normalize(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

void ProblemRegistry::add(RegistryEntry entry) {
  if (find(entry.name) != nullptr)
    throw Error(ErrorCode::InvalidArgument, "duplicate problem name " + entry.name);
  entries_.push_back(std::move(entry));
}

const RegistryEntry* ProblemRegistry::find(const std::string& name) const {
  const std::string key = normalize(name);
  for (const RegistryEntry& e : entries_)
    if (normalize(e.name) == key) return &e;
  return nullptr;
}

MopProblem ProblemRegistry::make(const std::string& name) const {
  const RegistryEntry* e = find(name);
  if (e == nullptr)
    throw Error(ErrorCode::UnknownProblem, "'" + name + "' is not registered; known: " + names());
  return e->make();
}

std::string ProblemRegistry::names() const {
  std::string out;
  for (const RegistryEntry& e : entries_) {
    if (!out.empty()) out += ", ";
    out += e.name;
  }
  return out;
}

std::string problem_slug(const std::string& name) {
  std::string out = name;
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

}  // namespace grj
