#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morandim/profile.hpp"

namespace morandim {

class PiecewiseScaleFunction;

struct Interval {
  double lo;
  double hi;
};

// Generic scalar function with optional closed-form one-sided derivative.
// When derivative_hint is set it must agree with difference quotients at
// interior points to within the mesh tolerance.
struct RealFunction {
  Interval domain;
  std::function<double(double)> eval;
  std::function<std::optional<double>(double)> derivative_hint;
};

// Geometric step schedule initial, initial/2, initial/4, ... down to floor.
struct MeshSchedule {
  double initial = 1e-2;
  double floor = 1e-8;
};

struct Violation {
  double where;            // theta or x
  std::string constraint;  // "monotone", "continuity", "derivative", "range"
  double lhs;
  double rhs;
};

struct ClassReport {
  bool member = false;
  std::vector<Violation> violations;
  std::size_t grid_points = 0;
  // Smallest distance from the function values to the open bounds; only
  // meaningful for scale-function checks.
  double margin = 0.0;
};

// Upper right Dini derivative surrogate: max difference quotient over the
// mesh schedule. Uses derivative_hint directly when available.
// Throws "no right neighborhood" when x is at the right domain endpoint.
double dini_upper_right(const RealFunction& f, double x, MeshSchedule mesh = {});

// Two-sided growth envelope for functions whose one-sided derivative stays
// in [lambda - g, alpha - g]:
//   lower = lambda - (lambda - g0) * exp(-dx)
//   upper = alpha - (alpha - g0) * exp(-dx)
std::pair<double, double> exponential_envelope(double g0, double dx, double lambda,
                                               double alpha);

// Admissibility of a profile h between lambda and alpha: non-decreasing,
// continuous away from 0, and
//   D+ h(theta) <= (h - lambda)(alpha - h) / ((alpha - lambda) * theta)
// on the interior grid. lambda may be negative and alpha may exceed the
// ambient dimension; only lambda < alpha is structural. With lambda == alpha
// the class degenerates to the single constant function.
ClassReport check_profile_admissible(const ProfileFunction& h, double lambda,
                                     double alpha, std::size_t grid_points = 10000);

// Membership of a scale function: values strictly inside (lambda, alpha) and
// one-sided slope within [lambda - g, alpha - g] on the grid plus all piece
// endpoints. Slopes come from the per-piece closed forms.
ClassReport check_scale_admissible(const PiecewiseScaleFunction& g, double lambda,
                                   double alpha, std::size_t grid_points = 10000);

}  // namespace morandim
