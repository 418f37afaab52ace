#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace morandim {

enum class ProfileFamily { Constant, Affine, Extremal, Table };

// Candidate dimension profile h on [0,1]. Families:
//   Constant: h = c
//   Affine:   h = offset + slope*theta, slope >= 0
//   Extremal: h = lambda + (alpha-lambda)*theta/(c+theta), c > 0
//   Table:    piecewise linear through sorted (theta, value) points
// Extremal satisfies the Dini constraint of the admissible class with
// equality, so it is the steepest member through a given endpoint.
class ProfileFunction {
 public:
  static ProfileFunction constant(double value);
  static ProfileFunction affine(double offset, double slope);
  static ProfileFunction extremal(double lambda, double alpha, double c);
  static ProfileFunction table(std::vector<std::array<double, 2>> points);

  double operator()(double theta) const;

  // One-sided derivative from the right; at a table kink this is the slope
  // of the segment to the right.
  double right_derivative(double theta) const;

  ProfileFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<std::array<double, 2>>& points() const { return points_; }
  std::string describe() const;

 private:
  ProfileFamily family_;
  std::vector<double> params_;
  std::vector<std::array<double, 2>> points_;  // Table only, sorted by theta
};

}  // namespace morandim
