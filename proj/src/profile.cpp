#include "morandim/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace morandim {

ProfileFunction ProfileFunction::constant(double value) {
  ProfileFunction p;
  p.family_ = ProfileFamily::Constant;
  p.params_ = {value};
  return p;
}

ProfileFunction ProfileFunction::affine(double offset, double slope) {
  if (slope < 0) throw std::invalid_argument("affine profile requires slope >= 0");
  ProfileFunction p;
  p.family_ = ProfileFamily::Affine;
  p.params_ = {offset, slope};
  return p;
}

ProfileFunction ProfileFunction::extremal(double lambda, double alpha, double c) {
  if (!(c > 0)) throw std::invalid_argument("extremal profile requires c > 0");
  if (!(lambda < alpha)) throw std::invalid_argument("extremal profile requires lambda < alpha");
  ProfileFunction p;
  p.family_ = ProfileFamily::Extremal;
  p.params_ = {lambda, alpha, c};
  return p;
}

ProfileFunction ProfileFunction::table(std::vector<std::array<double, 2>> points) {
  if (points.size() < 2) throw std::invalid_argument("table profile requires at least 2 points");
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i][0] > points[i - 1][0]))
      throw std::invalid_argument("table profile requires distinct theta values");
  }
  ProfileFunction p;
  p.family_ = ProfileFamily::Table;
  p.points_ = std::move(points);
  return p;
}

double ProfileFunction::operator()(double theta) const {
  switch (family_) {
    case ProfileFamily::Constant:
      return params_[0];
    case ProfileFamily::Affine:
      return params_[0] + params_[1] * theta;
    case ProfileFamily::Extremal: {
      const double lambda = params_[0], alpha = params_[1], c = params_[2];
      return lambda + (alpha - lambda) * theta / (c + theta);
    }
    case ProfileFamily::Table: {
      if (theta <= points_.front()[0]) return points_.front()[1];
      if (theta >= points_.back()[0]) return points_.back()[1];
      auto it = std::upper_bound(points_.begin(), points_.end(), theta,
                                 [](double t, const auto& p) { return t < p[0]; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (theta - lo[0]) / (hi[0] - lo[0]);
      return lo[1] + w * (hi[1] - lo[1]);
    }
  }
  return 0.0;
}

double ProfileFunction::right_derivative(double theta) const {
  switch (family_) {
    case ProfileFamily::Constant:
      return 0.0;
    case ProfileFamily::Affine:
      return params_[1];
    case ProfileFamily::Extremal: {
      const double lambda = params_[0], alpha = params_[1], c = params_[2];
      const double q = c + theta;
      return (alpha - lambda) * c / (q * q);
    }
    case ProfileFamily::Table: {
      if (theta >= points_.back()[0]) return 0.0;
      auto it = std::upper_bound(points_.begin(), points_.end(), theta,
                                 [](double t, const auto& p) { return t < p[0]; });
      if (it == points_.begin()) ++it;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      return (hi[1] - lo[1]) / (hi[0] - lo[0]);
    }
  }
  return 0.0;
}

std::string ProfileFunction::describe() const {
  std::ostringstream os;
  switch (family_) {
    case ProfileFamily::Constant:
      os << "constant(" << params_[0] << ")";
      break;
    case ProfileFamily::Affine:
      os << "affine(" << params_[0] << " + " << params_[1] << "*theta)";
      break;
    case ProfileFamily::Extremal:
      os << "extremal(lambda=" << params_[0] << ", alpha=" << params_[1]
         << ", c=" << params_[2] << ")";
      break;
    case ProfileFamily::Table:
      os << "table(" << points_.size() << " points)";
      break;
  }
  return os.str();
}

}  // namespace morandim
