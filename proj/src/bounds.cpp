#include "morandim/bounds.hpp"

#include <stdexcept>

namespace morandim {
namespace {

void require_class(double lambda, double alpha) {
  if (!(lambda < alpha)) throw std::invalid_argument("degenerate class");
}

}  // namespace

EnvelopeStep eta_beta(double theta, double eps, double h_theta, double lambda,
                      double alpha) {
  require_class(lambda, alpha);
  if (!(theta > 0)) throw std::invalid_argument("eta_beta requires theta > 0");
  if (!(eps >= 0)) throw std::invalid_argument("eta_beta requires eps >= 0");
  EnvelopeStep step;
  step.theta = theta;
  step.eps = eps;
  step.h_theta = h_theta;
  step.lambda = lambda;
  step.alpha = alpha;
  const double denom = (h_theta - lambda) * eps + (alpha - lambda) * theta;
  step.eta = (h_theta - lambda) * (alpha - h_theta) * eps / denom;
  step.beta = (h_theta - lambda) * eps / ((alpha - lambda) * theta) + 1.0;
  return step;
}

double dini_bound_rhs(double theta, double h_theta, double lambda, double alpha) {
  require_class(lambda, alpha);
  if (!(theta > 0)) throw std::invalid_argument("dini_bound_rhs requires theta > 0");
  return (h_theta - lambda) * (alpha - h_theta) / ((alpha - lambda) * theta);
}

double step_bound(double theta, double eps, double h_theta, double lambda,
                  double alpha) {
  return h_theta + eta_beta(theta, eps, h_theta, lambda, alpha).eta;
}

double global_lower_bound(double theta, double h_1, double lambda, double alpha) {
  require_class(lambda, alpha);
  if (!(theta > 0)) throw std::invalid_argument("global_lower_bound requires theta > 0");
  if (h_1 == alpha) return alpha;
  const double num = alpha * theta * (h_1 - lambda) + lambda * (alpha - h_1);
  const double den = theta * (h_1 - lambda) + (alpha - h_1);
  return num / den;
}

}  // namespace morandim
