#pragma once

namespace morandim {

// One application of the envelope inequality h(theta+eps) <= h(theta) + eta,
// together with the multiplier beta that controls the cover surgery behind it.
struct EnvelopeStep {
  double theta = 0;
  double eps = 0;
  double h_theta = 0;
  double lambda = 0;
  double alpha = 0;
  double eta = 0;
  double beta = 1;
};

// eta = (h-lambda)(alpha-h)eps / ((h-lambda)eps + (alpha-lambda)theta)
// beta = (h-lambda)eps / ((alpha-lambda)theta) + 1
EnvelopeStep eta_beta(double theta, double eps, double h_theta, double lambda,
                      double alpha);

// Right side of the admissibility constraint: (h-lambda)(alpha-h)/((alpha-lambda)theta).
// Equals the limit of eta/eps as eps tends to zero.
double dini_bound_rhs(double theta, double h_theta, double lambda, double alpha);

// Upper bound on h(theta+eps) given h(theta): h_theta + eta.
double step_bound(double theta, double eps, double h_theta, double lambda, double alpha);

// Lower bound on h(theta) given h(1), obtained by inverting the full step eps = 1-theta:
// (alpha*theta*(h1-lambda) + lambda*(alpha-h1)) / (theta*(h1-lambda) + (alpha-h1)).
double global_lower_bound(double theta, double h_1, double lambda, double alpha);

}  // namespace morandim
