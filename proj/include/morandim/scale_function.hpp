#pragma once

#include <memory>
#include <vector>

#include "morandim/profile.hpp"

namespace morandim {

enum class PieceKind { Constant, RiseTowardUpper, FallTowardLower, ProfileDescent };

// Payload of a descent piece: the branch traced parametrically by
//   theta -> (u(theta), h(theta)),
//   u(theta) = log((alpha - h(eps)) / (theta * (alpha - h(theta)))),
// for theta in [eps, 1]; x grows as theta shrinks. u is strictly decreasing
// for admissible profiles; verified on a grid when the bump is built.
struct DescentData {
  std::shared_ptr<const ProfileFunction> profile;
  double eps;
  double x_star;  // u(1); subtracted so the piece starts at local 0
};

struct Piece {
  PieceKind kind;
  double width;
  double start_value;
  std::shared_ptr<const DescentData> descent;  // ProfileDescent only
};

// Continuous concatenation of typed pieces on [0, total_width]:
//   Constant          g(xi) = v
//   RiseTowardUpper   g(xi) = alpha - (alpha - v) e^{-xi}
//   FallTowardLower   g(xi) = lambda - (lambda - v) e^{-xi}
//   ProfileDescent    g(xi) = h(u^{-1}(x_star + xi))
// with v the piece start value and xi the piece-local coordinate.
class PiecewiseScaleFunction {
 public:
  PiecewiseScaleFunction(std::vector<Piece> pieces, double lambda, double alpha);

  double operator()(double x) const;
  double right_slope(double x) const;

  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  double total_width() const { return offsets_.back(); }
  double lead_value() const;
  double tail_value() const;
  const std::vector<Piece>& pieces() const { return pieces_; }
  // offsets()[i] is where piece i starts; the final entry is total_width().
  const std::vector<double>& offsets() const { return offsets_; }
  std::size_t piece_index(double x) const;

  static double piece_end_value(const Piece& piece, double lambda, double alpha);
  // Inverts the descent parametrization at piece-local coordinate xi.
  static double descent_theta(const Piece& piece, double alpha, double xi);

 private:
  std::vector<Piece> pieces_;
  std::vector<double> offsets_;
  double lambda_;
  double alpha_;
};

// Single bump on [0, log(1/eps)]: rise from h(eps) toward alpha until the
// value h(1), then the descent branch back down to h(eps). Both ends take
// the value h(eps). Constant profiles collapse to a constant piece.
// Throws when the descent parametrization is not strictly monotone,
// naming the offending theta pair.
PiecewiseScaleFunction make_bump(const ProfileFunction& h, double eps, double lambda,
                                 double alpha);

// Connector on [0, w]: fall from h_eps toward lambda until gamma, then rise
// toward alpha until h_eps_next. Requires lambda < gamma <= h_eps_next <= h_eps < alpha.
PiecewiseScaleFunction make_connector(double h_eps, double h_eps_next, double gamma,
                                      double lambda, double alpha);

PiecewiseScaleFunction make_constant(double value, double width, double lambda,
                                     double alpha);

// Joins parts in order; adjacent end values must agree to 1e-9.
PiecewiseScaleFunction concatenate(const std::vector<PiecewiseScaleFunction>& parts);

struct AssemblyOptions {
  int epochs = 0;       // 0: derive the epoch count from x_max
  double x_max = 20.0;  // wanted domain length when epochs == 0
  std::vector<double> eps_schedule;    // default 2^-n, needs epochs+1 entries
  std::vector<double> gamma_schedule;  // default depends on h(0)
};

// Alternating bump/connector train (f_1, e_1, f_2, e_2, ...) realizing the
// profile h; the result passes check_scale_admissible with zero violations.
PiecewiseScaleFunction assemble_scale_function(const ProfileFunction& h, double lambda,
                                               double alpha,
                                               const AssemblyOptions& opts = {});

// Periodic repetition of one bump truncated at x_max; junctions are exact
// because a bump ends at its starting value.
PiecewiseScaleFunction assemble_repeated_bump(const ProfileFunction& h, double eps,
                                              double lambda, double alpha, double x_max);

// Same function preceded by a constant lead-in of the given width.
PiecewiseScaleFunction with_constant_prefix(const PiecewiseScaleFunction& g, double width);

// Default schedules used by assemble_scale_function, exposed for callers
// that need to inspect or modify them.
std::vector<double> default_eps_schedule(int epochs_plus_one);
std::vector<double> default_gamma_schedule(const ProfileFunction& h, double lambda,
                                           const std::vector<double>& eps_schedule);

}  // namespace morandim
