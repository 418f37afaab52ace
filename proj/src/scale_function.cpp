#include "morandim/scale_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "morandim/dini.hpp"
#include "morandim/log.hpp"

namespace morandim {
namespace {

constexpr double kJunctionTol = 1e-9;
constexpr double kThetaTol = 1e-12;
constexpr double kZeroWidth = 1e-15;

double descent_u(const ProfileFunction& h, double eps, double alpha, double theta) {
  return std::log((alpha - h(eps)) / (theta * (alpha - h(theta))));
}

}  // namespace

PiecewiseScaleFunction::PiecewiseScaleFunction(std::vector<Piece> pieces, double lambda,
                                               double alpha)
    : pieces_(std::move(pieces)), lambda_(lambda), alpha_(alpha) {
  if (pieces_.empty()) throw std::invalid_argument("scale function needs at least one piece");
  if (!(lambda_ < alpha_)) throw std::invalid_argument("scale function requires lambda < alpha");
  offsets_.reserve(pieces_.size() + 1);
  offsets_.push_back(0.0);
  for (const Piece& p : pieces_) {
    if (!(p.width > 0)) throw std::invalid_argument("piece width must be positive");
    offsets_.push_back(offsets_.back() + p.width);
  }
}

std::size_t PiecewiseScaleFunction::piece_index(double x) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - offsets_.begin());
  if (i == 0) return 0;
  --i;
  if (i >= pieces_.size()) i = pieces_.size() - 1;
  return i;
}

double PiecewiseScaleFunction::descent_theta(const Piece& piece, double alpha, double xi) {
  const DescentData& dd = *piece.descent;
  const ProfileFunction& h = *dd.profile;
  const double target = dd.x_star + xi;
  // u is strictly decreasing: u(1) = x_star, u(eps) = x_star + width.
  double lo = dd.eps, hi = 1.0;
  if (target <= dd.x_star) return 1.0;
  if (target >= dd.x_star + piece.width) return dd.eps;
  while (hi - lo > kThetaTol) {
    const double mid = 0.5 * (lo + hi);
    if (descent_u(h, dd.eps, alpha, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double PiecewiseScaleFunction::operator()(double x) const {
  const double w = total_width();
  if (x < 0 || x > w) {
    if (x > w && x <= w + kJunctionTol) {
      x = w;
    } else if (x < 0 && x >= -kJunctionTol) {
      x = 0;
    } else {
      throw std::out_of_range("evaluation outside assembled domain");
    }
  }
  const std::size_t i = piece_index(x);
  const Piece& p = pieces_[i];
  const double xi = x - offsets_[i];
  switch (p.kind) {
    case PieceKind::Constant:
      return p.start_value;
    case PieceKind::RiseTowardUpper:
      return alpha_ - (alpha_ - p.start_value) * std::exp(-xi);
    case PieceKind::FallTowardLower:
      return lambda_ - (lambda_ - p.start_value) * std::exp(-xi);
    case PieceKind::ProfileDescent:
      return (*p.descent->profile)(descent_theta(p, alpha_, xi));
  }
  return 0.0;
}

double PiecewiseScaleFunction::right_slope(double x) const {
  const double w = total_width();
  if (x < 0 || x >= w) {
    if (x >= w && x <= w + kJunctionTol) x = w;  // left slope of the last piece
    else if (x < 0 && x >= -kJunctionTol) x = 0;
    else throw std::out_of_range("evaluation outside assembled domain");
  }
  std::size_t i = piece_index(x);
  // At an interior junction the slope of the following piece applies.
  if (x == offsets_[i + 1] && i + 1 < pieces_.size()) ++i;
  const Piece& p = pieces_[i];
  const double xi = x - offsets_[i];
  switch (p.kind) {
    case PieceKind::Constant:
      return 0.0;
    case PieceKind::RiseTowardUpper:
      return (alpha_ - p.start_value) * std::exp(-xi);
    case PieceKind::FallTowardLower:
      return (lambda_ - p.start_value) * std::exp(-xi);
    case PieceKind::ProfileDescent: {
      const double theta = descent_theta(p, alpha_, xi);
      const ProfileFunction& h = *p.descent->profile;
      const double hv = h(theta);
      const double hd = h.right_derivative(theta);
      const double ud = hd / (alpha_ - hv) - 1.0 / theta;  // < 0
      return hd / ud;
    }
  }
  return 0.0;
}

double PiecewiseScaleFunction::piece_end_value(const Piece& piece, double lambda,
                                               double alpha) {
  switch (piece.kind) {
    case PieceKind::Constant:
      return piece.start_value;
    case PieceKind::RiseTowardUpper:
      return alpha - (alpha - piece.start_value) * std::exp(-piece.width);
    case PieceKind::FallTowardLower:
      return lambda - (lambda - piece.start_value) * std::exp(-piece.width);
    case PieceKind::ProfileDescent:
      return (*piece.descent->profile)(piece.descent->eps);
  }
  return 0.0;
}

double PiecewiseScaleFunction::lead_value() const { return pieces_.front().start_value; }

double PiecewiseScaleFunction::tail_value() const {
  return piece_end_value(pieces_.back(), lambda_, alpha_);
}

PiecewiseScaleFunction make_constant(double value, double width, double lambda,
                                     double alpha) {
  if (!(value > lambda && value < alpha))
    throw std::invalid_argument("constant piece value must lie strictly between bounds");
  return PiecewiseScaleFunction({{PieceKind::Constant, width, value, nullptr}}, lambda,
                                alpha);
}

PiecewiseScaleFunction make_bump(const ProfileFunction& h, double eps, double lambda,
                                 double alpha) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("bump requires eps in (0,1)");
  const double h_eps = h(eps);
  const double h_one = h(1.0);
  if (!(h_one < alpha) || !(h_eps < alpha))
    throw std::invalid_argument("bump requires profile values below alpha");
  if (h_eps < lambda) throw std::invalid_argument("bump requires profile values above lambda");
  if (h_eps > h_one + kJunctionTol)
    throw std::invalid_argument("bump requires a non-decreasing profile");

  const double z = std::log(1.0 / eps);
  if (h_one - h_eps <= kJunctionTol) {
    // Flat profile: the bump degenerates to a constant stretch.
    return PiecewiseScaleFunction({{PieceKind::Constant, z, h_eps, nullptr}}, lambda,
                                  alpha);
  }

  const double x_star = std::log((alpha - h_eps) / (alpha - h_one));
  // The descent parametrization must be invertible; check on a grid and
  // report the first offending pair.
  const int n_grid = 1000;
  double prev_theta = 1.0;
  double prev_u = x_star;
  for (int i = 1; i <= n_grid; ++i) {
    const double theta = 1.0 + (eps - 1.0) * static_cast<double>(i) / n_grid;
    const double u = descent_u(h, eps, alpha, theta);
    if (!(u > prev_u)) {
      std::ostringstream os;
      os << "descent parametrization not monotone between theta=" << theta
         << " and theta=" << prev_theta;
      throw std::runtime_error(os.str());
    }
    prev_u = u;
    prev_theta = theta;
  }

  auto dd = std::make_shared<DescentData>();
  dd->profile = std::make_shared<ProfileFunction>(h);
  dd->eps = eps;
  dd->x_star = x_star;

  std::vector<Piece> pieces;
  if (x_star > kZeroWidth)
    pieces.push_back({PieceKind::RiseTowardUpper, x_star, h_eps, nullptr});
  pieces.push_back({PieceKind::ProfileDescent, z - x_star, h_one, dd});
  return PiecewiseScaleFunction(std::move(pieces), lambda, alpha);
}

PiecewiseScaleFunction make_connector(double h_eps, double h_eps_next, double gamma,
                                      double lambda, double alpha) {
  if (!(lambda < gamma && gamma <= h_eps_next + kJunctionTol &&
        h_eps_next <= h_eps + kJunctionTol && h_eps < alpha))
    throw std::invalid_argument(
        "connector requires lambda < gamma <= h(eps_next) <= h(eps) < alpha");
  const double w_fall = std::log((h_eps - lambda) / (gamma - lambda));
  const double w_rise = std::log((alpha - gamma) / (alpha - h_eps_next));
  std::vector<Piece> pieces;
  if (w_fall > kZeroWidth)
    pieces.push_back({PieceKind::FallTowardLower, w_fall, h_eps, nullptr});
  if (w_rise > kZeroWidth) {
    const double from = w_fall > kZeroWidth ? gamma : h_eps;
    pieces.push_back({PieceKind::RiseTowardUpper, w_rise, from, nullptr});
  }
  if (pieces.empty())
    pieces.push_back({PieceKind::Constant, kZeroWidth * 10, h_eps, nullptr});
  return PiecewiseScaleFunction(std::move(pieces), lambda, alpha);
}

PiecewiseScaleFunction concatenate(const std::vector<PiecewiseScaleFunction>& parts) {
  if (parts.empty()) throw std::invalid_argument("concatenate requires at least one part");
  const double lambda = parts.front().lambda();
  const double alpha = parts.front().alpha();
  std::vector<Piece> pieces;
  bool have_prev = false;
  double prev_end = 0.0;
  for (const auto& part : parts) {
    if (part.lambda() != lambda || part.alpha() != alpha)
      throw std::invalid_argument("concatenate requires identical bounds");
    if (have_prev && std::abs(part.lead_value() - prev_end) > kJunctionTol) {
      std::ostringstream os;
      os << "junction mismatch: " << prev_end << " vs " << part.lead_value();
      throw std::runtime_error(os.str());
    }
    for (const Piece& p : part.pieces()) {
      if (p.width > kZeroWidth) pieces.push_back(p);
    }
    prev_end = part.tail_value();
    have_prev = true;
  }
  return PiecewiseScaleFunction(std::move(pieces), lambda, alpha);
}

std::vector<double> default_eps_schedule(int epochs_plus_one) {
  std::vector<double> eps(static_cast<std::size_t>(epochs_plus_one));
  double v = 0.5;
  for (auto& e : eps) {
    e = v;
    v *= 0.5;
  }
  return eps;
}

std::vector<double> default_gamma_schedule(const ProfileFunction& h, double lambda,
                                           const std::vector<double>& eps_schedule) {
  const double h0 = h(0.0);
  const std::size_t n = eps_schedule.size() - 1;
  std::vector<double> gamma(n);
  if (h0 > lambda) {
    std::fill(gamma.begin(), gamma.end(), h0);
    return gamma;
  }
  // h(0) == lambda: approach from above, decaying fast enough to stay below
  // the next bump's starting value.
  const double top = h(1.0) - lambda;
  double decay = 0.25;
  for (std::size_t i = 0; i < n; ++i) {
    gamma[i] = std::min(lambda + top * decay, h(eps_schedule[i + 1]));
    decay *= 0.25;
  }
  return gamma;
}

PiecewiseScaleFunction assemble_scale_function(const ProfileFunction& h, double lambda,
                                               double alpha,
                                               const AssemblyOptions& opts) {
  if (!(lambda < alpha)) throw std::runtime_error("degenerate class");
  ClassReport rep = check_profile_admissible(h, lambda, alpha, 2000);
  if (!rep.member) {
    std::ostringstream os;
    const Violation& v = rep.violations.front();
    os << "profile not admissible: " << v.constraint << " at " << v.where;
    throw std::runtime_error(os.str());
  }

  int epochs = opts.epochs;
  std::vector<double> eps = opts.eps_schedule;
  if (epochs <= 0) {
    // Grow the epoch count until the bump widths alone cover x_max.
    // Connectors only add width, so this undershoots the real total.
    epochs = 1;
    double width = 0.0;
    for (; epochs <= 64; ++epochs) {
      width += std::log(1.0 / std::pow(0.5, epochs));
      if (width >= opts.x_max + 1.0) break;
    }
    epochs = std::min(epochs, 64);
  }
  if (eps.empty()) eps = default_eps_schedule(epochs + 1);
  if (static_cast<int>(eps.size()) < epochs + 1)
    throw std::invalid_argument("eps schedule too short for requested epochs");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1]))
      throw std::invalid_argument("eps schedule must be strictly decreasing");

  std::vector<double> gamma = opts.gamma_schedule;
  if (gamma.empty()) gamma = default_gamma_schedule(h, lambda, eps);
  if (static_cast<int>(gamma.size()) < epochs)
    throw std::invalid_argument("gamma schedule too short for requested epochs");

  std::vector<PiecewiseScaleFunction> parts;
  parts.reserve(static_cast<std::size_t>(2 * epochs));
  for (int n = 0; n < epochs; ++n) {
    parts.push_back(make_bump(h, eps[n], lambda, alpha));
    parts.push_back(
        make_connector(h(eps[n]), h(eps[n + 1]), gamma[n], lambda, alpha));
  }
  PiecewiseScaleFunction g = concatenate(parts);
  log_at(LogLevel::kInfo, "assembled scale function: %d epochs, width %.3f", epochs,
         g.total_width());
  return g;
}

PiecewiseScaleFunction assemble_repeated_bump(const ProfileFunction& h, double eps,
                                              double lambda, double alpha,
                                              double x_max) {
  PiecewiseScaleFunction bump = make_bump(h, eps, lambda, alpha);
  const double period = bump.total_width();
  const int copies = std::max(1, static_cast<int>(std::ceil(x_max / period)) + 1);
  std::vector<PiecewiseScaleFunction> parts(static_cast<std::size_t>(copies), bump);
  return concatenate(parts);
}

PiecewiseScaleFunction with_constant_prefix(const PiecewiseScaleFunction& g,
                                            double width) {
  if (width <= kZeroWidth) return g;
  std::vector<Piece> pieces;
  pieces.reserve(g.pieces().size() + 1);
  pieces.push_back({PieceKind::Constant, width, g.lead_value(), nullptr});
  for (const Piece& p : g.pieces()) pieces.push_back(p);
  return PiecewiseScaleFunction(std::move(pieces), g.lambda(), g.alpha());
}

}  // namespace morandim
