#include "morandim/dini.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "morandim/profile.hpp"
#include "morandim/scale_function.hpp"

namespace morandim {
namespace {

constexpr double kRangeTol = 1e-9;
constexpr double kMonotoneTol = 1e-9;
constexpr double kContinuitySlack = 1e-6;
constexpr double kDerivativeSlack = 1e-7;
constexpr std::size_t kMaxViolations = 64;

void record(ClassReport& rep, double where, const char* constraint, double lhs,
            double rhs) {
  if (rep.violations.size() < kMaxViolations)
    rep.violations.push_back({where, constraint, lhs, rhs});
}

}  // namespace

double dini_upper_right(const RealFunction& f, double x, MeshSchedule mesh) {
  if (f.derivative_hint) {
    if (auto v = f.derivative_hint(x)) return *v;
  }
  const double room = f.domain.hi - x;
  if (!(room > 0) || room < mesh.floor)
    throw std::domain_error("no right neighborhood for upper right derivative");
  const double fx = f.eval(x);
  double best = -std::numeric_limits<double>::infinity();
  double h = std::min(mesh.initial, room);
  while (h >= mesh.floor) {
    best = std::max(best, (f.eval(x + h) - fx) / h);
    h *= 0.5;
  }
  return best;
}

std::pair<double, double> exponential_envelope(double g0, double dx, double lambda,
                                               double alpha) {
  if (dx < 0) throw std::invalid_argument("envelope requires non-negative width");
  const double decay = std::exp(-dx);
  return {lambda - (lambda - g0) * decay, alpha - (alpha - g0) * decay};
}

ClassReport check_profile_admissible(const ProfileFunction& h, double lambda,
                                     double alpha, std::size_t grid_points) {
  ClassReport rep;
  rep.member = false;
  rep.margin = std::numeric_limits<double>::infinity();
  if (grid_points < 2) grid_points = 2;

  std::vector<double> grid;
  grid.reserve(grid_points + 1);
  for (std::size_t i = 0; i <= grid_points; ++i)
    grid.push_back(static_cast<double>(i) / static_cast<double>(grid_points));
  for (const auto& pt : h.points())
    if (pt[0] > 0 && pt[0] < 1) grid.push_back(pt[0]);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  rep.grid_points = grid.size();

  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = h(grid[i]);

  if (lambda == alpha) {
    // Degenerate class: only the constant profile qualifies.
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double dev = std::abs(vals[i] - lambda);
      if (dev > worst) worst = dev;
      if (dev > kRangeTol) record(rep, grid[i], "range", vals[i], lambda);
    }
    rep.margin = -worst;
    rep.member = rep.violations.empty();
    return rep;
  }
  if (!(lambda < alpha)) throw std::invalid_argument("class requires lambda <= alpha");

  RealFunction wrapped;
  wrapped.domain = {0.0, 1.0};
  wrapped.eval = [&h](double t) { return h(t); };
  wrapped.derivative_hint = [&h](double t) -> std::optional<double> {
    return h.right_derivative(t);
  };

  const double osc_rate = 0.25 * (alpha - lambda);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double theta = grid[i];
    const double v = vals[i];
    if (v < lambda - kRangeTol || v > alpha + kRangeTol)
      record(rep, theta, "range", v, v < lambda ? lambda : alpha);
    if (i + 1 < grid.size()) {
      const double vn = vals[i + 1];
      if (vn < v - kMonotoneTol) record(rep, theta, "monotone", vn, v);
      if (theta > 0) {
        const double cap = osc_rate * std::log(grid[i + 1] / theta) + kContinuitySlack;
        if (std::abs(vn - v) > cap)
          record(rep, theta, "continuity", std::abs(vn - v), cap);
      }
    }
    if (theta > 0 && theta < 1) {
      const double measured = dini_upper_right(wrapped, theta);
      const double rhs = (v - lambda) * (alpha - v) / ((alpha - lambda) * theta);
      if (measured > rhs + kDerivativeSlack)
        record(rep, theta, "derivative", measured, rhs);
      rep.margin = std::min(rep.margin, rhs - measured);
    }
  }
  rep.member = rep.violations.empty();
  return rep;
}

ClassReport check_scale_admissible(const PiecewiseScaleFunction& g, double lambda,
                                   double alpha, std::size_t grid_points) {
  ClassReport rep;
  rep.member = false;
  rep.margin = std::numeric_limits<double>::infinity();
  if (grid_points < 2) grid_points = 2;
  if (!(lambda < alpha)) throw std::invalid_argument("class requires lambda < alpha");

  const double W = g.total_width();
  std::vector<double> grid;
  grid.reserve(grid_points + g.offsets().size());
  for (std::size_t i = 0; i < grid_points; ++i)
    grid.push_back(W * static_cast<double>(i) / static_cast<double>(grid_points));
  for (double off : g.offsets())
    if (off < W) grid.push_back(off);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  rep.grid_points = grid.size();

  for (double x : grid) {
    const double v = g(x);
    if (!(v > lambda) || !(v < alpha)) record(rep, x, "range", v, v <= lambda ? lambda : alpha);
    rep.margin = std::min(rep.margin, std::min(v - lambda, alpha - v));
    const double slope = g.right_slope(x);
    const double lo = lambda - v;
    const double hi = alpha - v;
    if (slope < lo - kDerivativeSlack || slope > hi + kDerivativeSlack)
      record(rep, x, "derivative", slope, slope < lo ? lo : hi);
  }
  rep.member = rep.violations.empty();
  return rep;
}

}  // namespace morandim
