#include "morandim/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace morandim {
namespace {

const double kLog2 = std::log(2.0);
constexpr double kEdgeTol = 1e-12;
constexpr std::size_t kTreeBitBudget = 16;

void validate_spec(const CoverSpec& spec) {
  if (!(spec.delta > 0.0 && spec.delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  if (!(spec.theta > 0.0 && spec.theta <= 1.0))
    throw std::invalid_argument("theta must lie in (0,1]");
}

// Clipped band [lo, hi] together with the 1-based generation range whose
// scales fall inside it; k_first > k_last means no generation is in band.
struct BandView {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t k_first = 1;
  std::size_t k_last = 0;
};

BandView clip_band(const RatioSequence& seq, const CoverSpec& spec) {
  const double A = spec.band_lo();
  const double B = spec.band_hi();
  const double rho_n = std::exp(-seq.depth(seq.size()));
  if (B < rho_n * (1.0 - kEdgeTol))
    throw std::runtime_error("empty band intersection");
  BandView view;
  view.lo = std::max(A, rho_n);
  view.hi = B;
  const std::vector<double>& depths = seq.depths();
  const double e_hi = -std::log(B);
  const double e_lo = -std::log(view.lo);
  auto first = std::lower_bound(depths.begin(), depths.end(), e_hi - kEdgeTol);
  view.k_first = static_cast<std::size_t>(first - depths.begin()) + 1;
  std::size_t last = view.k_first - 1;
  while (last < depths.size() && depths[last] <= e_lo + kEdgeTol) ++last;
  view.k_last = last;
  return view;
}

}  // namespace

double CoverSpec::band_lo() const { return std::pow(delta, 1.0 / theta); }

double CoverSpec::band_hi() const { return delta; }

double flat_cover_cost(const HomogeneousMoranSet& set, const CoverSpec& spec,
                       double s) {
  validate_spec(spec);
  const RatioSequence& seq = set.seq;
  const BandView band = clip_band(seq, spec);
  const auto cost_at = [&](double phi, std::size_t k) {
    return std::exp2(static_cast<double>(k) * set.d + s * std::log2(phi));
  };
  double best = cost_at(band.lo, seq.count_at(band.lo));
  best = std::min(best, cost_at(band.hi, seq.count_at(band.hi)));
  for (std::size_t k = band.k_first; k <= band.k_last; ++k)
    best = std::min(best, cost_at(std::exp(-seq.depth(k)), k));
  return best;
}

double optimal_exponent(const HomogeneousMoranSet& set, const CoverSpec& spec) {
  validate_spec(spec);
  const RatioSequence& seq = set.seq;
  const BandView band = clip_band(seq, spec);
  double t = seq.scale_exponent(band.lo);
  for (std::size_t k = band.k_first; k <= band.k_last; ++k)
    t = std::min(t, static_cast<double>(k) * set.d * kLog2 / seq.depth(k));
  return t;
}

CostReport brute_force_cover_cost(const HomogeneousMoranSet& set,
                                  const CoverSpec& spec, double s,
                                  std::size_t depth) {
  validate_spec(spec);
  const RatioSequence& seq = set.seq;
  if (depth == 0 || depth > seq.size())
    throw std::invalid_argument("depth outside synthesized range");
  if (static_cast<std::size_t>(set.d) * depth > kTreeBitBudget)
    throw std::length_error("cube budget exceeded");
  const double A = spec.band_lo();
  const double B = spec.band_hi();
  std::vector<bool> admissible(depth + 1, false);
  bool any = false;
  for (std::size_t k = 1; k <= depth; ++k) {
    const double rho_k = std::exp(-seq.depth(k));
    admissible[k] = rho_k >= A * (1.0 - kEdgeTol) && rho_k <= B * (1.0 + kEdgeTol);
    any = any || admissible[k];
  }
  if (!any) throw std::runtime_error("band excludes all generations");
  const BandView band = clip_band(seq, spec);
  const double ball_cost = std::pow(band.lo, s);

  // All subtrees at one depth are congruent, so the per-branch optimum
  // collapses to a scalar recurrence over depths.
  const double inf = std::numeric_limits<double>::infinity();
  const double branching = std::exp2(static_cast<double>(set.d));
  std::vector<double> cost(depth + 2, inf);
  CostReport report;
  report.exponent = s;
  report.best_assignment.assign(depth + 1, 0);
  for (std::size_t k = depth; k >= 1; --k) {
    const double rho_k = std::exp(-seq.depth(k));
    double stop_cost = admissible[k] ? std::pow(rho_k, s) : inf;
    // A cube finer than the band bottom fits inside one ball at that scale,
    // the same cover the flat bound prices at its lower endpoint; without it
    // the family could price above the flat cover it is meant to refine.
    if (rho_k <= band.lo * (1.0 + kEdgeTol))
      stop_cost = std::min(stop_cost, ball_cost);
    const double descend_cost = k < depth ? branching * cost[k + 1] : inf;
    if (stop_cost <= descend_cost) {
      cost[k] = stop_cost;
      report.best_assignment[k] = k;
    } else {
      cost[k] = descend_cost;
      report.best_assignment[k] = report.best_assignment[k + 1];
    }
  }
  report.best_cost = branching * cost[1];
  report.flat_cost = flat_cover_cost(set, spec, s);
  return report;
}

double unit_cost_exponent(const HomogeneousMoranSet& set, const CoverSpec& spec,
                          std::size_t depth) {
  double lo = 0.0;
  double hi = static_cast<double>(set.d);
  while (brute_force_cover_cost(set, spec, hi, depth).best_cost > 1.0 &&
         hi < 64.0 * set.d)
    hi *= 2.0;
  for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (brute_force_cover_cost(set, spec, mid, depth).best_cost > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace morandim
