#pragma once

#include <cstddef>
#include <vector>

#include "morandim/moran.hpp"

namespace morandim {

// Scale band [delta^{1/theta}, delta] from which cover pieces must be drawn.
struct CoverSpec {
  double delta = 0.5;
  double theta = 1.0;

  double band_lo() const;
  double band_hi() const;
};

struct CostReport {
  double exponent = 0.0;
  double flat_cost = 0.0;
  double best_cost = 0.0;
  // Stopping generation for a cube first considered at each depth (index 1..n;
  // index 0 unused). All branches alive at a depth share the same choice.
  std::vector<std::size_t> best_assignment;
};

// Cheapest single-scale cover: min over candidate diameters phi (band endpoints
// and construction scales inside the band) of 2^{k(phi) d} phi^s, where k(phi)
// is the first generation with scale <= phi.
double flat_cover_cost(const HomogeneousMoranSet& set, const CoverSpec& spec,
                       double s);

// Infimum of the coarse scale exponent over the band; attained at the band's
// lower edge or at a construction scale inside the band.
double optimal_exponent(const HomogeneousMoranSet& set, const CoverSpec& spec);

// Exact minimum cost over covers that stop each branch of the depth-n cube tree
// at an independently chosen in-band generation.
CostReport brute_force_cover_cost(const HomogeneousMoranSet& set,
                                  const CoverSpec& spec, double s,
                                  std::size_t depth);

// Exponent s at which the best branch cover has unit cost; bisection to 1e-6.
double unit_cost_exponent(const HomogeneousMoranSet& set, const CoverSpec& spec,
                          std::size_t depth);

}  // namespace morandim
