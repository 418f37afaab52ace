#pragma once

// Independent reference implementations and generators used by the tests.
// Everything here is deliberately written from first principles rather than
// calling back into the library, so agreement is evidence, not tautology.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "morandim/sequence.hpp"

namespace testsupport {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

// One-sided difference-quotient bound for the upper right derivative: max
// quotient over a shrinking mesh.
template <typename F>
double dini_quotient(F&& f, double x, double h0 = 1e-3, double floor = 1e-7) {
  double best = -std::numeric_limits<double>::infinity();
  for (double h = h0; h >= floor; h *= 0.5)
    best = std::max(best, (f(x + h) - f(x)) / h);
  return best;
}

// All possible covering costs of one cube at depth `level` in a depth-`depth`
// binary (d=1) tree: pay the stop price at this level when finite, or descend
// and pick any combination of the two children's assignments.
inline std::vector<double> cover_cost_options(const std::vector<double>& stop_price,
                                              std::size_t depth, std::size_t level) {
  std::vector<double> options;
  if (level >= 1 && std::isfinite(stop_price[level]))
    options.push_back(stop_price[level]);
  if (level < depth) {
    const std::vector<double> child =
        cover_cost_options(stop_price, depth, level + 1);
    for (double a : child)
      for (double b : child) options.push_back(a + b);
  }
  return options;
}

// Exhaustive minimum over every per-branch stopping assignment of the d=1
// tree; NaN when no assignment covers every branch.
inline double exhaustive_cover_cost(const std::vector<double>& stop_price,
                                    std::size_t depth) {
  const std::vector<double> root = cover_cost_options(stop_price, depth, 0);
  if (root.empty()) return std::numeric_limits<double>::quiet_NaN();
  double best = root.front();
  for (double c : root) best = std::min(best, c);
  return best;
}

// Max over n_points of |s(x) - g(x)| - d log2 e^{-x}; negative means the
// tracking bound holds everywhere sampled.
inline double tracking_excess(const morandim::SynthesisResult& result, int d,
                              std::size_t n_points = 10000) {
  const morandim::RatioSequence& seq = result.sequence;
  const std::vector<double>& Es = seq.depths();
  const double D = d * std::log(2.0);
  const double x_lo = result.w0;
  const double x_hi = std::log(Es.back());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = x_lo + (x_hi - x_lo) * (static_cast<double>(i) + 0.5) /
                                static_cast<double>(n_points);
    const double E = std::exp(x);
    // Count levels in depth space; the linear scale exp(-E) underflows for
    // deep sequences.
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(Es.begin(), Es.end(), E) - Es.begin());
    const std::size_t count = std::min(idx + 1, Es.size());
    const double s = static_cast<double>(count) * D / E;
    const double g = result.g_full(x);
    worst = std::max(worst, std::abs(s - g) - D * std::exp(-x));
  }
  return worst;
}

}  // namespace testsupport
