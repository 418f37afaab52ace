#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "morandim/sequence.hpp"

namespace morandim {

// Per-bucket envelope of the scale exponent s over a uniform grid in
// x = log log(1/scale).  Window queries snap outward to bucket boundaries, so
// estimates carry a discretization error of at most one bucket's modulus.
struct ScaleTrace {
  int d = 1;
  double x_lo = 0;
  double x_hi = 0;
  std::vector<double> lo;
  std::vector<double> hi;

  double bucket_width() const {
    return (x_hi - x_lo) / static_cast<double>(lo.size());
  }

  static ScaleTrace from_summary(const StreamSummary& summary);
  static ScaleTrace from_sequence(const RatioSequence& seq, double x_lo,
                                  double x_hi,
                                  std::size_t n_buckets = std::size_t{1} << 18);
};

// Eventual max over window start points x in the deep half of the trace of
// inf s over [x, x + log(1/theta)].  theta = 1 degenerates to the running sup.
double upper_intermediate(const ScaleTrace& trace, double theta);

// As above with min over start points; theta = 0 falls back to the Hausdorff
// estimate.
double lower_intermediate(const ScaleTrace& trace, double theta);

// Min of s over the deep half of the trace.
double hausdorff_estimate(const ScaleTrace& trace);

struct LocalDimensionReport {
  double value = 0;
  std::size_t n = 0;  // window length in levels attaining the extremum
  std::size_t k = 0;  // window start level attaining the extremum
};

// Extremes of n d log2 / (E_{k+n} - E_k) over k >= K and window lengths n in
// the deep half of [n_range.first, n_range.second].
LocalDimensionReport assouad_estimate(const RatioSequence& seq, std::size_t K,
                                      std::pair<std::size_t, std::size_t> n_range);
LocalDimensionReport lower_dim_estimate(const RatioSequence& seq, std::size_t K,
                                        std::pair<std::size_t, std::size_t> n_range);

// Bucketwise max across a family sharing one grid; the window estimators
// applied to the result give the dimension profile of the disjoint union.
ScaleTrace union_trace(const std::vector<ScaleTrace>& traces);

std::pair<double, double> union_profile(const std::vector<ScaleTrace>& traces,
                                        double theta);

struct DimensionProfile {
  std::vector<double> theta_grid;
  std::vector<double> upper;
  std::vector<double> lower;
  double hausdorff = 0;
  double assouad = 0;    // NaN when no materialized sequence was supplied
  double lower_dim = 0;  // NaN likewise
  double x_min = 0;
  double x_max = 0;
  std::size_t window_count = 0;
  double error_bar = 0;  // tracking decay at the deep half plus bucket modulus
};

std::vector<double> default_theta_grid(std::size_t n = 64);

DimensionProfile estimate_profile(
    const ScaleTrace& trace, const std::vector<double>& theta_grid,
    const RatioSequence* seq = nullptr, std::size_t K = 1,
    std::pair<std::size_t, std::size_t> n_range = {8, 64});

}  // namespace morandim
