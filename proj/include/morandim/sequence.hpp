#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "morandim/scale_function.hpp"

namespace morandim {

// Contraction-ratio sequence stored through the cumulative scale depths
// E_k = log(1/rho_k) = -(log r_1 + ... + log r_k).  Working in E space keeps
// deep sequences finite where the linear ratios underflow.
class RatioSequence {
 public:
  RatioSequence(int d, std::vector<double> depths);

  int dimension() const { return d_; }
  std::size_t size() const { return depths_.size(); }

  // k is 1-based throughout, matching rho_k = r_1 ... r_k with rho_0 = 1.
  double depth(std::size_t k) const { return depths_[k - 1]; }
  double log_rho(std::size_t k) const { return -depths_[k - 1]; }
  double log_ratio(std::size_t k) const;
  double ratio(std::size_t k) const;  // exp(log_ratio), clamped to <= 1/2

  // Number of generations at scale delta: the unique k with rho_k <= delta < rho_{k-1}.
  std::size_t count_at(double delta) const;
  // k(delta) * d * log2 / (-log delta)
  double scale_exponent(double delta) const;

  const std::vector<double>& depths() const { return depths_; }

 private:
  int d_;
  std::vector<double> depths_;  // strictly increasing, positive
};

struct SynthesisResult {
  RatioSequence sequence;
  double w0;
  PiecewiseScaleFunction g_full;  // input with a constant lead-in of width w0
  double tracking_max_excess;     // max over a dense grid of |s - g| - d*log2*e^{-x}
  double max_ratio;               // largest contraction ratio produced
};

// Smallest x' > y at which the generation count must advance: solves
// g(x') e^{x'} = g(y) e^{y} + d log 2.  Throws "decay condition violated"
// when no root exists inside the domain of g.
double next_scale_breakpoint(const PiecewiseScaleFunction& g, double y, int d);

// Number of breakpoints that land at or before x_max for the given scale function.
std::size_t levels_within(const PiecewiseScaleFunction& g_tilde, int d, double x_max,
                          double w0 = 1.0);

// Materializes n_levels contraction ratios whose scale-count function tracks
// g_tilde (prefixed with a constant lead-in of width w0).
SynthesisResult synthesize_sequence(const PiecewiseScaleFunction& g_tilde, int d,
                                    std::size_t n_levels, double w0 = 1.0);

struct StreamSample {
  double x;  // log log (1/scale)
  double s;  // scale exponent at that scale
  double g;  // scale function value
};

// Aggregated view of a synthesis too deep to materialize: per-bucket envelope
// of the scale exponent over a uniform x-grid, plus spot samples.
struct StreamSummary {
  int d = 0;
  double w0 = 0;
  double x_lo = 0;
  double x_hi = 0;
  std::uint64_t n_levels = 0;       // breakpoints with x_k <= x_hi
  double min_gap = 0;               // min over k of E_k - E_{k-1}
  double tracking_max_excess = 0;   // over the spot samples
  std::vector<double> bucket_lo;    // inf of s over each bucket
  std::vector<double> bucket_hi;    // sup of s over each bucket
  std::vector<StreamSample> samples;

  double bucket_width() const {
    return (x_hi - x_lo) / static_cast<double>(bucket_lo.size());
  }
};

StreamSummary stream_synthesize(const PiecewiseScaleFunction& g_tilde, int d,
                                double x_lo, double x_hi,
                                std::size_t n_buckets = std::size_t{1} << 18,
                                std::size_t n_samples = 10000, double w0 = 1.0);

}  // namespace morandim
