#include "morandim/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "morandim/log.hpp"

namespace morandim {
namespace {

const double kLog2 = std::log(2.0);
constexpr double kGridTol = 1e-9;

std::size_t window_buckets(const ScaleTrace& trace, double theta) {
  const double W = std::log(1.0 / theta);
  return static_cast<std::size_t>(std::floor(W / trace.bucket_width())) + 1;
}

// Minima of values[i..i+m-1] for every start i in [begin, end), via the
// standard monotone-deque sweep.
std::vector<double> sliding_min(const std::vector<double>& values,
                                std::size_t m, std::size_t begin,
                                std::size_t end) {
  std::vector<double> mins;
  mins.reserve(end - begin);
  std::deque<std::size_t> q;
  for (std::size_t j = begin; j < begin + m - 1; ++j) {
    while (!q.empty() && values[q.back()] >= values[j]) q.pop_back();
    q.push_back(j);
  }
  for (std::size_t i = begin; i < end; ++i) {
    const std::size_t j = i + m - 1;
    while (!q.empty() && values[q.back()] >= values[j]) q.pop_back();
    q.push_back(j);
    while (q.front() < i) q.pop_front();
    mins.push_back(values[q.front()]);
  }
  return mins;
}

// Window-infimum samples across the deep half of the trace.
std::vector<double> window_infima(const ScaleTrace& trace, double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("theta must lie in (0,1]");
  const std::size_t n = trace.lo.size();
  if (theta == 1.0) {
    std::vector<double> out(trace.hi.begin() + n / 2, trace.hi.end());
    return out;
  }
  const std::size_t m = window_buckets(trace, theta);
  const std::size_t begin = n / 2;
  if (m > n || begin + m > n) throw std::runtime_error("horizon too short");
  return sliding_min(trace.lo, m, begin, n - m + 1);
}

}  // namespace

ScaleTrace ScaleTrace::from_summary(const StreamSummary& summary) {
  ScaleTrace trace;
  trace.d = summary.d;
  trace.x_lo = summary.x_lo;
  trace.x_hi = summary.x_hi;
  trace.lo = summary.bucket_lo;
  trace.hi = summary.bucket_hi;
  return trace;
}

ScaleTrace ScaleTrace::from_sequence(const RatioSequence& seq, double x_lo,
                                     double x_hi, std::size_t n_buckets) {
  if (n_buckets == 0) throw std::invalid_argument("need at least one bucket");
  if (!(x_lo > 0.0) || !(x_hi > x_lo) ||
      x_hi > std::log(seq.depth(seq.size())) + kGridTol)
    throw std::invalid_argument("trace window outside synthesized range");
  ScaleTrace trace;
  trace.d = seq.dimension();
  trace.x_lo = x_lo;
  trace.x_hi = x_hi;
  trace.lo.assign(n_buckets, std::numeric_limits<double>::infinity());
  trace.hi.assign(n_buckets, 0.0);
  const double w = trace.bucket_width();
  const double D = seq.dimension() * kLog2;
  const auto bucket_of = [&](double x) {
    const double t = (x - x_lo) / w;
    const std::size_t j = t <= 0.0 ? 0 : static_cast<std::size_t>(t);
    return std::min(j, n_buckets - 1);
  };
  // The trace axis is x = log E; level k holds the count on (x_{k-1}, x_k]
  // with x_k = log E_k.
  for (std::size_t k = 1; k <= seq.size(); ++k) {
    const double left = k == 1 ? -std::numeric_limits<double>::infinity()
                               : std::log(seq.depth(k - 1));
    const double l = std::max(left, x_lo);
    const double r = std::min(std::log(seq.depth(k)), x_hi);
    if (l > r) continue;
    const std::size_t bl = bucket_of(l);
    const std::size_t br = bucket_of(r);
    // s = k D e^{-x} decreases across the interval: the left end of every
    // covered stretch is a max candidate, the right end a min candidate.
    trace.hi[bl] = std::max(trace.hi[bl], k * D * std::exp(-l));
    trace.lo[br] = std::min(trace.lo[br], k * D * std::exp(-r));
    for (std::size_t j = bl + 1; j <= br; ++j) {
      const double v = k * D * std::exp(-(x_lo + j * w));
      trace.lo[j - 1] = std::min(trace.lo[j - 1], v);
      trace.hi[j] = std::max(trace.hi[j], v);
    }
  }
  return trace;
}

double upper_intermediate(const ScaleTrace& trace, double theta) {
  const std::vector<double> infima = window_infima(trace, theta);
  return *std::max_element(infima.begin(), infima.end());
}

double lower_intermediate(const ScaleTrace& trace, double theta) {
  if (theta == 0.0) return hausdorff_estimate(trace);
  const std::vector<double> infima = window_infima(trace, theta);
  return *std::min_element(infima.begin(), infima.end());
}

double hausdorff_estimate(const ScaleTrace& trace) {
  const std::size_t n = trace.lo.size();
  return *std::min_element(trace.lo.begin() + n / 2, trace.lo.end());
}

namespace {

LocalDimensionReport local_extreme(const RatioSequence& seq, std::size_t K,
                                   std::pair<std::size_t, std::size_t> n_range,
                                   bool maximize) {
  if (K < 1 || n_range.first < 1 || n_range.second < n_range.first)
    throw std::invalid_argument("bad window range");
  const std::vector<double>& depths = seq.depths();
  const std::size_t len = depths.size();
  const std::size_t n_begin = n_range.first + (n_range.second - n_range.first) / 2;
  if (K + n_range.second > len) throw std::runtime_error("insufficient depth");
  const double D = seq.dimension() * kLog2;
  LocalDimensionReport report;
  report.value = maximize ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
  for (std::size_t n = n_begin; n <= n_range.second; ++n) {
    for (std::size_t k = K; k + n <= len; ++k) {
      const double lo = k == 1 ? 0.0 : depths[k - 2];
      const double span = depths[k + n - 2] - lo;
      const double value = static_cast<double>(n) * D / span;
      if (maximize ? value > report.value : value < report.value) {
        report.value = value;
        report.n = n;
        report.k = k;
      }
    }
  }
  return report;
}

}  // namespace

LocalDimensionReport assouad_estimate(const RatioSequence& seq, std::size_t K,
                                      std::pair<std::size_t, std::size_t> n_range) {
  return local_extreme(seq, K, n_range, true);
}

LocalDimensionReport lower_dim_estimate(const RatioSequence& seq, std::size_t K,
                                        std::pair<std::size_t, std::size_t> n_range) {
  return local_extreme(seq, K, n_range, false);
}

ScaleTrace union_trace(const std::vector<ScaleTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("empty family");
  ScaleTrace out = traces.front();
  for (std::size_t i = 1; i < traces.size(); ++i) {
    const ScaleTrace& t = traces[i];
    if (t.d != out.d || t.lo.size() != out.lo.size() ||
        std::abs(t.x_lo - out.x_lo) > kGridTol ||
        std::abs(t.x_hi - out.x_hi) > kGridTol)
      throw std::invalid_argument("traces must share a common grid");
    for (std::size_t j = 0; j < out.lo.size(); ++j) {
      out.lo[j] = std::max(out.lo[j], t.lo[j]);
      out.hi[j] = std::max(out.hi[j], t.hi[j]);
    }
  }
  return out;
}

std::pair<double, double> union_profile(const std::vector<ScaleTrace>& traces,
                                        double theta) {
  const ScaleTrace combined = union_trace(traces);
  return {upper_intermediate(combined, theta),
          lower_intermediate(combined, theta)};
}

std::vector<double> default_theta_grid(std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 1.0 : static_cast<double>(i) / (n - 1);
    grid[i] = std::pow(0.01, 1.0 - t);
  }
  grid.back() = 1.0;
  return grid;
}

DimensionProfile estimate_profile(const ScaleTrace& trace,
                                  const std::vector<double>& theta_grid,
                                  const RatioSequence* seq, std::size_t K,
                                  std::pair<std::size_t, std::size_t> n_range) {
  DimensionProfile profile;
  profile.theta_grid = theta_grid;
  profile.x_min = trace.x_lo;
  profile.x_max = trace.x_hi;
  for (double theta : theta_grid) {
    profile.upper.push_back(upper_intermediate(trace, theta));
    profile.lower.push_back(lower_intermediate(trace, theta));
    profile.window_count += trace.lo.size() / 2;
  }
  profile.hausdorff = hausdorff_estimate(trace);
  if (seq != nullptr) {
    profile.assouad = assouad_estimate(*seq, K, n_range).value;
    profile.lower_dim = lower_dim_estimate(*seq, K, n_range).value;
  } else {
    profile.assouad = std::numeric_limits<double>::quiet_NaN();
    profile.lower_dim = std::numeric_limits<double>::quiet_NaN();
  }
  const double x_mid = 0.5 * (trace.x_lo + trace.x_hi);
  profile.error_bar =
      trace.d * kLog2 * std::exp(-x_mid) + trace.d * trace.bucket_width();
  log_at(LogLevel::kDebug, "profile over %zu thetas, error bar %.3g",
         theta_grid.size(), profile.error_bar);
  return profile;
}

}  // namespace morandim
