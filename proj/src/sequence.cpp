#include "morandim/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "morandim/log.hpp"
#include "morandim/profile.hpp"

namespace morandim {
namespace {

const double kLog2 = std::log(2.0);
constexpr double kDepthTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed-form families for inverting W(theta) = h / (theta (alpha - h)).
enum class DescentForm { Flat, Affine, Extremal, Numeric };

struct EPiece {
  PieceKind kind;
  double E_lo, E_hi;
  double phi_lo, phi_hi;
  double coef;  // Constant: value; Rise: alpha; Fall: lambda

  DescentForm form = DescentForm::Numeric;
  double eps = 0;
  double W_left = 0;   // W at theta = 1 (left end of the piece)
  double W_right = 0;  // W at theta = eps (right end)
  double Kprime = 0;   // E * theta * (alpha - h(theta)), constant along the piece
  double p0 = 0, p1 = 0, p2 = 0;
  const ProfileFunction* profile = nullptr;
};

double W_of(const ProfileFunction& h, double alpha, double theta) {
  const double v = h(theta);
  return v / (theta * (alpha - v));
}

// Root of A x^2 + B x + C inside [lo, hi]; NaN when none qualifies.
double quadratic_root_in(double A, double B, double C, double lo, double hi) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (std::abs(A) <= 1e-14 * (std::abs(B) + 1.0)) {
    if (B == 0) return nan;
    const double r = -C / B;
    return (r >= lo - 1e-9 && r <= hi + 1e-9) ? r : nan;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0) return nan;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (B + (B >= 0 ? sq : -sq));
  const double r1 = q / A;
  if (r1 >= lo - 1e-9 && r1 <= hi + 1e-9) return r1;
  if (q != 0) {
    const double r2 = C / q;
    if (r2 >= lo - 1e-9 && r2 <= hi + 1e-9) return r2;
  }
  return nan;
}

class BreakpointSolver {
 public:
  explicit BreakpointSolver(const PiecewiseScaleFunction& g)
      : alpha_(g.alpha()), lambda_(g.lambda()) {
    const auto& pieces = g.pieces();
    const auto& offsets = g.offsets();
    pieces_.reserve(pieces.size() + 1);

    // Extend the leading value down to scale depth zero so every positive
    // target has a root.
    EPiece pre;
    pre.kind = PieceKind::Constant;
    pre.E_lo = 0.0;
    pre.E_hi = 1.0;
    pre.phi_lo = 0.0;
    pre.phi_hi = g.lead_value();
    pre.coef = g.lead_value();
    pieces_.push_back(pre);

    double phi = pre.phi_hi;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const Piece& p = pieces[i];
      EPiece e;
      e.kind = p.kind;
      e.E_lo = std::exp(offsets[i]);
      e.E_hi = std::exp(offsets[i + 1]);
      e.phi_lo = phi;
      double dphi = 0;
      switch (p.kind) {
        case PieceKind::Constant:
          e.coef = p.start_value;
          dphi = p.start_value * (e.E_hi - e.E_lo);
          break;
        case PieceKind::RiseTowardUpper:
          e.coef = alpha_;
          dphi = alpha_ * (e.E_hi - e.E_lo);
          break;
        case PieceKind::FallTowardLower:
          e.coef = lambda_;
          dphi = lambda_ * (e.E_hi - e.E_lo);
          break;
        case PieceKind::ProfileDescent: {
          const DescentData& dd = *p.descent;
          const ProfileFunction& h = *dd.profile;
          e.eps = dd.eps;
          e.profile = &h;
          e.W_left = W_of(h, alpha_, 1.0);
          e.W_right = W_of(h, alpha_, dd.eps);
          e.Kprime = std::exp(offsets[i] - dd.x_star) * (alpha_ - h(dd.eps));
          if (e.W_right - e.W_left <= 1e-12 * std::max(1.0, e.W_left)) {
            e.form = DescentForm::Flat;
          } else if (h.family() == ProfileFamily::Affine) {
            e.form = DescentForm::Affine;
            e.p0 = h.params()[0];
            e.p1 = h.params()[1];
          } else if (h.family() == ProfileFamily::Extremal) {
            e.form = DescentForm::Extremal;
            e.p0 = h.params()[0];
            e.p1 = h.params()[1];
            e.p2 = h.params()[2];
          } else {
            e.form = DescentForm::Numeric;
          }
          dphi = std::max(0.0, e.Kprime * (e.W_right - e.W_left));
          break;
        }
      }
      phi += dphi;
      e.phi_hi = phi;
      pieces_.push_back(e);
    }
  }

  double phi_total() const { return pieces_.back().phi_hi; }

  // Targets must be non-decreasing across calls.
  double solve_next(double target) {
    while (cursor_ < pieces_.size() && target > pieces_[cursor_].phi_hi) ++cursor_;
    if (cursor_ == pieces_.size())
      throw std::runtime_error("decay condition violated");
    return solve_in(pieces_[cursor_], target);
  }

  double solve(double target) {
    cursor_ = 0;
    return solve_next(target);
  }

 private:
  double solve_in(const EPiece& p, double target) const {
    double E;
    if (p.kind != PieceKind::ProfileDescent) {
      E = p.E_lo + (target - p.phi_lo) / p.coef;
    } else {
      const double Tw = p.W_left + (target - p.phi_lo) / p.Kprime;
      double theta;
      double hv;
      switch (p.form) {
        case DescentForm::Flat:
          theta = 1.0;
          hv = (*p.profile)(1.0);
          break;
        case DescentForm::Affine: {
          // a + b t = Tw t (alpha - a - b t)
          const double a = p.p0, b = p.p1;
          theta = quadratic_root_in(Tw * b, b - Tw * (alpha_ - a), a, p.eps, 1.0);
          if (std::isnan(theta)) theta = bisect_theta(p, Tw);
          hv = a + b * theta;
          break;
        }
        case DescentForm::Extremal: {
          // h = (l c + u t) / (c + t) with l = p0, u = p1, c = p2
          const double l = p.p0, u = p.p1, c = p.p2;
          theta = quadratic_root_in(Tw * (alpha_ - u), Tw * (alpha_ - l) * c - u,
                                    -l * c, p.eps, 1.0);
          if (std::isnan(theta)) theta = bisect_theta(p, Tw);
          hv = (l * c + u * theta) / (c + theta);
          break;
        }
        case DescentForm::Numeric:
          theta = bisect_theta(p, Tw);
          hv = (*p.profile)(theta);
          break;
      }
      E = target / hv;
    }
    if (E < p.E_lo) E = p.E_lo;
    if (E > p.E_hi) E = p.E_hi;
    return E;
  }

  double bisect_theta(const EPiece& p, double Tw) const {
    double lo = p.eps, hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (W_of(*p.profile, alpha_, mid) > Tw) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  std::vector<EPiece> pieces_;
  std::size_t cursor_ = 0;
  double alpha_;
  double lambda_;
};

}  // namespace

RatioSequence::RatioSequence(int d, std::vector<double> depths)
    : d_(d), depths_(std::move(depths)) {
  if (d_ < 1) throw std::invalid_argument("ambient dimension must be positive");
  if (depths_.empty()) throw std::invalid_argument("sequence needs at least one level");
  double prev = 0.0;
  for (double e : depths_) {
    if (!(e > prev)) throw std::invalid_argument("scale depths must be increasing");
    if (e - prev < kLog2 - kDepthTol)
      throw std::invalid_argument("contraction ratio above 1/2");
    prev = e;
  }
}

double RatioSequence::log_ratio(std::size_t k) const {
  const double prev = k >= 2 ? depths_[k - 2] : 0.0;
  return -(depths_[k - 1] - prev);
}

double RatioSequence::ratio(std::size_t k) const {
  return std::min(0.5, std::exp(log_ratio(k)));
}

std::size_t RatioSequence::count_at(double delta) const {
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("delta must lie in (0,1)");
  const double E = -std::log(delta);
  if (E > depths_.back() + kDepthTol)
    throw std::runtime_error("insufficient depth");
  auto it = std::lower_bound(depths_.begin(), depths_.end(), E);
  std::size_t idx = static_cast<std::size_t>(it - depths_.begin());
  if (idx == depths_.size()) idx = depths_.size() - 1;
  return idx + 1;
}

double RatioSequence::scale_exponent(double delta) const {
  const std::size_t k = count_at(delta);
  return static_cast<double>(k) * d_ * kLog2 / (-std::log(delta));
}

double next_scale_breakpoint(const PiecewiseScaleFunction& g, double y, int d) {
  if (d < 1) throw std::invalid_argument("ambient dimension must be positive");
  if (y < 0 || y > g.total_width())
    throw std::out_of_range("evaluation outside assembled domain");
  BreakpointSolver solver(g);
  const double target = g(y) * std::exp(y) + d * kLog2;
  if (target > solver.phi_total())
    throw std::runtime_error("decay condition violated");
  return std::log(solver.solve(target));
}

std::size_t levels_within(const PiecewiseScaleFunction& g_tilde, int d, double x_max,
                          double w0) {
  const PiecewiseScaleFunction g = with_constant_prefix(g_tilde, w0);
  const double x_end = std::min(x_max, g.total_width());
  const double phi_end = g(x_end) * std::exp(x_end);
  return static_cast<std::size_t>(std::floor(phi_end / (d * kLog2)));
}

SynthesisResult synthesize_sequence(const PiecewiseScaleFunction& g_tilde, int d,
                                    std::size_t n_levels, double w0) {
  if (d < 1) throw std::invalid_argument("ambient dimension must be positive");
  if (n_levels == 0) throw std::invalid_argument("need at least one level");
  if (!(w0 > 0)) throw std::invalid_argument("lead-in width must be positive");

  PiecewiseScaleFunction g_full = with_constant_prefix(g_tilde, w0);
  BreakpointSolver solver(g_full);
  const double D = d * kLog2;

  std::vector<double> depths;
  depths.reserve(n_levels);
  double min_gap = kInf;
  double prev = 0.0;
  for (std::size_t k = 1; k <= n_levels; ++k) {
    const double E = solver.solve_next(static_cast<double>(k) * D);
    min_gap = std::min(min_gap, E - prev);
    prev = E;
    depths.push_back(E);
  }

  SynthesisResult result{RatioSequence(d, std::move(depths)), w0, g_full, 0.0,
                         std::min(0.5, std::exp(-min_gap))};

  const auto& Es = result.sequence.depths();
  const double x_end = std::log(Es.back());
  const std::size_t n_grid = 2048;
  double worst = -kInf;
  for (std::size_t i = 0; i <= n_grid; ++i) {
    const double x = w0 + (x_end - w0) * static_cast<double>(i) / n_grid;
    double E = std::exp(x);
    if (E > Es.back()) E = Es.back();
    auto it = std::lower_bound(Es.begin(), Es.end(), E);
    const std::size_t count = static_cast<std::size_t>(it - Es.begin()) + 1;
    const double s = static_cast<double>(std::min(count, Es.size())) * D / E;
    const double g = g_full(x);
    worst = std::max(worst, std::abs(s - g) - D / E);
  }
  result.tracking_max_excess = worst;
  return result;
}

StreamSummary stream_synthesize(const PiecewiseScaleFunction& g_tilde, int d,
                                double x_lo, double x_hi, std::size_t n_buckets,
                                std::size_t n_samples, double w0) {
  if (d < 1) throw std::invalid_argument("ambient dimension must be positive");
  if (!(w0 > 0)) throw std::invalid_argument("lead-in width must be positive");
  if (!(x_lo < x_hi)) throw std::invalid_argument("empty synthesis window");
  if (n_buckets < 1 || n_samples < 2)
    throw std::invalid_argument("degenerate summary resolution");

  PiecewiseScaleFunction g_full = with_constant_prefix(g_tilde, w0);
  if (x_hi > g_full.total_width() + 1e-9)
    throw std::invalid_argument("synthesis window exceeds assembled domain");
  BreakpointSolver solver(g_full);
  const double D = d * kLog2;

  StreamSummary sum;
  sum.d = d;
  sum.w0 = w0;
  sum.x_lo = x_lo;
  sum.x_hi = x_hi;
  sum.bucket_lo.assign(n_buckets, kInf);
  sum.bucket_hi.assign(n_buckets, -kInf);

  const double db = (x_hi - x_lo) / static_cast<double>(n_buckets);
  std::vector<double> Eb(n_buckets + 1);
  for (std::size_t i = 0; i < n_buckets; ++i)
    Eb[i] = std::exp(x_lo + db * static_cast<double>(i));
  Eb[n_buckets] = std::exp(x_hi);
  const double E_end = Eb[n_buckets];

  std::vector<double> xs(n_samples), Es(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    xs[i] = x_lo + (x_hi - x_lo) * static_cast<double>(i) /
                       static_cast<double>(n_samples - 1);
    Es[i] = std::exp(xs[i]);
  }
  sum.samples.reserve(n_samples);

  const double phi_total = solver.phi_total();
  std::size_t b = 0;
  bool opened = false;
  std::size_t sp = 0;
  double E_prev = 0.0;
  double min_gap = kInf;
  double worst = -kInf;
  std::uint64_t n_levels = 0;

  auto take_sample = [&](std::uint64_t count) {
    const double E = Es[sp];
    const double s = static_cast<double>(count) * D / E;
    const double g = g_full(xs[sp]);
    worst = std::max(worst, std::abs(s - g) - D / E);
    sum.samples.push_back({xs[sp], s, g});
    ++sp;
  };

  std::uint64_t k = 1;
  for (;; ++k) {
    const double target = static_cast<double>(k) * D;
    if (target > phi_total) break;  // count k covers the rest of the domain
    const double E_k = solver.solve_next(target);
    min_gap = std::min(min_gap, E_k - E_prev);
    E_prev = E_k;
    if (E_k <= E_end) ++n_levels;

    while (sp < n_samples && Es[sp] <= E_k) take_sample(k);

    if (E_k >= Eb[0]) {
      const double kD = static_cast<double>(k) * D;
      if (!opened) {
        sum.bucket_hi[0] = std::max(sum.bucket_hi[0], kD / Eb[0]);
        opened = true;
      }
      while (b < n_buckets && Eb[b + 1] <= E_k) {
        sum.bucket_lo[b] = std::min(sum.bucket_lo[b], kD / Eb[b + 1]);
        ++b;
        if (b < n_buckets) sum.bucket_hi[b] = std::max(sum.bucket_hi[b], kD / Eb[b]);
      }
      if (b < n_buckets) {
        const double inv = 1.0 / E_k;
        const double bottom = kD * inv;
        sum.bucket_lo[b] = std::min(sum.bucket_lo[b], bottom);
        sum.bucket_hi[b] = std::max(sum.bucket_hi[b], bottom + D * inv);
      }
    }
    if (E_k > E_end) break;
  }

  // Domain ran out before the next breakpoint: count k holds through E_end.
  const double kD = static_cast<double>(k) * D;
  if (!opened && (b < n_buckets)) {
    sum.bucket_hi[0] = std::max(sum.bucket_hi[0], kD / Eb[0]);
    opened = true;
  }
  while (b < n_buckets) {
    sum.bucket_lo[b] = std::min(sum.bucket_lo[b], kD / Eb[b + 1]);
    ++b;
    if (b < n_buckets) sum.bucket_hi[b] = std::max(sum.bucket_hi[b], kD / Eb[b]);
  }
  while (sp < n_samples) take_sample(k);

  sum.n_levels = n_levels;
  sum.min_gap = min_gap;
  sum.tracking_max_excess = worst;
  log_at(LogLevel::kInfo, "streamed %llu levels over [%.2f, %.2f]",
         static_cast<unsigned long long>(sum.n_levels), x_lo, x_hi);
  return sum;
}

}  // namespace morandim
