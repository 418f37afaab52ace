#include "morandim/moran.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "morandim/dini.hpp"
#include "morandim/log.hpp"

namespace morandim {
namespace {

const double kLog2 = std::log(2.0);
constexpr std::size_t kWordBitBudget = 24;
constexpr std::uint64_t kMassNodeBudget = std::uint64_t{1} << 26;
constexpr std::size_t kSentinel = std::numeric_limits<std::size_t>::max();

struct LevelOffsets {
  std::vector<double> off;  // (1 - r_i) * rho_{i-1}
  double side = 1.0;        // rho_depth
};

LevelOffsets level_offsets(const RatioSequence& seq, std::size_t depth) {
  LevelOffsets lo;
  lo.off.resize(depth);
  for (std::size_t i = 1; i <= depth; ++i) {
    const double rho_prev = i >= 2 ? std::exp(-seq.depth(i - 1)) : 1.0;
    const double r_i = std::exp(seq.log_ratio(i));
    lo.off[i - 1] = (1.0 - r_i) * rho_prev;
  }
  if (depth > 0) lo.side = std::exp(-seq.depth(depth));
  return lo;
}

std::uint32_t symbol_at(std::uint64_t word, std::size_t level, std::size_t depth,
                        int d) {
  const std::size_t shift = static_cast<std::size_t>(d) * (depth - level);
  return static_cast<std::uint32_t>((word >> shift) & ((std::uint32_t{1} << d) - 1));
}

Cube make_cube(int d, std::size_t depth, std::uint64_t w, const LevelOffsets& off) {
  Cube c;
  c.depth = static_cast<std::uint32_t>(depth);
  c.word = w;
  c.side = off.side;
  c.corner.assign(static_cast<std::size_t>(d), 0.0);
  for (std::size_t i = 1; i <= depth; ++i) {
    const std::uint32_t sym = symbol_at(w, i, depth, d);
    if (!sym) continue;
    for (int j = 0; j < d; ++j)
      if ((sym >> j) & 1u) c.corner[static_cast<std::size_t>(j)] += off.off[i - 1];
  }
  return c;
}

void check_word_budget(int d, std::size_t depth) {
  if (static_cast<std::size_t>(d) * depth > kWordBitBudget)
    throw std::length_error("cube budget exceeded");
}

std::string encode_address(const PsiAddress& eta) {
  std::ostringstream os;
  for (const PsiSymbol& s : eta) os << s.u << ',' << s.v << ';';
  return os.str();
}

}  // namespace

std::vector<Cube> enumerate_cubes(const HomogeneousMoranSet& set, std::size_t depth) {
  check_word_budget(set.d, depth);
  if (depth > set.seq.size())
    throw std::runtime_error("depth exceeds synthesized sequence length");
  const LevelOffsets off = level_offsets(set.seq, depth);
  const std::uint64_t total = std::uint64_t{1}
                              << (static_cast<std::size_t>(set.d) * depth);
  std::vector<Cube> cubes;
  cubes.reserve(total);
  for (std::uint64_t w = 0; w < total; ++w)
    cubes.push_back(make_cube(set.d, depth, w, off));
  return cubes;
}

double bernoulli_mass(const HomogeneousMoranSet& set, const Box& region) {
  const std::size_t d = static_cast<std::size_t>(set.d);
  if (region.lo.size() != d || region.hi.size() != d)
    throw std::invalid_argument("region dimension mismatch");
  double diam = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(region.lo[j] <= region.hi[j]))
      throw std::invalid_argument("empty region");
    if (region.lo[j] < -1e-12 || region.hi[j] > 1.0 + 1e-12)
      throw std::invalid_argument("region outside the unit cube");
    diam = std::max(diam, region.hi[j] - region.lo[j]);
  }
  if (diam >= 1.0) return 1.0;
  const std::size_t k = set.seq.count_at(diam);
  if (k == 0) return 1.0;

  std::vector<double> sides(k);
  for (std::size_t i = 1; i <= k; ++i) sides[i - 1] = std::exp(-set.seq.depth(i));
  const LevelOffsets off = level_offsets(set.seq, k);

  std::uint64_t budget = kMassNodeBudget;
  std::vector<double> corner(d, 0.0);
  // Counts depth-k cubes meeting the region below the current partial corner.
  auto recurse = [&](auto&& self, std::size_t level) -> std::uint64_t {
    if (budget-- == 0) throw std::length_error("cube budget exceeded");
    const double side = level == 0 ? 1.0 : sides[level - 1];
    for (std::size_t j = 0; j < d; ++j)
      if (corner[j] > region.hi[j] || corner[j] + side < region.lo[j]) return 0;
    if (level == k) return 1;
    std::uint64_t total = 0;
    const std::uint32_t symbols = std::uint32_t{1} << d;
    for (std::uint32_t sym = 0; sym < symbols; ++sym) {
      for (std::size_t j = 0; j < d; ++j)
        if ((sym >> j) & 1u) corner[j] += off.off[level];
      total += self(self, level + 1);
      for (std::size_t j = 0; j < d; ++j)
        if ((sym >> j) & 1u) corner[j] -= off.off[level];
    }
    return total;
  };
  const std::uint64_t count = recurse(recurse, 0);
  return static_cast<double>(count) *
         std::exp2(-static_cast<double>(d) * static_cast<double>(k));
}

double psi_value(int k, PsiSymbol i) {
  if (k < 1) throw std::invalid_argument("level index must be positive");
  if (i.u < 0 || i.u > 1 || i.v < 0 || i.v > 3)
    throw std::invalid_argument("symbol outside the plateau alphabet");
  return i.u * std::exp2(-static_cast<double>(k)) +
         i.v * std::exp2(2.0 * k - 2.0);
}

double address_offset(const PsiAddress& eta) {
  double a = 0.0;
  for (std::size_t n = 0; n < eta.size(); ++n)
    a += psi_value(static_cast<int>(n) + 1, eta[n]);
  return a;
}

PsiAddress lambda_map(std::uint64_t word, std::size_t length, int d,
                      const std::vector<std::size_t>& thresholds) {
  std::size_t kl = 0;
  while (kl < thresholds.size() && thresholds[kl] <= length) ++kl;
  if (3 * kl > length)
    throw std::runtime_error("address blocks exceed word length");
  PsiAddress eta(kl);
  for (std::size_t t = 0; t < kl; ++t) {
    const int u = symbol_at(word, 3 * t + 1, length, d) & 1u;
    const int j = symbol_at(word, 3 * t + 2, length, d) & 1u;
    const int kk = symbol_at(word, 3 * t + 3, length, d) & 1u;
    eta[t] = {u, j + 2 * kk};
  }
  return eta;
}

InhomogeneousMoranSet::InhomogeneousMoranSet(const ProfileFunction& h, double lambda,
                                             double alpha, int d, int epochs,
                                             double w0_floor)
    : h_(h), lambda_(lambda), alpha_(alpha), d_(d) {
  if (d_ < 1 || d_ > 10) throw std::invalid_argument("ambient dimension out of range");
  if (!(lambda_ < alpha_)) throw std::invalid_argument("degenerate class");
  if (!(alpha_ <= d_ + 1e-12))
    throw std::invalid_argument("upper bound exceeds ambient dimension");
  if (epochs < 2) epochs = 2;
  if (!(w0_floor > 0)) throw std::invalid_argument("lead-in width must be positive");
  const ClassReport rep = check_profile_admissible(h_, lambda_, alpha_, 2000);
  if (!rep.member) throw std::runtime_error("profile not admissible");

  w0_ = w0_floor;
  const double D = d_ * kLog2;
  bool ok = false;
  for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
    solve_schedule(epochs);
    y_.assign(1, w0_);
    for (int n = 1; n <= epochs; ++n) {
      const double he = h_(eps_[n - 1]);
      const double hn = h_(eps_[n]);
      const double g = gamma_[n - 1];
      const double width = std::log(1.0 / eps_[n - 1]) +
                           std::log((he - lambda_) / (g - lambda_)) +
                           std::log((alpha_ - g) / (alpha_ - hn));
      y_.push_back(y_.back() + width);
    }

    const PiecewiseScaleFunction g_empty = build_g_eta({});
    n_k_.assign(static_cast<std::size_t>(epochs), kSentinel);
    ok = true;
    for (int k = 1; k <= epochs; ++k) {
      const double yk = y_[static_cast<std::size_t>(k)];
      if (yk > 700.0) continue;  // deeper than any representable scale
      const double phi = g_empty(yk) * std::exp(yk);
      const double levels = std::floor(phi / D);
      if (levels < 3.0 * k) {
        ok = false;
        break;
      }
      n_k_[static_cast<std::size_t>(k) - 1] =
          levels < 1e18 ? static_cast<std::size_t>(levels) : kSentinel;
    }
    if (!ok) w0_ += 1.0;
  }
  if (!ok) throw std::runtime_error("cannot enforce depth thresholds");
  log_at(LogLevel::kInfo, "address schedule ready: w0 %.2f, %d epochs", w0_, epochs);
}

void InhomogeneousMoranSet::solve_schedule(int N) {
  eps_.assign(static_cast<std::size_t>(N) + 1, 0.0);
  gamma_.assign(static_cast<std::size_t>(N), 0.0);
  for (int n = 1; n <= N + 1; ++n)
    eps_[n - 1] = std::exp(-(std::exp2(static_cast<double>(n)) - 1.0));

  const double h0 = h_(0.0);
  const double h1 = h_(1.0);
  if (!(h1 < alpha_))
    throw std::runtime_error("epoch schedule unachievable");

  auto gamma_for = [&](int n) {
    const double base = h0 > lambda_ + 1e-12
                            ? h0
                            : lambda_ + (h1 - lambda_) * std::pow(0.25, n);
    return std::min(base, h_(eps_[n]));
  };
  auto block_width = [&](int n, double eps_n) {
    const double he = h_(eps_n);
    const double g = gamma_[n - 1];
    return std::log(1.0 / eps_n) + std::log((he - lambda_) / (g - lambda_)) +
           std::log((alpha_ - g) / (alpha_ - h_(eps_[n])));
  };

  for (int sweep = 0; sweep < 40; ++sweep) {
    eps_[static_cast<std::size_t>(N)] = eps_[N - 1] * eps_[N - 1];
    for (int n = N; n >= 1; --n) {
      gamma_[n - 1] = gamma_for(n);
      const double target = std::exp2(static_cast<double>(n));
      // block_width is decreasing in eps_n; bisect on log eps.
      double lo_t = -(target + 10.0);
      double hi_t = std::log(0.99);
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo_t + hi_t);
        if (block_width(n, std::exp(mid)) > target) {
          lo_t = mid;
        } else {
          hi_t = mid;
        }
      }
      eps_[n - 1] = std::exp(0.5 * (lo_t + hi_t));
    }
  }

  double resid = 0.0;
  for (int n = 1; n <= N; ++n) {
    gamma_[n - 1] = gamma_for(n);
    resid = std::max(resid, std::abs(block_width(n, eps_[n - 1]) -
                                     std::exp2(static_cast<double>(n))));
    if (n < N && !(eps_[n] < eps_[n - 1])) resid = 1.0;
  }
  if (resid > 1e-10) throw std::runtime_error("epoch schedule unachievable");
}

double InhomogeneousMoranSet::y(std::size_t k) const {
  if (k >= y_.size()) throw std::out_of_range("epoch index beyond schedule");
  return y_[k];
}

PiecewiseScaleFunction InhomogeneousMoranSet::train(const PsiAddress& eta) const {
  const int N = epochs();
  if (static_cast<int>(eta.size()) > N - 1)
    throw std::invalid_argument("address deeper than epoch schedule");
  std::vector<PiecewiseScaleFunction> parts;
  for (int n = 1; n <= N; ++n) {
    parts.push_back(make_bump(h_, eps_[n - 1], lambda_, alpha_));
    parts.push_back(make_connector(h_(eps_[n - 1]), h_(eps_[n]), gamma_[n - 1],
                                   lambda_, alpha_));
    if (n <= static_cast<int>(eta.size())) {
      const double width = psi_value(n, eta[n - 1]);
      if (width > 1e-15)
        parts.push_back(make_constant(h_(eps_[n]), width, lambda_, alpha_));
    }
  }
  return concatenate(parts);
}

PiecewiseScaleFunction InhomogeneousMoranSet::build_g_eta(const PsiAddress& eta) const {
  return with_constant_prefix(train(eta), w0_);
}

SynthesisResult InhomogeneousMoranSet::sequence_for(const PsiAddress& eta,
                                                    std::size_t min_levels) const {
  const std::string key = encode_address(eta);
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.sequence.size() >= min_levels)
      return it->second;
  }
  try {
    SynthesisResult res = synthesize_sequence(train(eta), d_, min_levels, w0_);
    std::lock_guard<std::mutex> lk(cache_mutex_);
    auto inserted = cache_.insert_or_assign(key, res);
    return inserted.first->second;
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()) == "decay condition violated")
      throw std::runtime_error("synthesis horizon exceeded");
    throw;
  }
}

std::size_t InhomogeneousMoranSet::smallest_valid_depth(const PsiAddress& eta) const {
  if (eta.empty()) return 1;
  if (eta.size() > n_k_.size() || n_k_[eta.size() - 1] == kSentinel)
    throw std::out_of_range("address beyond computed thresholds");
  return n_k_[eta.size() - 1] + 1;
}

std::vector<Cube> InhomogeneousMoranSet::emit(std::size_t depth) const {
  check_word_budget(d_, depth);
  std::size_t kl = 0;
  while (kl < n_k_.size() && n_k_[kl] <= depth) ++kl;
  if (3 * kl > depth) throw std::runtime_error("address blocks exceed word length");

  const std::uint64_t total = std::uint64_t{1}
                              << (static_cast<std::size_t>(d_) * depth);
  std::vector<Cube> cubes;
  cubes.reserve(total);
  std::map<std::uint64_t, LevelOffsets> offsets_by_key;
  for (std::uint64_t w = 0; w < total; ++w) {
    std::uint64_t key = 0;
    for (std::size_t t = 0; t < kl; ++t) {
      const std::uint64_t u = symbol_at(w, 3 * t + 1, depth, d_) & 1u;
      const std::uint64_t j = symbol_at(w, 3 * t + 2, depth, d_) & 1u;
      const std::uint64_t kk = symbol_at(w, 3 * t + 3, depth, d_) & 1u;
      key |= (u | ((j + 2 * kk) << 1)) << (3 * t);
    }
    auto it = offsets_by_key.find(key);
    if (it == offsets_by_key.end()) {
      PsiAddress eta(kl);
      for (std::size_t t = 0; t < kl; ++t) {
        const int sym = static_cast<int>((key >> (3 * t)) & 7u);
        eta[t] = {sym & 1, sym >> 1};
      }
      const SynthesisResult res = sequence_for(eta, depth);
      it = offsets_by_key.emplace(key, level_offsets(res.sequence, depth)).first;
    }
    cubes.push_back(make_cube(d_, depth, w, it->second));
  }
  return cubes;
}

std::vector<Cube> InhomogeneousMoranSet::restriction(const PsiAddress& eta,
                                                     std::size_t depth) const {
  check_word_budget(d_, depth);
  if (depth < 3 * eta.size())
    throw std::invalid_argument("depth shallower than the address blocks");
  const SynthesisResult res = sequence_for(eta, depth);
  const LevelOffsets off = level_offsets(res.sequence, depth);
  const std::uint64_t total = std::uint64_t{1}
                              << (static_cast<std::size_t>(d_) * depth);
  std::vector<Cube> cubes;
  for (std::uint64_t w = 0; w < total; ++w) {
    bool match = true;
    for (std::size_t t = 0; t < eta.size() && match; ++t) {
      const int u = symbol_at(w, 3 * t + 1, depth, d_) & 1u;
      const int j = symbol_at(w, 3 * t + 2, depth, d_) & 1u;
      const int kk = symbol_at(w, 3 * t + 3, depth, d_) & 1u;
      match = (u == eta[t].u) && (j + 2 * kk == eta[t].v);
    }
    if (match) cubes.push_back(make_cube(d_, depth, w, off));
  }
  return cubes;
}

}  // namespace morandim
