#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "morandim/profile.hpp"
#include "morandim/scale_function.hpp"
#include "morandim/sequence.hpp"

namespace morandim {

// One cube of a depth-n construction step.  The word packs one d-bit symbol
// per level, level 1 in the most significant group, so integer order equals
// lexicographic word order.  Bit j of a symbol selects the offset 1 - r in
// coordinate j.
struct Cube {
  std::uint32_t depth = 0;
  std::uint64_t word = 0;
  std::vector<double> corner;
  double side = 0;
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

struct HomogeneousMoranSet {
  int d = 1;
  RatioSequence seq;
};

// All 2^(d*depth) cubes of the construction at the given depth.
std::vector<Cube> enumerate_cubes(const HomogeneousMoranSet& set, std::size_t depth);

// Mass of the uniform Bernoulli measure on the region, evaluated at the depth
// whose cube diameter first drops to the region's max-norm diameter.
double bernoulli_mass(const HomogeneousMoranSet& set, const Box& region);

// Symbol of the plateau alphabet: u selects a half-step, v a coarse block.
struct PsiSymbol {
  int u = 0;  // {0, 1}
  int v = 0;  // {0, 1, 2, 3}
};
using PsiAddress = std::vector<PsiSymbol>;

// u * 2^-k + v * 4^(k-1)
double psi_value(int k, PsiSymbol i);

// a(eta): total plateau width of the address, an exact dyadic rational.
double address_offset(const PsiAddress& eta);

// Collapse a depth-`length` word into its address: consecutive symbol triples
// map through (i, j, k) -> (i1, j1 + 2*k1) on first coordinates, producing one
// address symbol per complete triple up to the largest k with n_k <= length.
PsiAddress lambda_map(std::uint64_t word, std::size_t length, int d,
                      const std::vector<std::size_t>& thresholds);

// Moran set whose per-branch contraction schedule depends on the branch's
// address: each address eta gets the scale function g_eta obtained from the
// base bump/connector train by inserting a constant plateau of width
// psi(k, eta_k) after the k-th connector.
class InhomogeneousMoranSet {
 public:
  InhomogeneousMoranSet(const ProfileFunction& h, double lambda, double alpha, int d,
                        int epochs = 6, double w0_floor = 1.0);

  int dimension() const { return d_; }
  double w0() const { return w0_; }
  int epochs() const { return static_cast<int>(eps_.size()) - 1; }

  // y_k = w0 + sum of the first k block widths; y(0) = w0.
  double y(std::size_t k) const;
  const std::vector<double>& eps_schedule() const { return eps_; }
  const std::vector<double>& gamma_schedule() const { return gamma_; }
  // n_k for k = 1.. : deepest level whose breakpoint is at or before y_k.
  const std::vector<std::size_t>& thresholds() const { return n_k_; }

  PiecewiseScaleFunction build_g_eta(const PsiAddress& eta) const;
  SynthesisResult sequence_for(const PsiAddress& eta, std::size_t min_levels) const;

  // Smallest depth past the shared prefix of all extensions of eta.
  std::size_t smallest_valid_depth(const PsiAddress& eta) const;

  std::vector<Cube> emit(std::size_t depth) const;
  // Depth-`depth` cubes of the eta-addressed homogeneous set lying inside the
  // region selected by eta's symbol triples.
  std::vector<Cube> restriction(const PsiAddress& eta, std::size_t depth) const;

 private:
  PiecewiseScaleFunction train(const PsiAddress& eta) const;
  void solve_schedule(int epochs);

  ProfileFunction h_;
  double lambda_;
  double alpha_;
  int d_;
  double w0_;
  std::vector<double> eps_;    // eps_1 .. eps_{N+1} at indices 0..N
  std::vector<double> gamma_;  // gamma_1 .. gamma_N
  std::vector<double> y_;      // y_[k] = y_k, y_[0] = w0
  std::vector<std::size_t> n_k_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::string, SynthesisResult> cache_;
};

}  // namespace morandim
