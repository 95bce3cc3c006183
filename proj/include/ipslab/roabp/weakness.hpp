#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "ipslab/io/json.hpp"
#include "ipslab/roabp/roabp.hpp"

namespace ipslab {

/// q contiguous segments of r variables along a member's order.
struct SegmentDecomposition {
  unsigned q = 0;
  unsigned r = 0;
  std::vector<VarSet> blocks;
  /// Widths at the q-1 internal segment boundaries.
  std::vector<std::size_t> boundary_widths;
};

/// Throws DomainError unless q * r = n.
SegmentDecomposition segment_decomposition(const Roabp& a, unsigned q, unsigned r);

struct MemberTrial {
  std::vector<unsigned> imbalance;  // ||Y_j| - |Z_j|| per segment
  unsigned d = 0;                   // sum_j D_j
  mpz_class per_term_cap;           // 2^{(n - sum_j imbalance_j) / 2}
  mpz_class member_cap;             // prod boundary widths * per_term_cap
  std::size_t rank = 0;             // rank of M_{Y,Z}(A_i)
};

struct WeaknessTrial {
  VarSet y, z;
  std::vector<MemberTrial> members;
  mpz_class summand_cap;  // t * s^{q-1} * 2^{(n - min_i sum_j imbalance_ij) / 2}
  mpz_class refined_cap;  // sum_i member_cap_i
  std::size_t rank = 0;   // rank of M_{Y,Z}(A)
  bool holds = false;     // rank <= refined_cap <= summand_cap and every member rank <= its cap
};

struct SamplerCheck {
  std::size_t samples = 0;
  /// Balanced sampler: frequency of each variable in Y.
  std::vector<double> marginals;
  double max_marginal_deviation = 0;
  bool marginal_ok = false;  // every marginal within 0.5 +- 0.02
  /// Unconditioned sampler: frequency of |Y| = |Z| against C(n, n/2) / 2^n.
  double balance_frequency = 0;
  double balance_expected = 0;
  double balance_se = 0;
  bool balance_ok = false;  // within 3 standard errors
};

SamplerCheck sampler_check(const std::vector<VarId>& vars, std::size_t samples, std::uint64_t seed);

struct WeaknessReport {
  std::size_t n = 0, t = 0, s = 0;
  unsigned q = 0, r = 0;
  std::uint64_t seed = 0;
  std::vector<WeaknessTrial> trials;
  std::size_t violations = 0;
  /// Fraction of trials with rank < summand cap, and < t s^{q-1} 2^{n/2}.
  double freq_below_cap = 0;
  double freq_below_balanced_cap = 0;
  /// Pr[D_j = 1] for an unconditioned r-subset, the empirical mean of D_j
  /// under the balanced sampler, and eps' = 1 - eps_hat.
  double epsilon_theory = 0;
  double epsilon_hat = 0;
  double epsilon_prime = 0;
  /// Frequency of rank >= t s^{q-1} 2^{n/2 - eps' q sqrt(r)/4} and the
  /// exponent eps'' solving freq = t e^{-eps'' q}; a lower bound when freq is 0.
  double freq_above_eps_cap = 0;
  double epsilon_second = 0;
  bool epsilon_second_is_bound = false;
  SamplerCheck sampler;

  Json to_json() const;
  /// Header plus one row per trial: trial, rank, summand_cap, refined_cap, imbalance, D, holds.
  std::string trials_csv() const;
};

/// Members must be multilinear and read the same n = q * r variables.
WeaknessReport weakness_experiment(const SumRoabp& a, unsigned q, unsigned r, unsigned trials, std::uint64_t seed,
                                   std::size_t sampler_samples = 10000);

}  // namespace ipslab
