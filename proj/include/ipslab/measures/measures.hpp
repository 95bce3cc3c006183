#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ipslab/algebra/order.hpp"
#include "ipslab/algebra/poly.hpp"
#include "ipslab/hypercube/dense.hpp"
#include "ipslab/io/json.hpp"
#include "ipslab/measures/matrix.hpp"
#include "ipslab/util/random.hpp"

namespace ipslab {

/// Smallest prime above 2^31.
constexpr std::uint64_t kDefaultRankPrime = 2147483659ULL;
constexpr unsigned kDefaultRankTrials = 3;

/// Exponent vectors linearly independent over Q. Throws DomainError on an empty set.
bool monomials_alg_independent(const std::vector<Monomial>& ms);

struct TMBound {
  std::size_t bound = 0;  // certified lower bound on alg-rank_S
  /// Distinct trailing monomials, ascending in the order.
  std::vector<Monomial> tm_set;
  std::vector<Monomial> independent;
  std::size_t coefficient_count = 0;  // nonzero f_m
  std::size_t constant_only = 0;      // f_m that are nonzero constants
  std::size_t unresolved = 0;         // targeted mode: no TM within the degree cap
};

/// TM of f_m - f_m(0) for each nonzero f_m in coeff_decompose(f, S), then a
/// greedy independent subset of those monomials.
TMBound alg_rank_lower_bound_via_TM(const SparsePoly& f, const VarSet& s, const MonomialOrder& order);

/// Same bound for the multilinear inverse g of `axiom`, read through
/// coeff_on_support without interpolating g. For every m in M[S] the
/// candidates v over the remaining variables are tried in ascending order,
/// degree 1 up to max_degree; the first v with a nonzero coefficient of m*v is TM(g_m - g_m(0)).
TMBound alg_rank_lower_bound_targeted(const SparsePoly& axiom, const VarSet& s, const MonomialOrder& order,
                                      unsigned max_degree = 1);

struct BlockMeasure {
  std::string label;
  VarSet block;
  TMBound tm;
};

struct MeasureReport {
  std::vector<BlockMeasure> blocks;
  std::size_t sum = 0;
  std::string order;
  bool targeted = false;

  Json to_json(const SparsePoly& f) const;
};

MeasureReport kalorkoti_bound(const SparsePoly& f, const VarPartition& partition, const MonomialOrder& order);
MeasureReport kalorkoti_bound_targeted(const SparsePoly& axiom, const VarPartition& partition,
                                       const MonomialOrder& order, unsigned max_degree = 1);

struct FunctionFieldRank {
  std::size_t rank = 0;  // max over the kept trials
  std::vector<std::size_t> per_trial;
  std::size_t discarded = 0;
  std::vector<std::string> log;
  std::string field;
};

/// T = supp(g) minus (Y u Z). Rationals are reduced modulo `prime`; finite
/// fields are kept and T is sampled from them.
FunctionFieldRank rank_over_function_field(const SparsePoly& g, const VarSet& y, const VarSet& z,
                                           unsigned trials = kDefaultRankTrials,
                                           std::uint64_t prime = kDefaultRankPrime, std::uint64_t seed = 0);
/// Same on a dense coefficient table; the T bits are folded away one at a
/// time (a0 + t a1 -> a0 + gamma a1).
FunctionFieldRank rank_over_function_field_dense(const CubeTable& g, const VarSet& y, const VarSet& z,
                                                 unsigned trials = kDefaultRankTrials, std::uint64_t seed = 0);
/// Exact rank over F(T) by fraction-free elimination over F[T]; meant for a few T variables.
std::size_t rank_symbolic_function_field(const SparsePoly& g, const VarSet& y, const VarSet& z);

/// dim span{ f(X, b) : b in S^|Y| }. All points when `samples` is empty or at
/// least |S|^|Y|, otherwise that many seeded draws.
std::size_t eval_dim_lower_bound(const SparsePoly& f, const VarSet& xpart, const VarSet& ypart,
                                 const std::vector<Scalar>& sample_set, std::optional<std::size_t> samples = std::nullopt,
                                 std::uint64_t seed = 0);

using Bipartition = std::pair<VarSet, VarSet>;
/// Uniform over balanced splits (shuffle, then halve). Odd size: DomainError.
Bipartition random_balanced_partition(const std::vector<VarId>& vars, std::uint64_t seed);
Bipartition random_balanced_partition(const std::vector<VarId>& vars, Rng& rng);
/// Each variable joins Y with probability 1/2.
Bipartition random_partition(const std::vector<VarId>& vars, Rng& rng);

}  // namespace ipslab
