#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipslab/algebra/order.hpp"
#include "ipslab/algebra/poly.hpp"
#include "ipslab/io/json.hpp"

namespace ipslab {

struct InstanceDescriptor {
  std::string family;
  std::map<std::string, std::int64_t> params;
  Field field;
  /// The constant of the family's formula: f = f' + beta for blockwise and
  /// smconst, f = (...) - beta for subset, quadratic, scaled, vecinv, esym.
  Scalar beta;
  VarPartition blocks;
  /// smconst: pi[k][r] is the index (row-major, 0-based) of the Y variable
  /// paired with the set-multilinear monomial of lexicographic rank r in X^(k).
  std::vector<std::vector<std::uint32_t>> pi;
  /// scaled: alpha_{i,j} in the order of the t variables.
  std::vector<Scalar> alpha;
  std::vector<std::string> notes;

  Json to_json(const VarTable& vars) const;
};

struct Instance {
  SparsePoly f;
  InstanceDescriptor desc;
};

/// n = 2^L with L >= 1 and L | n.
bool blockwise_valid_n(std::uint64_t n);
/// Valid n up to `limit`.
std::vector<std::uint64_t> blockwise_valid_sizes(std::uint64_t limit);

/// Field actually used for the blockwise/smconst families: Q stays Q,
/// F_p becomes F_{p^2}, and F_{p^K} (K >= 2) is used as is. In positive
/// characteristic beta is the generator z, which lies in no proper subfield.
Field char_p_ambient(const Field& requested);

struct BlockwiseOptions {
  /// Read "S subset of X_i" as all subsets (default) or only nonempty proper ones.
  bool inclusive = true;
};

Instance gen_blockwise_binary(std::uint64_t n, const Field& field, BlockwiseOptions opts = {});

struct SmconstShape {
  std::uint64_t ell = 0;    // n^{2/c}
  std::uint64_t width = 0;  // n^2 / c
  std::uint64_t parts = 0;  // n^{2(1-1/c)} / c
};
/// Empty when c <= 3 or one of the three quantities is not an integer.
std::optional<SmconstShape> smconst_shape(std::uint64_t n, std::uint64_t c);
/// All valid (n, c) with n <= max_n, ordered by n then c.
std::vector<std::pair<std::uint64_t, std::uint64_t>> smconst_valid(std::uint64_t max_n);

/// pi_seed empty: lexicographic-rank bijection; otherwise a seeded shuffle per k.
Instance gen_setmultilinear_constdeg(std::uint64_t n, std::uint64_t c, const Field& field,
                                     std::optional<std::uint64_t> pi_seed = std::nullopt);

/// sum x_i - beta. Over char 0 a beta in {0..n} is allowed but noted.
Instance gen_subset_sum(std::uint64_t n, const Scalar& beta, const Field& field);

/// sum_{i<j} t_{i,j} x_i x_j - 2 C(2n,2) over X = {x0..x_{2n-1}}.
Instance gen_quadratic_subset_sum(std::uint64_t n, const Field& field);

enum class ThresholdRule { explicit_k, binom_2n_2, binom_2n_n };
const char* threshold_rule_name(ThresholdRule r);
/// Smallest k with p^k > C(2n,2) 2^{2n} (or C(2n,n) 2^{2n}).
unsigned threshold_k(std::uint64_t n, std::uint64_t p, ThresholdRule rule);

struct ScaledOptions {
  std::uint64_t p = 2;
  unsigned k = 0;  // used when rule == explicit_k
  ThresholdRule rule = ThresholdRule::binom_2n_2;
  std::optional<std::vector<Scalar>> alpha;  // values in the ambient field, must lie in F_{p^k}
  std::uint64_t seed = 0;
  bool all_ones = false;
};

/// sum alpha_{i,j} t_{i,j} x_i x_j - beta over the ambient field F_{p^{k(k+1)}},
/// alpha in its subfield F_{p^k}, beta in the subfield F_{p^{k+1}} but not in F_{p^k}.
Instance gen_scaled_quadratic(std::uint64_t n, const ScaledOptions& opts);

/// prod_{i<j<k<l} (1 - t + t (x_i x_l - x_j x_k)) - beta over 4n x-variables,
/// kept factored.
class VectorInvariant {
 public:
  static constexpr std::size_t kExpandFactorLimit = 8;

  VectorInvariant(std::uint64_t n, Scalar beta, Field field);

  const Field& field() const { return field_; }
  const VarTablePtr& vars() const { return vars_; }
  const Scalar& beta() const { return beta_; }
  std::uint64_t n() const { return n_; }
  std::size_t factor_count() const { return quads_.size(); }
  /// Variable ids of x_i, x_j, x_k, x_l and t_{i,j,k,l}.
  struct Quad {
    VarId i, j, k, l, t;
  };
  const std::vector<Quad>& quads() const { return quads_; }

  /// Value of a single factor.
  Scalar factor_value(std::size_t q, const std::vector<Scalar>& point) const;
  /// Value of the whole polynomial; point indexed by variable id.
  Scalar eval(const std::vector<Scalar>& point) const;
  /// Full expansion; GuardError beyond kExpandFactorLimit factors.
  SparsePoly expand() const;
  /// Substitutes the fixed variables first, then expands the factors that
  /// still carry a symbolic variable (at most kExpandFactorLimit of them).
  SparsePoly expand_restricted(const Assignment& fixed) const;

  InstanceDescriptor descriptor() const;

 private:
  std::uint64_t n_;
  Scalar beta_;
  Field field_;
  VarTablePtr vars_;
  std::vector<Quad> quads_;
};

Instance gen_elem_sym_axiom(std::uint64_t n, std::uint64_t d, const Scalar& beta, const Field& field);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace ipslab
