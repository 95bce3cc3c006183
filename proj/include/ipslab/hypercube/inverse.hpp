#pragma once

#include <optional>
#include <vector>

#include "ipslab/algebra/poly.hpp"
#include "ipslab/hypercube/dense.hpp"

namespace ipslab {

constexpr unsigned kDefaultExhaustiveLimit = 24;

struct UnsatCheck {
  bool unsat = false;
  /// A zero of f on the cube (the set of coordinates equal to 1) when satisfiable.
  std::optional<VarSet> witness;
};

/// The unique multilinear g with g(b) f(b) = 1 on {0,1}^universe.
struct CubeInverse {
  SparsePoly f;
  SparsePoly g;
  std::vector<VarId> universe;
};

/// Ids of the variables occurring in f, ascending.
std::vector<VarId> cube_universe(const SparsePoly& f);

/// Throws GuardError above `limit` variables.
UnsatCheck is_unsat_on_cube(const SparsePoly& f, unsigned limit = kDefaultExhaustiveLimit);

/// Cube values of f, inverted pointwise, then Moebius-transformed into the
/// multilinear coefficients of g. Throws SatisfiableError with a witness.
CubeTable boolean_inverse_table(const SparsePoly& f, const std::vector<VarId>& universe,
                                unsigned limit = kDefaultExhaustiveLimit);
CubeInverse boolean_inverse(const SparsePoly& f, unsigned limit = kDefaultExhaustiveLimit);

/// Coefficient in g of the multilinear monomial prod(S), from the 2^|S|
/// values f(1_A), A subset of S. Throws SatisfiableError if some f(1_A) = 0.
Scalar coeff_on_support(const SparsePoly& f, const VarSet& s);

/// Pairs of distinct non-constant monomials with supp(a) inside supp(b).
std::optional<std::pair<Monomial, Monomial>> find_comparable_supports(const SparsePoly& f);

struct SupportEntry {
  Monomial m;
  Scalar alpha;       // coefficient of m in f
  Scalar coeff;       // coefficient of m in g
  Scalar predicted;   // 1/(alpha - beta) + 1/beta
  bool nonzero = false;
  bool matches = false;
};

struct SupportContainmentReport {
  Scalar beta;  // -f(0)
  std::vector<SupportEntry> entries;
  bool all_nonzero = true;
  bool all_match = true;
};

/// For multilinear f with pairwise incomparable supports, checks that every
/// monomial of f has a nonzero coefficient in g equal to the closed form.
/// Throws DomainError naming the offending pair when incomparability fails.
SupportContainmentReport check_support_containment(const SparsePoly& f);

struct ZeroCoeffCheck {
  bool is_forced_zero = false;
  Scalar value;
  /// False only when the rule predicts zero and the computed value is not.
  bool holds = true;
};

/// supp(m) is reachable iff it is a union of supports of non-constant
/// monomials of f; unreachable monomials must have coefficient 0 in g.
ZeroCoeffCheck check_zero_coeff_rule(const SparsePoly& f, const Monomial& m);
bool is_product_support(const SparsePoly& f, const VarSet& s);

}  // namespace ipslab
