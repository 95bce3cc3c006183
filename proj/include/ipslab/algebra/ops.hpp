#pragma once

#include <map>
#include <vector>

#include "ipslab/algebra/poly.hpp"

namespace ipslab {

/// Clamps every exponent to 1 and sums colliding coefficients.
SparsePoly multilinearize(const SparsePoly& f);

/// f = sum over m in M[S] of m * f_m with f_m free of S; only nonzero f_m returned.
std::map<Monomial, SparsePoly> coeff_decompose(const SparsePoly& f, const VarSet& s);

/// x_v^2 - x_v
SparsePoly boolean_axiom(const Field& field, const VarTablePtr& vars, VarId v);

struct BooleanReduction {
  SparsePoly mult;
  /// Indexed by variable id; h[v] multiplies x_v^2 - x_v.
  std::vector<SparsePoly> h;
};

/// Writes f = mult(f) + sum_v h_v (x_v^2 - x_v), dividing by the Boolean
/// axioms one variable at a time in ascending id order via
/// x^e = x + (x^2 - x)(1 + x + ... + x^{e-2}).
BooleanReduction reduce_by_boolean_axioms(const SparsePoly& f);

/// sum_v h_v (x_v^2 - x_v)
SparsePoly boolean_combination(const std::vector<SparsePoly>& h, const Field& field, const VarTablePtr& vars);

/// e_{n,d} over the listed variables, built by the column recurrence
/// e_j <- e_j + x * e_{j-1}.
SparsePoly elementary_symmetric(const Field& field, const VarTablePtr& vars, const std::vector<VarId>& xs, unsigned d);

}  // namespace ipslab
