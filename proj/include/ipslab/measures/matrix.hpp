#pragma once

#include <cstdint>
#include <vector>

#include "ipslab/algebra/poly.hpp"

namespace ipslab {

/// Rank over F_p by Gaussian elimination; the matrix is consumed.
std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p);
/// Rank over Q of an integer matrix by fraction-free (Bareiss) elimination.
std::size_t rank_bareiss(std::vector<std::vector<mpz_class>> rows);
/// Rank over Q; rows are scaled to integers first.
std::size_t rank_rational(const std::vector<std::vector<mpq_class>>& rows);
/// Rank over any field, dispatching on its kind.
std::size_t rank_scalar(const Field& field, const std::vector<std::vector<Scalar>>& rows);

/// Rank of the exponent matrix of the monomials over Q.
std::size_t exponent_rank(const std::vector<Monomial>& ms);
/// Indices of a maximal independent subset chosen greedily in input order.
std::vector<std::size_t> greedy_independent_subset(const std::vector<Monomial>& ms);

/// M_{Y,Z}(f): entry (m_Y, m_Z) is the coefficient of m_Y m_Z in f. Only rows
/// and columns with a nonzero entry are materialized; the rank is that of the
/// full 2^|Y| x 2^|Z| matrix either way.
struct PDMatrix {
  Field field;
  std::vector<Monomial> rows;
  std::vector<Monomial> cols;
  std::vector<std::vector<Scalar>> entries;
  std::uint64_t logical_rows = 0;  // 2^|Y| (multilinear case)
  std::uint64_t logical_cols = 0;
  bool pruned = false;
};

constexpr std::size_t kPDMatrixLimit = std::size_t{1} << 14;

/// Requires supp(f) inside Y u Z with Y, Z disjoint. Throws GuardError when
/// more than kPDMatrixLimit rows or columns would be materialized.
PDMatrix pd_matrix(const SparsePoly& f, const VarSet& y, const VarSet& z, std::size_t limit = kPDMatrixLimit);
std::size_t rank_exact(const PDMatrix& m);

}  // namespace ipslab
