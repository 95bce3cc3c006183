#pragma once

// Reference computations written independently of the library algorithms.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ipslab/algebra/parse.hpp"
#include "ipslab/algebra/poly.hpp"
#include "ipslab/util/random.hpp"

namespace oracle {

using ipslab::Field;
using ipslab::Monomial;
using ipslab::Scalar;
using ipslab::SparsePoly;
using ipslab::VarId;
using ipslab::VarSet;

/// Textbook Gaussian elimination with rational pivots.
inline std::size_t rank_q(std::vector<std::vector<mpq_class>> a) {
  std::size_t rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const mpq_class f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Same over any field, through the Field interface.
inline std::size_t rank_field(const Field& F, std::vector<std::vector<Scalar>> a) {
  std::size_t rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && F.is_zero(a[piv][c])) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    const Scalar inv = F.inv(a[rank][c]);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || F.is_zero(a[r][c])) continue;
      const Scalar f = F.mul(a[r][c], inv);
      for (std::size_t k = c; k < cols; ++k) a[r][k] = F.sub(a[r][k], F.mul(f, a[rank][k]));
    }
    ++rank;
  }
  return rank;
}

/// Multilinear interpolation of 1/f on the cube over `universe`: the system
/// sum_{S subset of b} c_S = 1/f(b) is unitriangular, so c is found by
/// substitution in order of increasing |b|.
inline SparsePoly inverse_by_solving(const SparsePoly& f, const std::vector<VarId>& universe) {
  const Field& F = f.field();
  const std::size_t N = std::size_t{1} << universe.size();
  std::vector<std::size_t> order(N);
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [](std::size_t x, std::size_t y) { return __builtin_popcountll(x) < __builtin_popcountll(y); });
  std::vector<Scalar> c(N, F.zero());
  for (std::size_t b : order) {
    Scalar v = F.inv(f.eval_bool(VarSet::from_mask(b, universe)));
    for (std::size_t s = 0; s < N; ++s) {
      if (s != b && (s & b) == s) v = F.sub(v, c[s]);
    }
    c[b] = v;
  }
  std::vector<SparsePoly::Term> terms;
  for (std::size_t s = 0; s < N; ++s) terms.emplace_back(Monomial(VarSet::from_mask(s, universe)), c[s]);
  return SparsePoly::from_terms(F, f.vars(), std::move(terms));
}

/// Random polynomial over the first `nvars` ids of `vars` with small integer coefficients.
inline SparsePoly random_poly(ipslab::Rng& rng, const Field& F, const ipslab::VarTablePtr& vars, std::size_t nvars,
                              std::size_t terms, std::uint32_t max_exp) {
  std::vector<SparsePoly::Term> ts;
  for (std::size_t i = 0; i < terms; ++i) {
    std::vector<std::pair<VarId, std::uint32_t>> exps;
    for (VarId v = 0; v < nvars; ++v) {
      const auto e = static_cast<std::uint32_t>(ipslab::uniform_below(rng, max_exp + 2));
      if (e > 0 && ipslab::uniform_below(rng, 2)) exps.emplace_back(v, std::min(e, max_exp));
    }
    const auto c = static_cast<std::int64_t>(ipslab::uniform_below(rng, 11)) - 5;
    ts.emplace_back(Monomial::from_exponents(exps), F.from_int(c));
  }
  return SparsePoly::from_terms(F, vars, std::move(ts));
}

inline ipslab::VarTablePtr names(const std::string& base, std::size_t n, std::size_t first = 1) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(base + std::to_string(first + i));
  return ipslab::VarTable::make(v);
}

}  // namespace oracle
