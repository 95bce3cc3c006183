#include "ipslab/algebra/ops.hpp"

#include "ipslab/errors.hpp"

namespace ipslab {

SparsePoly multilinearize(const SparsePoly& f) {
  if (f.is_multilinear()) return f;
  std::vector<SparsePoly::Term> out;
  out.reserve(f.size());
  for (const auto& [m, c] : f.terms()) out.emplace_back(m.multilinear(), c);
  return SparsePoly::from_terms(f.field(), f.vars(), std::move(out));
}

std::map<Monomial, SparsePoly> coeff_decompose(const SparsePoly& f, const VarSet& s) {
  std::map<Monomial, std::vector<SparsePoly::Term>> groups;
  const VarSet rest_vars = f.support() - s;
  for (const auto& [m, c] : f.terms()) {
    groups[m.restrict_to(s)].emplace_back(m.restrict_to(rest_vars), c);
  }
  std::map<Monomial, SparsePoly> out;
  for (auto& [key, terms] : groups) {
    SparsePoly p = SparsePoly::from_terms(f.field(), f.vars(), std::move(terms));
    if (!p.is_zero()) out.emplace(key, std::move(p));
  }
  return out;
}

SparsePoly boolean_axiom(const Field& field, const VarTablePtr& vars, VarId v) {
  return SparsePoly::from_terms(field, vars, {{Monomial::var(v, 2), field.one()}, {Monomial::var(v), field.from_int(-1)}});
}

BooleanReduction reduce_by_boolean_axioms(const SparsePoly& f) {
  const Field& F = f.field();
  const std::size_t n = f.vars()->size();
  std::vector<std::vector<SparsePoly::Term>> h_terms(n);
  std::vector<SparsePoly::Term> cur(f.terms().begin(), f.terms().end());
  for (VarId v = 0; v < n; ++v) {
    std::vector<SparsePoly::Term> next;
    next.reserve(cur.size());
    bool touched = false;
    for (auto& [m, c] : cur) {
      const std::uint32_t e = m.exponent(v);
      if (e < 2) {
        next.emplace_back(std::move(m), std::move(c));
        continue;
      }
      touched = true;
      const Monomial rest = m.without(v);
      for (std::uint32_t k = 0; k + 2 <= e; ++k) h_terms[v].emplace_back(rest * Monomial::var(v, k), c);
      next.emplace_back(rest * Monomial::var(v), std::move(c));
    }
    cur = std::move(next);
    if (touched) cur = SparsePoly::from_terms(F, f.vars(), std::move(cur)).terms();
  }
  BooleanReduction r{SparsePoly::from_terms(F, f.vars(), std::move(cur)), {}};
  r.h.reserve(n);
  for (auto& t : h_terms) r.h.push_back(SparsePoly::from_terms(F, f.vars(), std::move(t)));
  return r;
}

SparsePoly boolean_combination(const std::vector<SparsePoly>& h, const Field& field, const VarTablePtr& vars) {
  SparsePoly acc(field, vars);
  for (VarId v = 0; v < h.size(); ++v) {
    if (!h[v].is_zero()) acc += h[v] * boolean_axiom(field, vars, v);
  }
  return acc;
}

SparsePoly elementary_symmetric(const Field& field, const VarTablePtr& vars, const std::vector<VarId>& xs, unsigned d) {
  if (d > xs.size()) return SparsePoly(field, vars);
  std::vector<SparsePoly> e(d + 1, SparsePoly(field, vars));
  e[0] = SparsePoly::constant(field, vars, 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const SparsePoly x = SparsePoly::variable(field, vars, xs[i]);
    for (std::size_t j = std::min<std::size_t>(d, i + 1); j >= 1; --j) e[j] += x * e[j - 1];
  }
  return e[d];
}

}  // namespace ipslab
