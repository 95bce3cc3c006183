#include "ipslab/hypercube/inverse.hpp"

#include <bit>

#include "ipslab/errors.hpp"

namespace ipslab {

namespace {

constexpr unsigned kMaxTargetedSupport = 30;
constexpr unsigned kDenseTargetedSupport = 22;

std::string witness_string(const VarSet& ones, const std::vector<VarId>& universe, const VarTable& vars) {
  std::string s = "{";
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (i) s += ", ";
    s += vars.name(universe[i]) + ":" + (ones.contains(universe[i]) ? "1" : "0");
  }
  return s + "}";
}

void check_limit(std::size_t n, unsigned limit) {
  if (n > limit) {
    throw GuardError("exhaustive cube check over " + std::to_string(n) + " variables exceeds the limit of " +
                     std::to_string(limit) + "; use targeted coefficients (coeff_on_support) or raise the limit");
  }
}

}  // namespace

std::vector<VarId> cube_universe(const SparsePoly& f) { return f.support().ids(); }

UnsatCheck is_unsat_on_cube(const SparsePoly& f, unsigned limit) {
  const auto universe = cube_universe(f);
  check_limit(universe.size(), limit);
  const CubeTable values = CubeTable::values_of(f, universe);
  UnsatCheck r;
  if (auto z = values.find_zero()) {
    r.witness = VarSet::from_mask(*z, universe);
  } else {
    r.unsat = true;
  }
  return r;
}

CubeTable boolean_inverse_table(const SparsePoly& f, const std::vector<VarId>& universe, unsigned limit) {
  check_limit(universe.size(), limit);
  CubeTable t = CubeTable::values_of(f, universe);
  if (auto z = t.invert_entries()) {
    const VarSet ones = VarSet::from_mask(*z, universe);
    const std::string w = witness_string(ones, universe, *f.vars());
    throw SatisfiableError("axiom vanishes on the cube at " + w, w);
  }
  t.mobius();
  return t;
}

CubeInverse boolean_inverse(const SparsePoly& f, unsigned limit) {
  auto universe = cube_universe(f);
  CubeTable t = boolean_inverse_table(f, universe, limit);
  return CubeInverse{f, t.to_poly(f.vars()), std::move(universe)};
}

Scalar coeff_on_support(const SparsePoly& f, const VarSet& s) {
  const Field& F = f.field();
  const auto universe = s.ids();
  if (universe.size() > kMaxTargetedSupport) {
    throw GuardError("targeted coefficient over |S| = " + std::to_string(universe.size()) + " exceeds " +
                     std::to_string(kMaxTargetedSupport));
  }
  std::vector<SparsePoly::Term> inside;
  for (const auto& t : f.terms()) {
    if (t.first.support().subset_of(s)) inside.push_back(t);
  }
  const SparsePoly restricted = SparsePoly::from_terms(F, f.vars(), std::move(inside));
  const unsigned n = static_cast<unsigned>(universe.size());
  auto fail = [&](std::uint64_t mask) {
    const std::string w = witness_string(VarSet::from_mask(mask, universe), universe, *f.vars());
    throw SatisfiableError("axiom vanishes on the sub-cube at " + w, w);
  };
  Scalar acc = F.zero();
  if (n <= kDenseTargetedSupport) {
    CubeTable values = CubeTable::values_of(restricted, universe);
    if (auto z = values.invert_entries()) fail(*z);
    const std::uint64_t full = values.size() - 1;
    for (std::uint64_t a = 0; a <= full; ++a) {
      const Scalar v = values.get(a);
      acc = (std::popcount(full ^ a) & 1) ? F.sub(acc, v) : F.add(acc, v);
    }
    return acc;
  }
  std::vector<std::pair<std::uint64_t, Scalar>> masked;
  for (const auto& [m, c] : restricted.terms()) masked.emplace_back(m.support().mask_in(universe), c);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t a = 0; a <= full; ++a) {
    Scalar v = F.zero();
    for (const auto& [mask, c] : masked) {
      if ((mask & ~a) == 0) v = F.add(v, c);
    }
    if (F.is_zero(v)) fail(a);
    const Scalar iv = F.inv(v);
    acc = (std::popcount(full ^ a) & 1) ? F.sub(acc, iv) : F.add(acc, iv);
  }
  return acc;
}

std::optional<std::pair<Monomial, Monomial>> find_comparable_supports(const SparsePoly& f) {
  std::vector<const Monomial*> ms;
  for (const auto& t : f.terms()) {
    if (!t.first.is_one()) ms.push_back(&t.first);
  }
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (i != j && ms[i]->support().subset_of(ms[j]->support())) return std::make_pair(*ms[i], *ms[j]);
    }
  }
  return std::nullopt;
}

SupportContainmentReport check_support_containment(const SparsePoly& f) {
  if (!f.is_multilinear()) throw DomainError("support containment requires a multilinear axiom");
  if (auto pair = find_comparable_supports(f)) {
    throw DomainError("supports are comparable: supp(" + f.format_monomial(pair->first) + ") is contained in supp(" +
                      f.format_monomial(pair->second) + ")");
  }
  const Field& F = f.field();
  SupportContainmentReport r;
  r.beta = F.neg(f.constant_term());
  if (F.is_zero(r.beta)) throw DomainError("support containment needs a nonzero constant term");
  for (const auto& [m, alpha] : f.terms()) {
    if (m.is_one()) continue;
    SupportEntry e;
    e.m = m;
    e.alpha = alpha;
    e.coeff = coeff_on_support(f, m.support());
    e.predicted = F.add(F.inv(F.sub(alpha, r.beta)), F.inv(r.beta));
    e.nonzero = !F.is_zero(e.coeff);
    e.matches = F.equal(e.coeff, e.predicted);
    r.all_nonzero = r.all_nonzero && e.nonzero;
    r.all_match = r.all_match && e.matches;
    r.entries.push_back(std::move(e));
  }
  return r;
}

bool is_product_support(const SparsePoly& f, const VarSet& s) {
  VarSet reach;
  for (const auto& t : f.terms()) {
    if (!t.first.is_one() && t.first.support().subset_of(s)) reach = reach | t.first.support();
  }
  return reach == s;
}

ZeroCoeffCheck check_zero_coeff_rule(const SparsePoly& f, const Monomial& m) {
  ZeroCoeffCheck r;
  r.is_forced_zero = !is_product_support(f, m.support());
  r.value = coeff_on_support(f, m.support());
  r.holds = !r.is_forced_zero || f.field().is_zero(r.value);
  return r;
}

}  // namespace ipslab
