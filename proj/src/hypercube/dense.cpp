#include "ipslab/hypercube/dense.hpp"

#include "ipslab/algebra/modular.hpp"
#include "ipslab/errors.hpp"

namespace ipslab {

namespace {

constexpr unsigned kMaxDenseDimension = 30;

template <class T, class Op>
void butterfly(std::vector<T>& a, unsigned n, Op op) {
  const std::uint64_t size = std::uint64_t{1} << n;
  for (unsigned i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t s = 0; s < size; ++s) {
      if (s & bit) op(a[s], a[s ^ bit]);
    }
  }
}

}  // namespace

CubeTable::CubeTable(Field field, std::vector<VarId> universe)
    : field_(std::move(field)), universe_(std::move(universe)) {
  if (universe_.size() > kMaxDenseDimension) {
    throw GuardError("dense cube table over " + std::to_string(universe_.size()) + " variables exceeds " +
                     std::to_string(kMaxDenseDimension));
  }
  const std::uint64_t n = size();
  switch (field_.kind()) {
    case Field::Kind::rationals:
      data_ = std::vector<mpq_class>(n);
      break;
    case Field::Kind::prime:
      data_ = std::vector<std::uint64_t>(n, 0);
      break;
    case Field::Kind::extension:
      data_ = std::vector<Scalar>(n, field_.zero());
      break;
  }
}

Scalar CubeTable::get(std::uint64_t mask) const {
  return std::visit([&](const auto& v) -> Scalar { return v[mask]; }, data_);
}

void CubeTable::set(std::uint64_t mask, const Scalar& s) {
  std::visit(
      [&](auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        if constexpr (std::is_same_v<T, Scalar>) {
          v[mask] = s;
        } else {
          v[mask] = std::get<T>(s);
        }
      },
      data_);
}

bool CubeTable::is_zero_at(std::uint64_t mask) const {
  switch (data_.index()) {
    case 0:
      return sgn(std::get<0>(data_)[mask]) == 0;
    case 1:
      return std::get<1>(data_)[mask] == 0;
    default:
      return field_.is_zero(std::get<2>(data_)[mask]);
  }
}

void CubeTable::zeta() {
  const unsigned n = dimension();
  if (auto* q = std::get_if<0>(&data_)) {
    butterfly(*q, n, [](mpq_class& hi, const mpq_class& lo) { hi += lo; });
  } else if (auto* p = std::get_if<1>(&data_)) {
    const std::uint64_t m = field_.characteristic();
    butterfly(*p, n, [m](std::uint64_t& hi, std::uint64_t lo) { hi = mod::add(hi, lo, m); });
  } else {
    auto& s = std::get<2>(data_);
    butterfly(s, n, [this](Scalar& hi, const Scalar& lo) { hi = field_.add(hi, lo); });
  }
}

void CubeTable::mobius() {
  const unsigned n = dimension();
  if (auto* q = std::get_if<0>(&data_)) {
    butterfly(*q, n, [](mpq_class& hi, const mpq_class& lo) { hi -= lo; });
  } else if (auto* p = std::get_if<1>(&data_)) {
    const std::uint64_t m = field_.characteristic();
    butterfly(*p, n, [m](std::uint64_t& hi, std::uint64_t lo) { hi = mod::sub(hi, lo, m); });
  } else {
    auto& s = std::get<2>(data_);
    butterfly(s, n, [this](Scalar& hi, const Scalar& lo) { hi = field_.sub(hi, lo); });
  }
}

std::optional<std::uint64_t> CubeTable::find_zero() const {
  for (std::uint64_t s = 0; s < size(); ++s) {
    if (is_zero_at(s)) return s;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> CubeTable::invert_entries() {
  if (auto z = find_zero()) return z;
  if (auto* q = std::get_if<0>(&data_)) {
    for (auto& x : *q) mpq_inv(x.get_mpq_t(), x.get_mpq_t());
  } else if (auto* p = std::get_if<1>(&data_)) {
    // batch inversion: one modular inverse for the whole table
    auto& a = *p;
    const std::uint64_t m = field_.characteristic();
    std::vector<std::uint64_t> prefix(a.size());
    std::uint64_t acc = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      prefix[i] = acc;
      acc = mod::mul(acc, a[i], m);
    }
    std::uint64_t inv = mod::inv(acc, m);
    for (std::size_t i = a.size(); i-- > 0;) {
      const std::uint64_t ai = a[i];
      a[i] = mod::mul(inv, prefix[i], m);
      inv = mod::mul(inv, ai, m);
    }
  } else {
    for (auto& x : std::get<2>(data_)) x = field_.inv(x);
  }
  return std::nullopt;
}

CubeTable CubeTable::coefficients_of(const SparsePoly& f, const std::vector<VarId>& universe) {
  CubeTable t(f.field(), universe);
  VarSet uni = VarSet::from_ids(universe);
  for (const auto& [m, c] : f.terms()) {
    if (!m.support().subset_of(uni)) {
      throw DomainError("polynomial uses variables outside the cube universe");
    }
    const std::uint64_t mask = m.support().mask_in(universe);
    t.set(mask, f.field().add(t.get(mask), c));
  }
  return t;
}

CubeTable CubeTable::values_of(const SparsePoly& f, const std::vector<VarId>& universe) {
  CubeTable t = coefficients_of(f, universe);
  t.zeta();
  return t;
}

SparsePoly CubeTable::to_poly(const VarTablePtr& vars) const {
  std::vector<SparsePoly::Term> terms;
  for (std::uint64_t s = 0; s < size(); ++s) {
    if (!is_zero_at(s)) terms.emplace_back(Monomial(VarSet::from_mask(s, universe_)), get(s));
  }
  return SparsePoly::from_terms(field_, vars, std::move(terms));
}

std::uint64_t CubeTable::count_nonzero() const {
  std::uint64_t n = 0;
  for (std::uint64_t s = 0; s < size(); ++s) n += !is_zero_at(s);
  return n;
}

}  // namespace ipslab
