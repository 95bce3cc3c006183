#include "ipslab/algebra/poly.hpp"

#include <algorithm>

#include "ipslab/errors.hpp"

namespace ipslab {

std::shared_ptr<const VarTable> VarTable::make(std::vector<std::string> names) {
  auto t = std::make_shared<VarTable>();
  t->names_ = std::move(names);
  for (VarId i = 0; i < t->names_.size(); ++i) {
    if (!t->index_.emplace(t->names_[i], i).second) {
      throw DomainError("duplicate variable name '" + t->names_[i] + "'");
    }
  }
  return t;
}

std::optional<VarId> VarTable::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId VarTable::id(const std::string& name) const {
  auto v = find(name);
  if (!v) throw DomainError("unknown variable '" + name + "'");
  return *v;
}

std::vector<VarId> VarTable::with_prefix(const std::string& prefix) const {
  std::vector<VarId> out;
  for (VarId i = 0; i < names_.size(); ++i) {
    if (names_[i].rfind(prefix, 0) == 0) out.push_back(i);
  }
  return out;
}

std::shared_ptr<const VarTable> VarTable::extended(const std::vector<std::string>& more) const {
  std::vector<std::string> all = names_;
  all.insert(all.end(), more.begin(), more.end());
  return make(std::move(all));
}

bool VarTable::is_prefix_of(const VarTable& other) const {
  return names_.size() <= other.names_.size() && std::equal(names_.begin(), names_.end(), other.names_.begin());
}

SparsePoly::SparsePoly() : SparsePoly(Field::rationals(), nullptr) {}

SparsePoly::SparsePoly(Field field, VarTablePtr vars) : field_(std::move(field)), vars_(std::move(vars)) {
  if (!vars_) vars_ = VarTable::make({});
}

SparsePoly SparsePoly::constant(Field field, VarTablePtr vars, const Scalar& c) {
  return term(std::move(field), std::move(vars), Monomial(), c);
}

SparsePoly SparsePoly::constant(Field field, VarTablePtr vars, std::int64_t c) {
  const Scalar s = field.from_int(c);
  return term(std::move(field), std::move(vars), Monomial(), s);
}

SparsePoly SparsePoly::variable(Field field, VarTablePtr vars, VarId v) {
  if (vars && v >= vars->size()) throw DomainError("variable id out of range");
  const Scalar one = field.one();
  return term(std::move(field), std::move(vars), Monomial::var(v), one);
}

SparsePoly SparsePoly::term(Field field, VarTablePtr vars, Monomial m, Scalar c) {
  SparsePoly p(std::move(field), std::move(vars));
  if (!p.field_.is_zero(c)) p.terms_.emplace_back(std::move(m), std::move(c));
  return p;
}

SparsePoly SparsePoly::from_terms(Field field, VarTablePtr vars, std::vector<Term> terms) {
  SparsePoly p(std::move(field), std::move(vars));
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

void SparsePoly::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    std::size_t j = i + 1;
    Scalar c = std::move(terms_[i].second);
    while (j < terms_.size() && terms_[j].first == terms_[i].first) {
      c = field_.add(c, terms_[j].second);
      ++j;
    }
    if (!field_.is_zero(c)) {
      if (out != i) terms_[out].first = std::move(terms_[i].first);
      terms_[out].second = std::move(c);
      ++out;
    }
    i = j;
  }
  terms_.resize(out, Term{Monomial(), field_.zero()});
}

void SparsePoly::require_compatible(const SparsePoly& o) const {
  if (!(field_ == o.field_)) throw FieldMismatch("polynomials over " + field_.spec() + " and " + o.field_.spec());
  if (vars_ != o.vars_ && !(*vars_ == *o.vars_)) throw DomainError("polynomials over different variable tables");
}

bool SparsePoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }

std::optional<std::uint64_t> SparsePoly::degree() const {
  if (terms_.empty()) return std::nullopt;
  std::uint64_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.degree());
  return d;
}

bool SparsePoly::is_multilinear() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.first.is_multilinear(); });
}

VarSet SparsePoly::support() const {
  VarSet s;
  for (const auto& t : terms_) s = s | t.first.support();
  return s;
}

Scalar SparsePoly::coeff(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const Monomial& k) { return t.first < k; });
  if (it != terms_.end() && it->first == m) return it->second;
  return field_.zero();
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  require_compatible(o);
  SparsePoly r(field_, vars_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      r.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Scalar c = field_.add(terms_[i].second, o.terms_[j].second);
      if (!field_.is_zero(c)) r.terms_.emplace_back(terms_[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return r;
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly r(field_, vars_);
  r.terms_.reserve(terms_.size());
  for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, field_.neg(c));
  return r;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const { return *this + (-o); }

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  require_compatible(o);
  std::vector<Term> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) prod.emplace_back(m1 * m2, field_.mul(c1, c2));
  }
  return from_terms(field_, vars_, std::move(prod));
}

SparsePoly SparsePoly::scale(const Scalar& c) const {
  if (field_.is_zero(c)) return SparsePoly(field_, vars_);
  SparsePoly r(field_, vars_);
  r.terms_.reserve(terms_.size());
  for (const auto& [m, a] : terms_) r.terms_.emplace_back(m, field_.mul(a, c));
  return r;
}

SparsePoly SparsePoly::mul_monomial(const Monomial& m, const Scalar& c) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [mm, a] : terms_) out.emplace_back(mm * m, field_.mul(a, c));
  return from_terms(field_, vars_, std::move(out));
}

SparsePoly SparsePoly::pow(unsigned e) const {
  SparsePoly result = constant(field_, vars_, 1);
  SparsePoly base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

SparsePoly SparsePoly::add_constant(const Scalar& c) const { return *this + constant(field_, vars_, c); }

Scalar SparsePoly::eval(const Assignment& point) const {
  Scalar acc = field_.zero();
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    m.for_each([&](VarId v, std::uint32_t e) {
      auto it = point.find(v);
      if (it == point.end()) throw DomainError("evaluation point misses variable " + vars_->name(v));
      t = field_.mul(t, field_.pow(it->second, e));
    });
    acc = field_.add(acc, t);
  }
  return acc;
}

Scalar SparsePoly::eval_dense(const std::vector<Scalar>& point) const {
  Scalar acc = field_.zero();
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    m.for_each([&](VarId v, std::uint32_t e) {
      if (v >= point.size()) throw DomainError("evaluation point misses variable " + vars_->name(v));
      t = field_.mul(t, e == 1 ? point[v] : field_.pow(point[v], e));
    });
    acc = field_.add(acc, t);
  }
  return acc;
}

Scalar SparsePoly::eval_bool(const VarSet& ones) const {
  Scalar acc = field_.zero();
  for (const auto& [m, c] : terms_) {
    if (m.support().subset_of(ones)) acc = field_.add(acc, c);
  }
  return acc;
}

SparsePoly SparsePoly::partial_eval(const Assignment& point) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    std::vector<std::pair<VarId, std::uint32_t>> rest;
    m.for_each([&](VarId v, std::uint32_t e) {
      auto it = point.find(v);
      if (it == point.end()) {
        rest.emplace_back(v, e);
      } else {
        t = field_.mul(t, field_.pow(it->second, e));
      }
    });
    if (!field_.is_zero(t)) out.emplace_back(Monomial::from_exponents(rest), std::move(t));
  }
  return from_terms(field_, vars_, std::move(out));
}

SparsePoly SparsePoly::substitute(const std::map<VarId, SparsePoly>& images) const {
  for (const auto& [v, img] : images) require_compatible(img);
  std::map<std::pair<VarId, std::uint32_t>, SparsePoly> powers;
  auto power = [&](VarId v, std::uint32_t e) -> const SparsePoly& {
    auto key = std::make_pair(v, e);
    auto it = powers.find(key);
    if (it == powers.end()) it = powers.emplace(key, images.at(v).pow(e)).first;
    return it->second;
  };
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    std::vector<std::pair<VarId, std::uint32_t>> kept;
    std::vector<const SparsePoly*> factors;
    m.for_each([&](VarId v, std::uint32_t e) {
      if (images.count(v)) {
        factors.push_back(&power(v, e));
      } else {
        kept.emplace_back(v, e);
      }
    });
    SparsePoly piece = term(field_, vars_, Monomial::from_exponents(kept), c);
    for (const SparsePoly* f : factors) piece = piece * *f;
    for (auto& t : piece.terms_) out.push_back(std::move(t));
  }
  return from_terms(field_, vars_, std::move(out));
}

SparsePoly SparsePoly::map_field(const Field& target) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) out.emplace_back(m, target.convert(field_, c));
  return from_terms(target, vars_, std::move(out));
}

SparsePoly SparsePoly::rebase(const VarTablePtr& superset) const {
  if (!vars_->is_prefix_of(*superset)) throw DomainError("rebase target does not extend the variable table");
  SparsePoly r(field_, superset);
  r.terms_ = terms_;
  return r;
}

bool SparsePoly::operator==(const SparsePoly& o) const {
  if (!(field_ == o.field_)) return false;
  if (vars_ != o.vars_ && !(*vars_ == *o.vars_)) return false;
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].first != o.terms_[i].first || !field_.equal(terms_[i].second, o.terms_[i].second)) return false;
  }
  return true;
}

std::string SparsePoly::format_monomial(const Monomial& m) const {
  if (m.is_one()) return "1";
  std::string s;
  m.for_each([&](VarId v, std::uint32_t e) {
    if (!s.empty()) s += '*';
    s += v < vars_->size() ? vars_->name(v) : "v" + std::to_string(v);
    if (e > 1) s += "^" + std::to_string(e);
  });
  return s;
}

namespace {

// Graded, then lexicographic with lower ids ranking higher.
bool display_before(const Monomial& a, const Monomial& b) {
  const auto da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  const auto ea = a.exponents(), eb = b.exponents();
  for (std::size_t i = 0; i < ea.size() && i < eb.size(); ++i) {
    if (ea[i].first != eb[i].first) return ea[i].first < eb[i].first;
    if (ea[i].second != eb[i].second) return ea[i].second > eb[i].second;
  }
  return ea.size() > eb.size();
}

}  // namespace

std::string SparsePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const Term*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const Term* a, const Term* b) { return display_before(a->first, b->first); });
  std::string out;
  for (const Term* t : order) {
    std::string c = field_.format(t->second);
    bool negative = !c.empty() && c[0] == '-';
    if (negative) c.erase(0, 1);
    std::string piece;
    if (t->first.is_one()) {
      piece = c;
    } else if (c == "1") {
      piece = format_monomial(t->first);
    } else {
      piece = c + "*" + format_monomial(t->first);
    }
    if (out.empty()) {
      out = negative ? "-" + piece : piece;
    } else {
      out += negative ? " - " : " + ";
      out += piece;
    }
  }
  return out;
}

}  // namespace ipslab
