#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ipslab/algebra/field.hpp"
#include "ipslab/algebra/monomial.hpp"

namespace ipslab {

/// Display names for dense variable ids. Immutable once built.
class VarTable {
 public:
  static std::shared_ptr<const VarTable> make(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(VarId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<VarId> find(const std::string& name) const;
  /// Throws DomainError for unknown names.
  VarId id(const std::string& name) const;
  /// Ids whose name starts with `prefix`, in id order.
  std::vector<VarId> with_prefix(const std::string& prefix) const;

  /// A new table with `more` appended; ids of existing names are unchanged.
  std::shared_ptr<const VarTable> extended(const std::vector<std::string>& more) const;
  bool is_prefix_of(const VarTable& other) const;
  bool operator==(const VarTable& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> index_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;
using Assignment = std::map<VarId, Scalar>;

/// Sparse multivariate polynomial with exact coefficients. Terms are kept
/// sorted by Monomial's storage order with no zero coefficients, so the
/// representation is canonical.
class SparsePoly {
 public:
  using Term = std::pair<Monomial, Scalar>;

  /// The zero polynomial over Q with no variables.
  SparsePoly();
  SparsePoly(Field field, VarTablePtr vars);
  static SparsePoly constant(Field field, VarTablePtr vars, const Scalar& c);
  static SparsePoly constant(Field field, VarTablePtr vars, std::int64_t c);
  static SparsePoly variable(Field field, VarTablePtr vars, VarId v);
  static SparsePoly term(Field field, VarTablePtr vars, Monomial m, Scalar c);
  /// Combines duplicate monomials and drops zeros.
  static SparsePoly from_terms(Field field, VarTablePtr vars, std::vector<Term> terms);

  const Field& field() const { return field_; }
  const VarTablePtr& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Total degree; empty for the zero polynomial.
  std::optional<std::uint64_t> degree() const;
  bool is_multilinear() const;
  /// Variables occurring in some term.
  VarSet support() const;
  Scalar coeff(const Monomial& m) const;
  Scalar constant_term() const { return coeff(Monomial()); }

  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly operator-() const;
  SparsePoly& operator+=(const SparsePoly& o) { return *this = *this + o; }
  SparsePoly& operator-=(const SparsePoly& o) { return *this = *this - o; }
  SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }
  SparsePoly scale(const Scalar& c) const;
  SparsePoly mul_monomial(const Monomial& m, const Scalar& c) const;
  SparsePoly pow(unsigned e) const;
  SparsePoly add_constant(const Scalar& c) const;

  /// Throws DomainError if a variable of the support is unassigned.
  Scalar eval(const Assignment& point) const;
  /// point.size() must be at least vars()->size().
  Scalar eval_dense(const std::vector<Scalar>& point) const;
  /// Value at the 0/1 point whose ones are `ones`.
  Scalar eval_bool(const VarSet& ones) const;
  /// Substitutes the assigned variables and keeps the rest symbolic.
  SparsePoly partial_eval(const Assignment& point) const;
  /// Replaces each listed variable by a polynomial over the same table.
  SparsePoly substitute(const std::map<VarId, SparsePoly>& images) const;

  /// Coefficients mapped into `target` (Q -> F_p, F_p -> F_{p^k}).
  SparsePoly map_field(const Field& target) const;
  /// Same polynomial over a table that has vars() as a prefix.
  SparsePoly rebase(const VarTablePtr& superset) const;

  bool operator==(const SparsePoly& o) const;
  bool operator!=(const SparsePoly& o) const { return !(*this == o); }

  std::string format_monomial(const Monomial& m) const;
  /// Human-readable form, terms by descending degree then variable id.
  std::string to_string() const;

 private:
  void require_compatible(const SparsePoly& o) const;
  void normalize();

  Field field_;
  VarTablePtr vars_;
  std::vector<Term> terms_;
};

}  // namespace ipslab
