#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ipslab/algebra/poly.hpp"

namespace ipslab {

/// Graded order: total degree first, then lexicographic along a variable
/// sequence formed by concatenating the blocks (earlier block ranks higher).
class MonomialOrder {
 public:
  /// Variables of the universe [0, nvars) missing from `blocks` are appended
  /// as a final block in id order.
  MonomialOrder(std::vector<std::vector<VarId>> blocks, std::size_t nvars);
  static MonomialOrder by_id(std::size_t nvars);
  /// Groups separated by '>'. A group is either a name prefix ("X" or "x"
  /// selects every variable whose name starts with x) or an explicit
  /// comma-separated list of names.
  static MonomialOrder parse(std::string_view spec, const VarTable& vars);

  /// Negative, zero or positive as a is smaller than, equal to or larger than b.
  int compare(const Monomial& a, const Monomial& b) const;
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  const std::vector<std::vector<VarId>>& blocks() const { return blocks_; }
  std::size_t rank(VarId v) const { return rank_.at(v); }
  std::string describe(const VarTable& vars) const;

 private:
  std::vector<std::vector<VarId>> blocks_;
  std::vector<std::size_t> rank_;  // position in the concatenated sequence
  std::string spec_;
};

/// Disjoint variable blocks X_1, ..., X_t.
class VarPartition {
 public:
  VarPartition() = default;
  /// Throws DomainError when blocks overlap.
  VarPartition(std::vector<VarSet> blocks, std::vector<std::string> labels = {});

  std::size_t size() const { return blocks_.size(); }
  const VarSet& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<VarSet>& blocks() const { return blocks_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  VarSet covered() const;

 private:
  std::vector<VarSet> blocks_;
  std::vector<std::string> labels_;
};

/// Extremal monomials of supp(f); both throw DomainError on the zero polynomial.
Monomial leading_monomial(const SparsePoly& f, const MonomialOrder& order);
Monomial trailing_monomial(const SparsePoly& f, const MonomialOrder& order);

}  // namespace ipslab
