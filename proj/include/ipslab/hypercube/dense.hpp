#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ipslab/algebra/poly.hpp"

namespace ipslab {

/// A dense table over the subsets of an ordered variable list: entry `mask`
/// belongs to the subset {universe[i] : bit i of mask set}. Depending on the
/// context the entries are cube values f(1_A) or multilinear coefficients.
class CubeTable {
 public:
  using Storage = std::variant<std::vector<mpq_class>, std::vector<std::uint64_t>, std::vector<Scalar>>;

  CubeTable(Field field, std::vector<VarId> universe);

  const Field& field() const { return field_; }
  const std::vector<VarId>& universe() const { return universe_; }
  unsigned dimension() const { return static_cast<unsigned>(universe_.size()); }
  std::uint64_t size() const { return std::uint64_t{1} << universe_.size(); }

  Scalar get(std::uint64_t mask) const;
  void set(std::uint64_t mask, const Scalar& v);
  bool is_zero_at(std::uint64_t mask) const;

  Storage& storage() { return data_; }
  const Storage& storage() const { return data_; }

  /// Subset-sum (zeta) transform: a[S] <- sum_{A subset of S} a[A].
  void zeta();
  /// Inverse of zeta: a[S] <- sum_{A subset of S} (-1)^{|S \ A|} a[A].
  void mobius();
  /// Entrywise inverse. Returns the first zero mask instead of inverting when
  /// some entry vanishes; the table is left untouched in that case.
  std::optional<std::uint64_t> invert_entries();
  /// First mask holding a zero entry.
  std::optional<std::uint64_t> find_zero() const;

  /// Coefficients of mult(f) with supp(f) inside the universe.
  static CubeTable coefficients_of(const SparsePoly& f, const std::vector<VarId>& universe);
  /// f(1_A) for every A, via zeta on the multilinear coefficients.
  static CubeTable values_of(const SparsePoly& f, const std::vector<VarId>& universe);

  /// Reads the table as multilinear coefficients.
  SparsePoly to_poly(const VarTablePtr& vars) const;
  std::uint64_t count_nonzero() const;

 private:
  Field field_;
  std::vector<VarId> universe_;
  Storage data_;
};

}  // namespace ipslab
