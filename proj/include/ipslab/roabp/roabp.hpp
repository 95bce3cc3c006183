#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ipslab/algebra/poly.hpp"
#include "ipslab/io/json.hpp"
#include "ipslab/util/random.hpp"

namespace ipslab {

/// c0, c1, ... of a univariate edge label.
using Univariate = std::vector<Scalar>;

struct RoabpLayer {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<Univariate> labels;  // row-major, rows * cols entries

  const Univariate& at(std::size_t i, std::size_t j) const { return labels[i * cols + j]; }
  Univariate& at(std::size_t i, std::size_t j) { return labels[i * cols + j]; }
};

class Roabp {
 public:
  static constexpr std::size_t kMaxLabelDegree = 8;
  static constexpr std::size_t kExtractMaxVars = 24;
  static constexpr std::size_t kExtractMaxWidth = 64;

  /// Layer j reads order[j]. Validates the width chain (1 at both ends), the
  /// label degree and that the order has no repeated variable.
  Roabp(Field field, VarTablePtr vars, std::vector<VarId> order, std::vector<RoabpLayer> layers);

  const Field& field() const { return field_; }
  const VarTablePtr& vars() const { return vars_; }
  const std::vector<VarId>& order() const { return order_; }
  const std::vector<RoabpLayer>& layers() const { return layers_; }
  std::size_t n() const { return order_.size(); }
  /// w_0, ..., w_n.
  std::vector<std::size_t> widths() const;
  std::size_t width() const;
  bool is_multilinear() const;

  /// point indexed by variable id.
  Scalar eval(const std::vector<Scalar>& point) const;
  Scalar eval(const Assignment& point) const;
  /// GuardError beyond kExtractMaxVars variables or kExtractMaxWidth width.
  SparsePoly extract() const;
  /// c0 + sum_{k>=1} c_k x^k  ->  c0 + (sum_{k>=1} c_k) x on every edge.
  Roabp multilinearized() const;

 private:
  Field field_;
  VarTablePtr vars_;
  std::vector<VarId> order_;
  std::vector<RoabpLayer> layers_;
};

class SumRoabp {
 public:
  explicit SumRoabp(std::vector<Roabp> members);

  const std::vector<Roabp>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Field& field() const { return members_.front().field(); }
  const VarTablePtr& vars() const { return members_.front().vars(); }
  std::size_t total_width() const;
  std::size_t max_width() const;
  bool is_multilinear() const;

  Scalar eval(const std::vector<Scalar>& point) const;
  SparsePoly extract() const;

 private:
  std::vector<Roabp> members_;
};

Roabp multilinearize_roabp(const Roabp& a);

struct MultilinearWitnesses {
  SumRoabp b;
  /// Indexed by variable id; h[v] multiplies x_v^2 - x_v.
  std::vector<SparsePoly> h;
};

/// B is the member-wise multilinearization; h is summed from the member-wise
/// Boolean reductions. The identity extract(A) = extract(B) + sum h_v (x_v^2 - x_v)
/// is re-checked before returning (InternalError otherwise).
MultilinearWitnesses multilinearize_sum_with_witnesses(const SumRoabp& a);

/// max over the prefix cuts of the order of rank M_{prefix, suffix}(f).
std::size_t width_lower_bound(const SparsePoly& f, const std::vector<VarId>& order);

struct RandomRoabpOptions {
  std::size_t n = 4;
  /// Internal widths w_1..w_{n-1}; empty means every internal width is max_width.
  std::vector<std::size_t> width_profile;
  std::size_t max_width = 2;
  std::size_t degree = 1;
  /// Coefficients uniform in [-coeff_bound, coeff_bound]; 0 means uniform over the (finite) field.
  std::uint64_t coeff_bound = 3;
  bool shuffle_order = true;
  std::uint64_t seed = 0;
};

/// Layer j reads a variable of `vars` (the first n ids, possibly shuffled).
Roabp random_roabp(const Field& field, const VarTablePtr& vars, const RandomRoabpOptions& opts);
SumRoabp random_sum_roabp(const Field& field, const VarTablePtr& vars, std::size_t t, const RandomRoabpOptions& opts);

/// {"order": [...], "layers": [{"rows": w, "cols": w', "labels": [[[c0, c1, ...], ...], ...]}]}
Json roabp_to_json(const Roabp& a);
Roabp roabp_from_json(const Json& j, const Field& field, const VarTablePtr& vars);
/// {"field": ..., "members": [roabp, ...]}; a bare array or a single ROABP object are accepted.
Json sum_roabp_to_json(const SumRoabp& a);
/// Variables are collected from the orders in natural order.
SumRoabp sum_roabp_from_json(const Json& j, std::optional<Field> field = std::nullopt);

}  // namespace ipslab
