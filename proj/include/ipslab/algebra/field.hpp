#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

#include "ipslab/util/random.hpp"

namespace ipslab {

/// Coefficients of an extension-field element c0 + c1 z + ... + c_{k-1} z^{k-1}.
using ExtCoeffs = boost::container::small_vector<std::uint64_t, 4>;

/// Untagged field value. Which alternative is live depends on the owning
/// Field: mpq_class for Q, uint64_t for F_p, ExtCoeffs for F_{p^k}.
using Scalar = std::variant<mpq_class, std::uint64_t, ExtCoeffs>;

bool is_prime(std::uint64_t n);
/// Smallest prime strictly greater than n.
std::uint64_t next_prime(std::uint64_t n);

/// Ben-Or test for a monic polynomial over F_p given low-to-high with the
/// leading 1 included.
bool is_irreducible(std::uint64_t p, std::span<const std::uint64_t> monic);

/// First monic irreducible of degree k, scanning [c0, ..., c_{k-1}] in
/// lexicographic order. Returned low-to-high including the leading 1.
std::vector<std::uint64_t> first_irreducible(std::uint64_t p, unsigned k);

/// A field specification: Q, F_p, or F_p[z]/(modulus). Cheap to copy; all
/// copies share one immutable description.
class Field {
 public:
  enum class Kind { rationals, prime, extension };

  Field();
  static Field rationals();
  static Field prime(std::uint64_t p);
  static Field extension(std::uint64_t p, unsigned k);
  static Field extension(std::uint64_t p, std::vector<std::uint64_t> monic_modulus);

  /// Parses "Q", "Fp:65537", "Fpk:p=2,k=2" and "Fpk:p=2,k=2,mod=[1,1,1]".
  static Field parse(std::string_view spec);

  Kind kind() const;
  std::uint64_t characteristic() const;
  unsigned degree() const;
  const std::vector<std::uint64_t>& modulus() const;
  bool is_finite() const { return kind() != Kind::rationals; }
  /// Number of elements when finite and representable in 64 bits.
  std::optional<std::uint64_t> order() const;

  /// Short spec string accepted by parse().
  std::string spec() const;
  /// Spec plus the modulus polynomial for extension fields.
  std::string describe() const;

  bool operator==(const Field& other) const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(std::int64_t v) const;
  /// Image of a rational; throws DivisionByZero if p divides the denominator.
  Scalar from_rational(const mpq_class& q) const;
  /// Image of a value of `src` under the natural map (Q -> F, F_p -> F_{p^k}).
  Scalar convert(const Field& src, const Scalar& v) const;
  /// The class of z in F_p[z]/(modulus).
  Scalar generator() const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const;
  Scalar pow(const Scalar& a, std::uint64_t e) const;
  bool is_zero(const Scalar& a) const;
  bool is_one(const Scalar& a) const;
  bool equal(const Scalar& a, const Scalar& b) const;

  /// a^p; the identity on F_p and Q.
  Scalar frobenius(const Scalar& a) const;
  /// Whether a lies in the subfield of order p^d (requires d | degree()).
  bool in_subfield(const Scalar& a, unsigned d) const;
  /// Trace onto the subfield of order p^d (requires d | degree()).
  Scalar trace_to_subfield(const Scalar& a, unsigned d) const;

  /// Q: uniform integer in [-int_bound, int_bound]; finite fields: uniform.
  Scalar random(Rng& rng, std::uint64_t int_bound = 10) const;

  std::string format(const Scalar& a) const;
  Scalar parse_scalar(std::string_view text) const;

 private:
  struct Data;
  explicit Field(std::shared_ptr<const Data> d);
  std::shared_ptr<const Data> data_;
};

/// A scalar tagged with its field. Mixing fields throws FieldMismatch.
class FieldElement {
 public:
  FieldElement(Field field, Scalar value);
  static FieldElement from_int(const Field& f, std::int64_t v);
  static FieldElement parse(const Field& f, std::string_view text);

  const Field& field() const { return field_; }
  const Scalar& value() const { return value_; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inverse() const;
  bool is_zero() const { return field_.is_zero(value_); }
  bool operator==(const FieldElement& o) const;
  std::string to_string() const { return field_.format(value_); }

 private:
  void require_same(const FieldElement& o) const;
  Field field_;
  Scalar value_;
};

}  // namespace ipslab
