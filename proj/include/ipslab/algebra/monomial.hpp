#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace ipslab {

using VarId = std::uint32_t;

/// Set of variable ids as a bitset with no trailing zero words, so equal
/// sets have equal representations.
class VarSet {
 public:
  using Words = boost::container::small_vector<std::uint64_t, 2>;

  VarSet() = default;
  VarSet(std::initializer_list<VarId> ids);
  static VarSet from_ids(const std::vector<VarId>& ids);
  /// {0, 1, ..., n-1}
  static VarSet range(VarId n);
  /// Variables of `universe` selected by the bits of `mask` (bit i picks universe[i]).
  static VarSet from_mask(std::uint64_t mask, const std::vector<VarId>& universe);

  bool contains(VarId v) const {
    const std::size_t w = v >> 6;
    return w < words_.size() && ((words_[w] >> (v & 63)) & 1);
  }
  void insert(VarId v);
  void erase(VarId v);
  bool empty() const { return words_.empty(); }
  std::size_t size() const;
  std::vector<VarId> ids() const;
  /// Bit i of the result is set iff universe[i] is in the set (universe.size() <= 64).
  std::uint64_t mask_in(const std::vector<VarId>& universe) const;

  bool subset_of(const VarSet& other) const;
  bool intersects(const VarSet& other) const;
  VarSet operator|(const VarSet& o) const;
  VarSet operator&(const VarSet& o) const;
  VarSet operator-(const VarSet& o) const;
  bool operator==(const VarSet& o) const { return words_ == o.words_; }
  bool operator<(const VarSet& o) const;

  const Words& words() const { return words_; }
  std::size_t hash() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(static_cast<VarId>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

 private:
  void trim();
  Words words_;
};

/// x^a with a bitmask support and explicit (var, exp) pairs only for
/// exponents >= 2. Multilinear monomials carry no pairs at all.
class Monomial {
 public:
  using HighExps = boost::container::small_vector<std::pair<VarId, std::uint32_t>, 1>;

  Monomial() = default;
  explicit Monomial(VarSet support) : support_(std::move(support)) {}
  static Monomial var(VarId v, std::uint32_t exp = 1);
  static Monomial from_exponents(const std::vector<std::pair<VarId, std::uint32_t>>& exps);

  const VarSet& support() const { return support_; }
  const HighExps& high() const { return high_; }
  bool is_one() const { return support_.empty(); }
  bool is_multilinear() const { return high_.empty(); }
  std::uint32_t exponent(VarId v) const;
  std::uint64_t degree() const;
  std::uint32_t max_exponent() const;
  /// Sorted (var, exp) pairs with exp >= 1.
  std::vector<std::pair<VarId, std::uint32_t>> exponents() const;

  Monomial operator*(const Monomial& o) const;
  /// mult(): all exponents clamped to 1.
  Monomial multilinear() const { return Monomial(support_); }
  bool divides(const Monomial& o) const;
  /// o / *this; requires divides(o).
  Monomial quotient_of(const Monomial& o) const;
  /// The monomial with variable v removed entirely.
  Monomial without(VarId v) const;
  /// Restriction to the variables in s.
  Monomial restrict_to(const VarSet& s) const;

  bool operator==(const Monomial& o) const { return support_ == o.support_ && high_ == o.high_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }
  /// Storage order used by SparsePoly; not a monomial order in the algebraic sense.
  bool operator<(const Monomial& o) const;
  std::size_t hash() const;

  template <class F>
  void for_each(F&& f) const {
    auto it = high_.begin();
    support_.for_each([&](VarId v) {
      if (it != high_.end() && it->first == v) {
        f(v, it->second);
        ++it;
      } else {
        f(v, std::uint32_t{1});
      }
    });
  }

 private:
  VarSet support_;
  HighExps high_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};
struct VarSetHash {
  std::size_t operator()(const VarSet& s) const { return s.hash(); }
};

}  // namespace ipslab
