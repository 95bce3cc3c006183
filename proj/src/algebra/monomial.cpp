#include "ipslab/algebra/monomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "ipslab/util/random.hpp"

namespace ipslab {

VarSet::VarSet(std::initializer_list<VarId> ids) {
  for (VarId v : ids) insert(v);
}

VarSet VarSet::from_ids(const std::vector<VarId>& ids) {
  VarSet s;
  for (VarId v : ids) s.insert(v);
  return s;
}

VarSet VarSet::range(VarId n) {
  VarSet s;
  s.words_.assign((n + 63) / 64, ~std::uint64_t{0});
  if (n % 64) s.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  return s;
}

VarSet VarSet::from_mask(std::uint64_t mask, const std::vector<VarId>& universe) {
  VarSet s;
  while (mask) {
    s.insert(universe[std::countr_zero(mask)]);
    mask &= mask - 1;
  }
  return s;
}

void VarSet::insert(VarId v) {
  const std::size_t w = v >> 6;
  if (w >= words_.size()) words_.resize(w + 1, 0);
  words_[w] |= std::uint64_t{1} << (v & 63);
}

void VarSet::erase(VarId v) {
  const std::size_t w = v >> 6;
  if (w >= words_.size()) return;
  words_[w] &= ~(std::uint64_t{1} << (v & 63));
  trim();
}

void VarSet::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

std::size_t VarSet::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::vector<VarId> VarSet::ids() const {
  std::vector<VarId> out;
  out.reserve(size());
  for_each([&](VarId v) { out.push_back(v); });
  return out;
}

std::uint64_t VarSet::mask_in(const std::vector<VarId>& universe) const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (contains(universe[i])) m |= std::uint64_t{1} << i;
  }
  return m;
}

bool VarSet::subset_of(const VarSet& o) const {
  if (words_.size() > o.words_.size()) return false;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~o.words_[i]) return false;
  }
  return true;
}

bool VarSet::intersects(const VarSet& o) const {
  const std::size_t n = std::min(words_.size(), o.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (words_[i] & o.words_[i]) return true;
  }
  return false;
}

VarSet VarSet::operator|(const VarSet& o) const {
  VarSet r = words_.size() >= o.words_.size() ? *this : o;
  const VarSet& s = words_.size() >= o.words_.size() ? o : *this;
  for (std::size_t i = 0; i < s.words_.size(); ++i) r.words_[i] |= s.words_[i];
  return r;
}

VarSet VarSet::operator&(const VarSet& o) const {
  VarSet r;
  const std::size_t n = std::min(words_.size(), o.words_.size());
  r.words_.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.words_[i] = words_[i] & o.words_[i];
  r.trim();
  return r;
}

VarSet VarSet::operator-(const VarSet& o) const {
  VarSet r = *this;
  const std::size_t n = std::min(words_.size(), o.words_.size());
  for (std::size_t i = 0; i < n; ++i) r.words_[i] &= ~o.words_[i];
  r.trim();
  return r;
}

bool VarSet::operator<(const VarSet& o) const {
  if (words_.size() != o.words_.size()) return words_.size() < o.words_.size();
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
  }
  return false;
}

std::size_t VarSet::hash() const {
  std::uint64_t h = words_.size();
  for (auto w : words_) h = mix64(h ^ w);
  return static_cast<std::size_t>(h);
}

Monomial Monomial::var(VarId v, std::uint32_t exp) {
  Monomial m;
  if (exp == 0) return m;
  m.support_.insert(v);
  if (exp >= 2) m.high_.emplace_back(v, exp);
  return m;
}

Monomial Monomial::from_exponents(const std::vector<std::pair<VarId, std::uint32_t>>& exps) {
  std::vector<std::pair<VarId, std::uint32_t>> sorted(exps);
  std::sort(sorted.begin(), sorted.end());
  Monomial m;
  for (std::size_t i = 0; i < sorted.size();) {
    const VarId v = sorted[i].first;
    std::uint32_t e = 0;
    for (; i < sorted.size() && sorted[i].first == v; ++i) e += sorted[i].second;
    if (e == 0) continue;
    m.support_.insert(v);
    if (e >= 2) m.high_.emplace_back(v, e);
  }
  return m;
}

std::uint32_t Monomial::exponent(VarId v) const {
  if (!support_.contains(v)) return 0;
  for (const auto& [w, e] : high_) {
    if (w == v) return e;
  }
  return 1;
}

std::uint64_t Monomial::degree() const {
  std::uint64_t d = support_.size();
  for (const auto& [v, e] : high_) d += e - 1;
  return d;
}

std::uint32_t Monomial::max_exponent() const {
  if (support_.empty()) return 0;
  std::uint32_t m = 1;
  for (const auto& [v, e] : high_) m = std::max(m, e);
  return m;
}

std::vector<std::pair<VarId, std::uint32_t>> Monomial::exponents() const {
  std::vector<std::pair<VarId, std::uint32_t>> out;
  for_each([&](VarId v, std::uint32_t e) { out.emplace_back(v, e); });
  return out;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.support_ = support_ | o.support_;
  if (high_.empty() && o.high_.empty() && !support_.intersects(o.support_)) return r;
  r.support_.for_each([&](VarId v) {
    const std::uint32_t e = exponent(v) + o.exponent(v);
    if (e >= 2) r.high_.emplace_back(v, e);
  });
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  if (!support_.subset_of(o.support_)) return false;
  for (const auto& [v, e] : high_) {
    if (o.exponent(v) < e) return false;
  }
  return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
  std::vector<std::pair<VarId, std::uint32_t>> exps;
  o.for_each([&](VarId v, std::uint32_t e) {
    const std::uint32_t mine = exponent(v);
    if (mine > e) throw std::logic_error("quotient_of: monomial does not divide");
    if (e > mine) exps.emplace_back(v, e - mine);
  });
  return from_exponents(exps);
}

Monomial Monomial::without(VarId v) const {
  Monomial r = *this;
  r.support_.erase(v);
  r.high_.erase(std::remove_if(r.high_.begin(), r.high_.end(), [v](const auto& p) { return p.first == v; }),
                r.high_.end());
  return r;
}

Monomial Monomial::restrict_to(const VarSet& s) const {
  Monomial r;
  r.support_ = support_ & s;
  for (const auto& p : high_) {
    if (s.contains(p.first)) r.high_.push_back(p);
  }
  return r;
}

bool Monomial::operator<(const Monomial& o) const {
  if (support_ == o.support_) return high_ < o.high_;
  return support_ < o.support_;
}

std::size_t Monomial::hash() const {
  std::uint64_t h = support_.hash();
  for (const auto& [v, e] : high_) h = mix64(h ^ (std::uint64_t{v} << 32 | e));
  return static_cast<std::size_t>(h);
}

}  // namespace ipslab
