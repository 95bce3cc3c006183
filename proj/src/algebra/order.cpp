#include "ipslab/algebra/order.hpp"

#include <algorithm>
#include <cctype>

#include "ipslab/errors.hpp"

namespace ipslab {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::pair<std::size_t, std::uint32_t>> ranked(const Monomial& m, const std::vector<std::size_t>& rank) {
  std::vector<std::pair<std::size_t, std::uint32_t>> out;
  m.for_each([&](VarId v, std::uint32_t e) { out.emplace_back(v < rank.size() ? rank[v] : v, e); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

MonomialOrder::MonomialOrder(std::vector<std::vector<VarId>> blocks, std::size_t nvars)
    : blocks_(std::move(blocks)), rank_(nvars, static_cast<std::size_t>(-1)) {
  std::size_t pos = 0;
  for (const auto& b : blocks_) {
    for (VarId v : b) {
      if (v >= nvars) throw DomainError("order names a variable outside the universe");
      if (rank_[v] != static_cast<std::size_t>(-1)) throw DomainError("order lists a variable twice");
      rank_[v] = pos++;
    }
  }
  std::vector<VarId> rest;
  for (VarId v = 0; v < nvars; ++v) {
    if (rank_[v] == static_cast<std::size_t>(-1)) {
      rank_[v] = pos++;
      rest.push_back(v);
    }
  }
  if (!rest.empty()) blocks_.push_back(std::move(rest));
}

MonomialOrder MonomialOrder::by_id(std::size_t nvars) { return MonomialOrder({}, nvars); }

MonomialOrder MonomialOrder::parse(std::string_view spec, const VarTable& vars) {
  std::vector<std::vector<VarId>> blocks;
  std::vector<bool> used(vars.size(), false);
  std::string_view rest = spec;
  while (true) {
    const std::size_t gt = rest.find('>');
    std::string_view group = strip(rest.substr(0, gt));
    if (group.empty()) throw DomainError("empty group in order '" + std::string(spec) + "'");
    std::vector<VarId> block;
    if (group.find(',') == std::string_view::npos && !vars.find(std::string(group))) {
      std::string prefix(group);
      for (auto& ch : prefix) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      for (VarId v : vars.with_prefix(prefix)) {
        if (!used[v]) block.push_back(v);
      }
      if (block.empty()) throw DomainError("order group '" + std::string(group) + "' matches no variable");
    } else {
      std::string_view names = group;
      while (!names.empty()) {
        const std::size_t c = names.find(',');
        const VarId v = vars.id(std::string(strip(names.substr(0, c))));
        block.push_back(v);
        names = c == std::string_view::npos ? std::string_view{} : names.substr(c + 1);
      }
    }
    for (VarId v : block) used[v] = true;
    blocks.push_back(std::move(block));
    if (gt == std::string_view::npos) break;
    rest = rest.substr(gt + 1);
  }
  MonomialOrder o(std::move(blocks), vars.size());
  o.spec_ = std::string(spec);
  return o;
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  const auto da = a.degree(), db = b.degree();
  if (da != db) return da > db ? 1 : -1;
  if (a == b) return 0;
  const auto ra = ranked(a, rank_), rb = ranked(b, rank_);
  for (std::size_t i = 0; i < ra.size() && i < rb.size(); ++i) {
    if (ra[i].first != rb[i].first) return ra[i].first < rb[i].first ? 1 : -1;
    if (ra[i].second != rb[i].second) return ra[i].second > rb[i].second ? 1 : -1;
  }
  return ra.size() == rb.size() ? 0 : (ra.size() > rb.size() ? 1 : -1);
}

std::string MonomialOrder::describe(const VarTable& vars) const {
  if (!spec_.empty()) return spec_;
  std::string s;
  for (const auto& b : blocks_) {
    if (!s.empty()) s += " > ";
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) s += ',';
      s += vars.name(b[i]);
    }
  }
  return s;
}

VarPartition::VarPartition(std::vector<VarSet> blocks, std::vector<std::string> labels)
    : blocks_(std::move(blocks)), labels_(std::move(labels)) {
  VarSet seen;
  for (const auto& b : blocks_) {
    if (seen.intersects(b)) throw DomainError("partition blocks are not disjoint");
    seen = seen | b;
  }
  for (std::size_t i = labels_.size(); i < blocks_.size(); ++i) labels_.push_back("X" + std::to_string(i + 1));
}

VarSet VarPartition::covered() const {
  VarSet s;
  for (const auto& b : blocks_) s = s | b;
  return s;
}

Monomial leading_monomial(const SparsePoly& f, const MonomialOrder& order) {
  if (f.is_zero()) throw DomainError("leading monomial of the zero polynomial");
  const Monomial* best = &f.terms().front().first;
  for (const auto& t : f.terms()) {
    if (order.compare(t.first, *best) > 0) best = &t.first;
  }
  return *best;
}

Monomial trailing_monomial(const SparsePoly& f, const MonomialOrder& order) {
  if (f.is_zero()) throw DomainError("trailing monomial of the zero polynomial");
  const Monomial* best = &f.terms().front().first;
  for (const auto& t : f.terms()) {
    if (order.compare(t.first, *best) < 0) best = &t.first;
  }
  return *best;
}

}  // namespace ipslab
