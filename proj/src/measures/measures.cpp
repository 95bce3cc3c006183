#include "ipslab/measures/measures.hpp"

#include <algorithm>
#include <map>

#include "ipslab/algebra/modular.hpp"
#include "ipslab/algebra/ops.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/hypercube/inverse.hpp"

namespace ipslab {

bool monomials_alg_independent(const std::vector<Monomial>& ms) {
  if (ms.empty()) throw DomainError("monomials_alg_independent needs a nonempty set");
  return exponent_rank(ms) == ms.size();
}

namespace {

void finish_bound(TMBound& r, const MonomialOrder& order) {
  std::vector<Monomial> tms = r.tm_set;
  std::sort(tms.begin(), tms.end(), [&](const Monomial& a, const Monomial& b) { return order.compare(a, b) < 0; });
  tms.erase(std::unique(tms.begin(), tms.end()), tms.end());
  r.tm_set = tms;
  for (std::size_t i : greedy_independent_subset(tms)) r.independent.push_back(tms[i]);
  r.bound = r.independent.size();
}

/// All subsets of `pool` of size d, ascending in the order.
std::vector<VarSet> candidates_of_degree(const std::vector<VarId>& pool, unsigned d, const MonomialOrder& order) {
  std::vector<VarSet> out;
  std::vector<VarId> pick;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (pick.size() == d) {
      out.push_back(VarSet::from_ids(pick));
      return;
    }
    for (std::size_t i = start; i + (d - pick.size()) <= pool.size(); ++i) {
      pick.push_back(pool[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(),
            [&](const VarSet& a, const VarSet& b) { return order.compare(Monomial(a), Monomial(b)) < 0; });
  return out;
}

}  // namespace

TMBound alg_rank_lower_bound_via_TM(const SparsePoly& f, const VarSet& s, const MonomialOrder& order) {
  TMBound r;
  for (const auto& [m, fm] : coeff_decompose(f, s)) {
    ++r.coefficient_count;
    SparsePoly h = fm.add_constant(f.field().neg(fm.constant_term()));
    if (h.is_zero()) {
      ++r.constant_only;
      continue;
    }
    r.tm_set.push_back(trailing_monomial(h, order));
  }
  finish_bound(r, order);
  return r;
}

TMBound alg_rank_lower_bound_targeted(const SparsePoly& axiom, const VarSet& s, const MonomialOrder& order,
                                      unsigned max_degree) {
  const auto block = s.ids();
  if (block.size() > 20) throw GuardError("targeted TM search over a block of " + std::to_string(block.size()) + " variables");
  const auto pool = (axiom.support() - s).ids();
  std::vector<std::vector<VarSet>> by_degree;
  for (unsigned d = 1; d <= max_degree; ++d) by_degree.push_back(candidates_of_degree(pool, d, order));
  TMBound r;
  const Field& F = axiom.field();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << block.size()); ++mask) {
    const VarSet ms = VarSet::from_mask(mask, block);
    bool found = false;
    for (const auto& cands : by_degree) {
      for (const auto& v : cands) {
        if (!F.is_zero(coeff_on_support(axiom, ms | v))) {
          r.tm_set.push_back(Monomial(v));
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (found) {
      ++r.coefficient_count;
    } else {
      ++r.unresolved;
    }
  }
  finish_bound(r, order);
  return r;
}

Json MeasureReport::to_json(const SparsePoly& f) const {
  Json j;
  j["order"] = order;
  j["mode"] = targeted ? "targeted" : "full";
  Json bl = Json::array();
  for (const auto& b : blocks) {
    Json e;
    e["label"] = b.label;
    e["vars"] = varset_to_json(b.block, *f.vars());
    e["bound"] = b.tm.bound;
    Json tms = Json::array(), ind = Json::array();
    for (const auto& m : b.tm.tm_set) tms.push_back(f.format_monomial(m));
    for (const auto& m : b.tm.independent) ind.push_back(f.format_monomial(m));
    e["tm_set"] = tms;
    e["independent"] = ind;
    e["coefficients"] = b.tm.coefficient_count;
    e["constant_only"] = b.tm.constant_only;
    if (targeted) e["unresolved"] = b.tm.unresolved;
    bl.push_back(e);
  }
  j["blocks"] = bl;
  j["sum"] = sum;
  j["label"] = "certified lower bound";
  return j;
}

namespace {

void check_partition(const SparsePoly& f, const VarPartition& partition) {
  for (const auto& b : partition.blocks()) {
    for (VarId v : b.ids()) {
      if (v >= f.vars()->size()) throw DomainError("partition mentions a variable outside the polynomial's table");
    }
  }
}

}  // namespace

MeasureReport kalorkoti_bound(const SparsePoly& f, const VarPartition& partition, const MonomialOrder& order) {
  check_partition(f, partition);
  MeasureReport rep;
  rep.order = order.describe(*f.vars());
  for (std::size_t i = 0; i < partition.size(); ++i) {
    BlockMeasure b{partition.label(i), partition.block(i), alg_rank_lower_bound_via_TM(f, partition.block(i), order)};
    rep.sum += b.tm.bound;
    rep.blocks.push_back(std::move(b));
  }
  return rep;
}

MeasureReport kalorkoti_bound_targeted(const SparsePoly& axiom, const VarPartition& partition,
                                       const MonomialOrder& order, unsigned max_degree) {
  check_partition(axiom, partition);
  MeasureReport rep;
  rep.order = order.describe(*axiom.vars());
  rep.targeted = true;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    BlockMeasure b{partition.label(i), partition.block(i),
                   alg_rank_lower_bound_targeted(axiom, partition.block(i), order, max_degree)};
    rep.sum += b.tm.bound;
    rep.blocks.push_back(std::move(b));
  }
  return rep;
}

FunctionFieldRank rank_over_function_field(const SparsePoly& g, const VarSet& y, const VarSet& z, unsigned trials,
                                           std::uint64_t prime, std::uint64_t seed) {
  if (y.intersects(z)) throw DomainError("Y and Z must be disjoint");
  FunctionFieldRank out;
  if (g.is_zero()) {
    out.field = g.field().describe();
    return out;
  }
  SparsePoly h = g;
  if (!g.field().is_finite()) {
    const Field fp = Field::prime(prime);
    out.field = fp.describe();
    try {
      h = g.map_field(fp);
    } catch (const DivisionByZero& e) {
      out.discarded = trials;
      out.log.push_back(std::string("reduction modulo p failed: ") + e.what());
      return out;
    }
  } else {
    out.field = g.field().describe();
  }
  const auto tvars = (h.support() - (y | z)).ids();
  for (unsigned trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, trial));
    Assignment point;
    for (VarId t : tvars) point[t] = h.field().random(rng);
    try {
      const SparsePoly spec = h.partial_eval(point);
      const std::size_t r = rank_exact(pd_matrix(spec, y, z));
      out.per_trial.push_back(r);
      out.rank = std::max(out.rank, r);
    } catch (const DivisionByZero& e) {
      ++out.discarded;
      out.log.push_back("trial " + std::to_string(trial) + " discarded: " + e.what());
    }
  }
  return out;
}

FunctionFieldRank rank_over_function_field_dense(const CubeTable& g, const VarSet& y, const VarSet& z, unsigned trials,
                                                 std::uint64_t seed) {
  if (y.intersects(z)) throw DomainError("Y and Z must be disjoint");
  const Field& F = g.field();
  if (!F.is_finite()) throw DomainError("dense function-field rank needs a finite field");
  const auto& uni = g.universe();
  std::vector<unsigned> tbits;
  std::vector<VarId> xs;
  for (unsigned i = 0; i < uni.size(); ++i) {
    if (y.contains(uni[i]) || z.contains(uni[i])) {
      xs.push_back(uni[i]);
    } else {
      tbits.push_back(i);
    }
  }
  if (!(y | z).subset_of(VarSet::from_ids(uni))) throw DomainError("Y and Z must lie in the table's universe");
  if (y.size() > 14 || z.size() > 14) throw GuardError("|Y| and |Z| are limited to 14");
  const std::uint64_t ymask = y.mask_in(xs), zmask = z.mask_in(xs);
  const std::size_t ny = std::size_t{1} << y.size(), nz = std::size_t{1} << z.size();
  // Row / column index of every X mask.
  auto pack = [](std::uint64_t v, std::uint64_t sel) {
    std::uint64_t out = 0;
    unsigned k = 0;
    for (unsigned b = 0; b < 64; ++b) {
      if (sel >> b & 1) out |= ((v >> b) & 1) << k++;
    }
    return out;
  };
  FunctionFieldRank out;
  out.field = F.describe();
  const bool fast = F.kind() == Field::Kind::prime;
  for (unsigned trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, trial));
    std::vector<Scalar> gammas;
    for (std::size_t i = 0; i < tbits.size(); ++i) gammas.push_back(F.random(rng));
    std::vector<std::vector<Scalar>> m(ny, std::vector<Scalar>(nz, F.zero()));
    if (fast) {
      const std::uint64_t p = F.characteristic();
      std::vector<std::uint64_t> a = std::get<std::vector<std::uint64_t>>(g.storage());
      for (std::size_t k = tbits.size(); k-- > 0;) {
        const unsigned b = tbits[k];
        const std::uint64_t gamma = std::get<std::uint64_t>(gammas[k]);
        const std::uint64_t low = (std::uint64_t{1} << b) - 1;
        std::vector<std::uint64_t> next(a.size() / 2);
        for (std::uint64_t i = 0; i < next.size(); ++i) {
          const std::uint64_t lo = ((i >> b) << (b + 1)) | (i & low);
          next[i] = mod::add(a[lo], mod::mul(gamma, a[lo | (std::uint64_t{1} << b)], p), p);
        }
        a.swap(next);
      }
      for (std::uint64_t i = 0; i < a.size(); ++i) m[pack(i, ymask)][pack(i, zmask)] = a[i];
    } else {
      std::vector<Scalar> a;
      for (std::uint64_t i = 0; i < g.size(); ++i) a.push_back(g.get(i));
      for (std::size_t k = tbits.size(); k-- > 0;) {
        const unsigned b = tbits[k];
        const std::uint64_t low = (std::uint64_t{1} << b) - 1;
        std::vector<Scalar> next(a.size() / 2);
        for (std::uint64_t i = 0; i < next.size(); ++i) {
          const std::uint64_t lo = ((i >> b) << (b + 1)) | (i & low);
          next[i] = F.add(a[lo], F.mul(gammas[k], a[lo | (std::uint64_t{1} << b)]));
        }
        a.swap(next);
      }
      for (std::uint64_t i = 0; i < a.size(); ++i) m[pack(i, ymask)][pack(i, zmask)] = a[i];
    }
    const std::size_t r = rank_scalar(F, m);
    out.per_trial.push_back(r);
    out.rank = std::max(out.rank, r);
  }
  return out;
}

namespace {

/// a / b in F[T]; the division must be exact.
SparsePoly exact_divide(const SparsePoly& a, const SparsePoly& b, const MonomialOrder& order) {
  const Field& F = a.field();
  const Monomial lb = leading_monomial(b, order);
  const Scalar cb_inv = F.inv(b.coeff(lb));
  SparsePoly q(F, a.vars()), r = a;
  while (!r.is_zero()) {
    const Monomial lr = leading_monomial(r, order);
    if (!lb.divides(lr)) throw InternalError("inexact division in fraction-free elimination");
    const SparsePoly t = SparsePoly::term(F, a.vars(), lb.quotient_of(lr), F.mul(r.coeff(lr), cb_inv));
    q += t;
    r -= t * b;
  }
  return q;
}

}  // namespace

std::size_t rank_symbolic_function_field(const SparsePoly& g, const VarSet& y, const VarSet& z) {
  if (y.intersects(z)) throw DomainError("Y and Z must be disjoint");
  const VarSet x = y | z;
  std::map<Monomial, std::size_t> rows, cols;
  const auto parts = coeff_decompose(g, x);
  for (const auto& [m, c] : parts) {
    rows.emplace(m.restrict_to(y), 0);
    cols.emplace(m.restrict_to(z), 0);
  }
  std::size_t k = 0;
  for (auto& [m, i] : rows) i = k++;
  k = 0;
  for (auto& [m, i] : cols) i = k++;
  const SparsePoly zero(g.field(), g.vars());
  std::vector<std::vector<SparsePoly>> a(rows.size(), std::vector<SparsePoly>(cols.size(), zero));
  for (const auto& [m, c] : parts) a[rows.at(m.restrict_to(y))][cols.at(m.restrict_to(z))] = c;
  const MonomialOrder order = MonomialOrder::by_id(g.vars()->size());
  const std::size_t nr = a.size(), nc = nr ? a[0].size() : 0;
  std::size_t rank = 0;
  SparsePoly prev = SparsePoly::constant(g.field(), g.vars(), 1);
  for (std::size_t c = 0; c < nc && rank < nr; ++c) {
    std::size_t piv = rank;
    while (piv < nr && a[piv][c].is_zero()) ++piv;
    if (piv == nr) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < nr; ++r) {
      for (std::size_t j = c + 1; j < nc; ++j) {
        a[r][j] = exact_divide(a[rank][c] * a[r][j] - a[r][c] * a[rank][j], prev, order);
      }
      a[r][c] = zero;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

std::size_t eval_dim_lower_bound(const SparsePoly& f, const VarSet& xpart, const VarSet& ypart,
                                 const std::vector<Scalar>& sample_set, std::optional<std::size_t> samples,
                                 std::uint64_t seed) {
  if (xpart.intersects(ypart)) throw DomainError("X and Y parts must be disjoint");
  if (!f.support().subset_of(xpart | ypart)) throw DomainError("X and Y parts must cover the variables of f");
  if (f.is_zero()) return 0;
  if (sample_set.empty()) throw DomainError("empty sample set");
  const auto ys = ypart.ids();
  const Field& F = f.field();
  double total = 1;
  for (std::size_t i = 0; i < ys.size(); ++i) total *= static_cast<double>(sample_set.size());
  const bool exhaustive = !samples || static_cast<double>(*samples) >= total;
  std::vector<SparsePoly> images;
  auto add_point = [&](const std::vector<std::size_t>& idx) {
    Assignment pt;
    for (std::size_t i = 0; i < ys.size(); ++i) pt[ys[i]] = sample_set[idx[i]];
    images.push_back(f.partial_eval(pt));
  };
  std::vector<std::size_t> idx(ys.size(), 0);
  if (exhaustive) {
    for (;;) {
      add_point(idx);
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == sample_set.size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
  } else {
    Rng rng(seed);
    for (std::size_t s = 0; s < *samples; ++s) {
      for (auto& v : idx) v = uniform_below(rng, sample_set.size());
      add_point(idx);
    }
  }
  std::map<Monomial, std::size_t> col;
  for (const auto& p : images) {
    for (const auto& t : p.terms()) col.emplace(t.first, 0);
  }
  if (col.empty()) return 0;
  std::size_t k = 0;
  for (auto& [m, i] : col) i = k++;
  std::vector<std::vector<Scalar>> rows;
  for (const auto& p : images) {
    std::vector<Scalar> r(col.size(), F.zero());
    for (const auto& [m, c] : p.terms()) r[col.at(m)] = c;
    rows.push_back(std::move(r));
  }
  return rank_scalar(F, rows);
}

Bipartition random_balanced_partition(const std::vector<VarId>& vars, Rng& rng) {
  if (vars.size() % 2) throw DomainError("balanced partition needs an even number of variables");
  std::vector<VarId> v = vars;
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
  const std::size_t half = v.size() / 2;
  return {VarSet::from_ids({v.begin(), v.begin() + half}), VarSet::from_ids({v.begin() + half, v.end()})};
}

Bipartition random_balanced_partition(const std::vector<VarId>& vars, std::uint64_t seed) {
  Rng rng(seed);
  return random_balanced_partition(vars, rng);
}

Bipartition random_partition(const std::vector<VarId>& vars, Rng& rng) {
  std::vector<VarId> y, z;
  for (VarId v : vars) (uniform_below(rng, 2) ? y : z).push_back(v);
  return {VarSet::from_ids(y), VarSet::from_ids(z)};
}

}  // namespace ipslab
