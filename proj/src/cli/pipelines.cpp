#include "ipslab/cli/pipelines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "ipslab/algebra/ops.hpp"
#include "ipslab/algebra/parse.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/hypercube/inverse.hpp"
#include "ipslab/instances/instances.hpp"
#include "ipslab/roabp/weakness.hpp"

namespace ipslab::cli {

namespace {

class Recorder {
 public:
  Recorder(PipelineResult& res, std::string family, std::uint64_t n, std::string field, std::uint64_t seed)
      : res_(res), family_(std::move(family)), n_(n), field_(std::move(field)), seed_(seed) {}

  void add(std::string quantity, std::string value, std::string bound = "", std::optional<bool> satisfied = std::nullopt) {
    if (satisfied && !*satisfied) res_.ok = false;
    res_.rows.push_back(CsvRow{family_, n_, field_, seed_, std::move(quantity), std::move(value), std::move(bound), satisfied});
  }

 private:
  PipelineResult& res_;
  std::string family_;
  std::uint64_t n_;
  std::string field_;
  std::uint64_t seed_;
};

std::string monomial_set(const SparsePoly& f, const std::vector<Monomial>& ms) {
  std::vector<std::string> names;
  for (const auto& m : ms) names.push_back(f.format_monomial(m));
  std::sort(names.begin(), names.end(), natural_less);
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + "}";
}

bool same_set(std::vector<Monomial> a, std::vector<Monomial> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

void record_containment(Recorder& rec, const SupportContainmentReport& sc) {
  std::size_t nonzero = 0, match = 0;
  for (const auto& e : sc.entries) {
    nonzero += e.nonzero;
    match += e.matches;
  }
  const std::string total = std::to_string(sc.entries.size());
  rec.add("support_coeff_nonzero", std::to_string(nonzero), total, sc.all_nonzero);
  rec.add("support_coeff_closed_form", std::to_string(match), total, sc.all_match);
}

}  // namespace

Json containment_to_json(const SparsePoly& f, const SupportContainmentReport& sc) {
  Json j;
  j["beta"] = f.field().format(sc.beta);
  Json es = Json::array();
  for (const auto& e : sc.entries) {
    es.push_back({{"monomial", f.format_monomial(e.m)},
                  {"alpha", f.field().format(e.alpha)},
                  {"coeff", f.field().format(e.coeff)},
                  {"predicted", f.field().format(e.predicted)},
                  {"matches", e.matches}});
  }
  j["entries"] = es;
  j["all_nonzero"] = sc.all_nonzero;
  j["all_match"] = sc.all_match;
  return j;
}

PipelineResult theorem1_pipeline(const Theorem1Options& opts) {
  if (!blockwise_valid_n(opts.n)) throw DomainError("theorem1 needs n = 2^L with L | n (2, 4, 16, 256, ...)");
  PipelineResult res;
  Instance inst = gen_blockwise_binary(opts.n, opts.field, BlockwiseOptions{opts.inclusive});
  const SparsePoly& f = inst.f;
  const auto& vars = f.vars();
  const bool full = 2 * opts.n <= opts.guard_vars;
  Recorder rec(res, "blockwise", opts.n, inst.desc.field.describe(), opts.seed);
  Json& j = res.json;
  j["instance"] = inst.desc.to_json(*vars);
  j["axiom"] = poly_to_json(f);
  j["mode"] = full ? "full" : "targeted";

  const auto sc = check_support_containment(f);
  j["support_containment"] = containment_to_json(f, sc);
  record_containment(rec, sc);

  const auto universe = cube_universe(f);
  std::size_t checked = 0, violations = 0;
  std::optional<SparsePoly> g;
  if (full) {
    g = boolean_inverse(f, opts.guard_vars).g;
    j["inverse_terms"] = g->size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe.size()); ++mask) {
      const VarSet s = VarSet::from_mask(mask, universe);
      if (is_product_support(f, s)) continue;
      ++checked;
      violations += !f.field().is_zero(g->coeff(Monomial(s)));
    }
  } else {
    Rng rng(derive_seed(opts.seed, 1));
    for (unsigned attempt = 0; checked < opts.zero_rule_samples && attempt < 50 * opts.zero_rule_samples; ++attempt) {
      const std::size_t size = 2 + uniform_below(rng, 5);
      std::vector<VarId> pool = universe;
      std::vector<VarId> pick;
      for (std::size_t i = 0; i < size && !pool.empty(); ++i) {
        const std::size_t k = uniform_below(rng, pool.size());
        pick.push_back(pool[k]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
      }
      const auto z = check_zero_coeff_rule(f, Monomial(VarSet::from_ids(pick)));
      if (!z.is_forced_zero) continue;
      ++checked;
      violations += !z.holds;
    }
  }
  j["zero_rule"] = {{"checked", checked}, {"violations", violations}, {"exhaustive", full}};
  rec.add("zero_rule_checked", std::to_string(checked));
  rec.add("zero_rule_violations", std::to_string(violations), "0", violations == 0);

  const MonomialOrder order = MonomialOrder::parse("x>y", *vars);
  MeasureReport rep;
  if (full) {
    rep = kalorkoti_bound(*g, inst.desc.blocks, order);
  } else {
    std::vector<VarSet> xb;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < inst.desc.blocks.size(); ++i) {
      if (inst.desc.blocks.label(i) == "Y") continue;
      xb.push_back(inst.desc.blocks.block(i));
      labels.push_back(inst.desc.blocks.label(i));
    }
    rep = kalorkoti_bound_targeted(f, VarPartition(xb, labels), order, 1);
  }
  j["measure"] = rep.to_json(f);

  std::vector<Monomial> expected;
  for (std::uint64_t k = 0; k < opts.n; ++k) expected.push_back(Monomial::var(vars->id("y" + std::to_string(k))));
  for (const auto& b : rep.blocks) {
    if (b.label == "Y") {
      rec.add("alg_rank_Y", std::to_string(b.tm.bound));
      continue;
    }
    rec.add("tm_set_" + b.label, monomial_set(f, b.tm.tm_set), monomial_set(f, expected), same_set(b.tm.tm_set, expected));
    const bool indep = !b.tm.tm_set.empty() && monomials_alg_independent(b.tm.tm_set);
    rec.add("tm_independent_" + b.label, indep ? "true" : "false", "true", indep);
    rec.add("alg_rank_" + b.label, std::to_string(b.tm.bound), std::to_string(opts.n), b.tm.bound >= opts.n);
  }
  const double reference = static_cast<double>(opts.n * opts.n) / std::log2(static_cast<double>(opts.n));
  rec.add("kalorkoti_sum", std::to_string(rep.sum), ">= n^2/log n = " + std::to_string(static_cast<std::uint64_t>(reference)),
          static_cast<double>(rep.sum) >= reference);
  j["kalorkoti_sum"] = rep.sum;
  j["reference_n2_over_log_n"] = reference;
  j["checks_passed"] = res.ok;
  return res;
}

PipelineResult constdeg_pipeline(const ConstdegOptions& opts) {
  const auto shape = smconst_shape(opts.n, opts.c);
  if (!shape) throw DomainError("no valid set-multilinear shape for n=" + std::to_string(opts.n) + ", c=" + std::to_string(opts.c));
  PipelineResult res;
  Instance inst = gen_setmultilinear_constdeg(opts.n, opts.c, opts.field, opts.pi_seed);
  const SparsePoly& f = inst.f;
  const auto& vars = f.vars();
  Recorder rec(res, "smconst", opts.n, inst.desc.field.describe(), opts.seed);
  Json& j = res.json;
  j["instance"] = inst.desc.to_json(*vars);
  j["axiom"] = poly_to_json(f);
  j["mode"] = "targeted";

  const auto sc = check_support_containment(f);
  j["support_containment"] = containment_to_json(f, sc);
  record_containment(rec, sc);

  std::vector<VarSet> xb;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < inst.desc.blocks.size(); ++i) {
    if (inst.desc.blocks.label(i) == "Y") continue;
    xb.push_back(inst.desc.blocks.block(i));
    labels.push_back(inst.desc.blocks.label(i));
  }
  const MonomialOrder order = MonomialOrder::parse("x>y", *vars);
  const MeasureReport rep = kalorkoti_bound_targeted(f, VarPartition(xb, labels), order, 1);
  j["measure"] = rep.to_json(f);

  std::uint64_t per_block = 1;
  for (std::uint64_t i = 0; i < opts.c; ++i) per_block *= shape->ell;
  const VarSet ys = inst.desc.blocks.block(inst.desc.blocks.size() - 1);
  for (std::size_t b = 0; b < rep.blocks.size(); ++b) {
    const auto& blk = rep.blocks[b];
    std::vector<Monomial> expected;
    for (const auto& [m, c] : f.terms()) {
      if (m.support().intersects(blk.block)) {
        for (VarId v : (m.support() & ys).ids()) expected.push_back(Monomial::var(v));
      }
    }
    rec.add("tm_set_" + blk.label, monomial_set(f, blk.tm.tm_set), monomial_set(f, expected), same_set(blk.tm.tm_set, expected));
    const bool indep = !blk.tm.tm_set.empty() && monomials_alg_independent(blk.tm.tm_set);
    rec.add("tm_independent_" + blk.label, indep ? "true" : "false", "true", indep);
    rec.add("alg_rank_" + blk.label, std::to_string(blk.tm.bound), std::to_string(per_block), blk.tm.bound >= per_block);
  }
  rec.add("kalorkoti_sum_x_blocks", std::to_string(rep.sum), std::to_string(per_block * rep.blocks.size()),
          rep.sum >= per_block * rep.blocks.size());
  j["kalorkoti_sum"] = rep.sum;
  j["checks_passed"] = res.ok;
  return res;
}

PipelineResult fstw_pipeline(const FstwOptions& opts) {
  if (opts.n == 0) throw DomainError("fstw needs n >= 1");
  if (opts.n >= 4) throw GuardError("fstw is limited to n <= 3 (n = 4 needs a cube over 36 variables)");
  PipelineResult res;
  const Field Q = Field::rationals();
  Instance inst = gen_quadratic_subset_sum(opts.n, Q);
  const SparsePoly& f = inst.f;
  const auto& vars = f.vars();
  const Field fp = Field::prime(opts.prime);
  Recorder rec(res, "quadratic", opts.n, fp.describe(), opts.seed);
  Json& j = res.json;
  j["instance"] = inst.desc.to_json(*vars);
  j["prime"] = opts.prime;
  j["trials"] = opts.trials;

  std::vector<VarId> xs;
  for (VarId v = 0; v < 2 * opts.n; ++v) xs.push_back(v);
  const auto universe = cube_universe(f);
  if (universe.size() > std::max<unsigned>(opts.guard_vars, 21)) throw GuardError("cube too large");

  std::vector<Bipartition> parts;
  if (opts.n <= 2) {
    // All balanced splits with x0 on the Y side: each unordered shape once.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << xs.size()); ++mask) {
      if (!(mask & 1) || static_cast<std::size_t>(std::popcount(mask)) != opts.n) continue;
      const VarSet y = VarSet::from_mask(mask, xs);
      parts.emplace_back(y, VarSet::from_ids(xs) - y);
    }
  } else {
    for (unsigned i = 0; i < opts.partitions; ++i) parts.push_back(random_balanced_partition(xs, derive_seed(opts.seed, 1000 + i)));
  }
  j["mode"] = opts.n <= 2 ? "enumerated" : "sampled";

  std::size_t min_rank = SIZE_MAX;
  const std::size_t bound = std::size_t{1} << opts.n;
  Json pj = Json::array();
  std::optional<SparsePoly> g;
  std::optional<CubeTable> table;
  if (opts.n <= 2) {
    g = boolean_inverse(f, opts.guard_vars).g;
    j["inverse_terms"] = g->size();
  } else {
    table = boolean_inverse_table(f.map_field(fp), universe, static_cast<unsigned>(universe.size()));
    j["inverse_terms"] = table->count_nonzero();
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& [y, z] = parts[i];
    const std::uint64_t seed = derive_seed(opts.seed, i);
    const FunctionFieldRank fr = g ? rank_over_function_field(*g, y, z, opts.trials, opts.prime, seed)
                                   : rank_over_function_field_dense(*table, y, z, opts.trials, seed);
    min_rank = std::min(min_rank, fr.rank);
    pj.push_back({{"Y", varset_to_json(y, *vars)},
                  {"Z", varset_to_json(z, *vars)},
                  {"rank", fr.rank},
                  {"per_trial", fr.per_trial},
                  {"discarded", fr.discarded}});
    rec.add("rank_partition_" + std::to_string(i), std::to_string(fr.rank), ">= " + std::to_string(bound), fr.rank >= bound);
  }
  j["partitions"] = pj;
  j["min_rank"] = min_rank;
  j["bound"] = bound;
  rec.add("min_rank", std::to_string(min_rank), ">= " + std::to_string(bound), min_rank >= bound);

  if (g) {
    // Negative control: the degree <= 2 part of g loses rank.
    std::vector<SparsePoly::Term> low;
    for (const auto& t : g->terms()) {
      if (t.first.degree() <= 2) low.push_back(t);
    }
    const SparsePoly gl = SparsePoly::from_terms(Q, vars, std::move(low));
    std::size_t control = SIZE_MAX;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto fr = rank_over_function_field(gl, parts[i].first, parts[i].second, opts.trials, opts.prime,
                                               derive_seed(opts.seed, i));
      control = std::min(control, fr.rank);
    }
    j["control_min_rank"] = control;
    if (opts.n >= 2) rec.add("control_min_rank", std::to_string(control), "< " + std::to_string(bound), control < bound);
  }
  j["checks_passed"] = res.ok;
  return res;
}

PipelineResult weakness_pipeline(const WeaknessOptions& opts) {
  PipelineResult res;
  std::optional<SumRoabp> sum = opts.sum;
  if (!sum) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= opts.n; ++i) names.push_back("x" + std::to_string(i));
    RandomRoabpOptions ro;
    ro.n = opts.n;
    ro.max_width = opts.width;
    ro.degree = 1;
    ro.coeff_bound = 0;
    ro.seed = opts.seed;
    sum = random_sum_roabp(Field::prime(kDefaultRankPrime), VarTable::make(names), opts.t, ro);
  }
  const WeaknessReport rep = weakness_experiment(*sum, opts.q, opts.r, opts.trials, opts.seed, opts.sampler_samples);
  Recorder rec(res, "sum-roabp", rep.n, sum->field().describe(), opts.seed);
  res.json = rep.to_json();
  res.trials_csv = rep.trials_csv();
  for (std::size_t i = 0; i < rep.trials.size(); ++i) {
    const auto& tr = rep.trials[i];
    rec.add("rank_trial_" + std::to_string(i), std::to_string(tr.rank), tr.summand_cap.get_str(), tr.holds);
  }
  rec.add("violations", std::to_string(rep.violations), "0", rep.violations == 0);
  rec.add("marginal_max_deviation", std::to_string(rep.sampler.max_marginal_deviation), "0.02", rep.sampler.marginal_ok);
  rec.add("balance_frequency", std::to_string(rep.sampler.balance_frequency),
          std::to_string(rep.sampler.balance_expected) + " +- 3*" + std::to_string(rep.sampler.balance_se),
          rep.sampler.balance_ok);
  rec.add("epsilon_hat", std::to_string(rep.epsilon_hat), std::to_string(rep.epsilon_theory));
  rec.add("epsilon_prime", std::to_string(rep.epsilon_prime));
  rec.add("epsilon_second", std::to_string(rep.epsilon_second));
  res.json["checks_passed"] = res.ok;
  return res;
}

}  // namespace ipslab::cli
