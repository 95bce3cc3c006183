#include "ipslab/roabp/weakness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ipslab/errors.hpp"
#include "ipslab/instances/instances.hpp"
#include "ipslab/measures/measures.hpp"

namespace ipslab {

SegmentDecomposition segment_decomposition(const Roabp& a, unsigned q, unsigned r) {
  if (q == 0 || r == 0 || static_cast<std::size_t>(q) * r != a.n()) {
    throw DomainError("segments need q * r = n (q=" + std::to_string(q) + ", r=" + std::to_string(r) +
                      ", n=" + std::to_string(a.n()) + ")");
  }
  SegmentDecomposition d{q, r, {}, {}};
  const auto& order = a.order();
  const auto w = a.widths();
  for (unsigned j = 0; j < q; ++j) {
    d.blocks.push_back(VarSet::from_ids({order.begin() + j * r, order.begin() + (j + 1) * r}));
    if (j + 1 < q) d.boundary_widths.push_back(w[(j + 1) * r]);
  }
  return d;
}

SamplerCheck sampler_check(const std::vector<VarId>& vars, std::size_t samples, std::uint64_t seed) {
  SamplerCheck c;
  c.samples = samples;
  const std::size_t n = vars.size();
  std::vector<std::size_t> hits(n, 0);
  Rng rng(derive_seed(seed, 0x5a5a));
  for (std::size_t s = 0; s < samples; ++s) {
    const auto [y, z] = random_balanced_partition(vars, rng);
    for (std::size_t i = 0; i < n; ++i) hits[i] += y.contains(vars[i]);
  }
  c.marginal_ok = samples > 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = samples ? static_cast<double>(hits[i]) / static_cast<double>(samples) : 0.0;
    c.marginals.push_back(f);
    c.max_marginal_deviation = std::max(c.max_marginal_deviation, std::abs(f - 0.5));
  }
  c.marginal_ok = c.marginal_ok && c.max_marginal_deviation <= 0.02;
  Rng rng2(derive_seed(seed, 0xa5a5));
  std::size_t balanced = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto [y, z] = random_partition(vars, rng2);
    balanced += y.size() == z.size();
  }
  c.balance_frequency = samples ? static_cast<double>(balanced) / static_cast<double>(samples) : 0.0;
  c.balance_expected = static_cast<double>(binomial(n, n / 2)) / std::ldexp(1.0, static_cast<int>(n));
  if (n % 2) c.balance_expected = 0;
  c.balance_se = samples ? std::sqrt(c.balance_expected * (1 - c.balance_expected) / static_cast<double>(samples)) : 0;
  c.balance_ok = samples > 0 && std::abs(c.balance_frequency - c.balance_expected) <= 3 * c.balance_se;
  return c;
}

namespace {

mpz_class pow2(std::size_t e) {
  mpz_class x;
  mpz_ui_pow_ui(x.get_mpz_t(), 2, e);
  return x;
}

std::string join(const std::vector<unsigned>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

WeaknessReport weakness_experiment(const SumRoabp& a, unsigned q, unsigned r, unsigned trials, std::uint64_t seed,
                                   std::size_t sampler_samples) {
  if (!a.is_multilinear()) throw DomainError("the weakness experiment needs multilinear members");
  const VarSet support = VarSet::from_ids(a.members().front().order());
  for (const auto& m : a.members()) {
    if (!(VarSet::from_ids(m.order()) == support)) throw DomainError("members must read the same variables");
  }
  WeaknessReport rep;
  rep.n = support.size();
  rep.t = a.size();
  rep.s = a.max_width();
  rep.q = q;
  rep.r = r;
  rep.seed = seed;
  std::vector<SegmentDecomposition> segs;
  std::vector<SparsePoly> polys;
  for (const auto& m : a.members()) {
    segs.push_back(segment_decomposition(m, q, r));
    polys.push_back(m.extract());
  }
  SparsePoly total(a.field(), a.vars());
  for (const auto& p : polys) total += p;

  const double window = std::sqrt(static_cast<double>(r)) / 4.0;
  for (unsigned k = 0; k <= r; ++k) {
    const double imb = std::abs(2.0 * k - r) / 2.0;
    if (imb <= window) rep.epsilon_theory += static_cast<double>(binomial(r, k)) / std::ldexp(1.0, static_cast<int>(r));
  }

  mpz_class s_pow;
  mpz_ui_pow_ui(s_pow.get_mpz_t(), rep.s, q - 1);
  const mpz_class balanced_cap = mpz_class(static_cast<unsigned long>(rep.t)) * s_pow * pow2(rep.n / 2);
  const auto ids = support.ids();
  std::size_t d_total = 0, below = 0, below_balanced = 0;
  for (unsigned trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, trial));
    WeaknessTrial tr;
    std::tie(tr.y, tr.z) = random_balanced_partition(ids, rng);
    unsigned min_imb = ~0u;
    tr.holds = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      MemberTrial mt;
      unsigned sum_imb = 0;
      for (const auto& blk : segs[i].blocks) {
        const int ny = static_cast<int>((blk & tr.y).size()), nz = static_cast<int>((blk & tr.z).size());
        const unsigned imb = static_cast<unsigned>(std::abs(ny - nz));
        mt.imbalance.push_back(imb);
        sum_imb += imb;
        if (imb / 2.0 <= window) ++mt.d;
      }
      d_total += mt.d;
      min_imb = std::min(min_imb, sum_imb);
      mt.per_term_cap = pow2((rep.n - sum_imb) / 2);
      mt.member_cap = mt.per_term_cap;
      for (std::size_t w : segs[i].boundary_widths) mt.member_cap *= static_cast<unsigned long>(w);
      mt.rank = rank_exact(pd_matrix(polys[i], tr.y, tr.z));
      tr.refined_cap += mt.member_cap;
      tr.holds = tr.holds && mt.rank <= mt.member_cap;
      tr.members.push_back(std::move(mt));
    }
    tr.summand_cap = mpz_class(static_cast<unsigned long>(rep.t)) * s_pow * pow2((rep.n - min_imb) / 2);
    tr.rank = rank_exact(pd_matrix(total, tr.y, tr.z));
    tr.holds = tr.holds && tr.rank <= tr.refined_cap && tr.refined_cap <= tr.summand_cap;
    if (!tr.holds) ++rep.violations;
    below += tr.rank < tr.summand_cap;
    below_balanced += tr.rank < balanced_cap;
    rep.trials.push_back(std::move(tr));
  }
  const double nt = trials ? static_cast<double>(trials) : 1.0;
  rep.freq_below_cap = static_cast<double>(below) / nt;
  rep.freq_below_balanced_cap = static_cast<double>(below_balanced) / nt;
  rep.epsilon_hat = trials ? static_cast<double>(d_total) / (nt * static_cast<double>(rep.t) * q) : 0.0;
  rep.epsilon_prime = 1.0 - rep.epsilon_hat;

  const double eps_cap = static_cast<double>(rep.t) * std::pow(static_cast<double>(rep.s), q - 1.0) *
                         std::exp2(rep.n / 2.0 - rep.epsilon_prime * q * window);
  std::size_t above = 0;
  for (const auto& tr : rep.trials) above += static_cast<double>(tr.rank) >= eps_cap;
  rep.freq_above_eps_cap = static_cast<double>(above) / nt;
  const double f = above ? rep.freq_above_eps_cap : 1.0 / nt;
  rep.epsilon_second_is_bound = above == 0;
  rep.epsilon_second = -std::log(f / static_cast<double>(rep.t)) / q;

  rep.sampler = sampler_check(ids, sampler_samples, seed);
  return rep;
}

Json WeaknessReport::to_json() const {
  Json j;
  j["n"] = n;
  j["t"] = t;
  j["s"] = s;
  j["q"] = q;
  j["r"] = r;
  j["seed"] = seed;
  j["trials"] = trials.size();
  j["violations"] = violations;
  j["freq_rank_below_cap"] = freq_below_cap;
  j["freq_rank_below_balanced_cap"] = freq_below_balanced_cap;
  j["epsilon_theory"] = epsilon_theory;
  j["epsilon_hat"] = epsilon_hat;
  j["epsilon_prime"] = epsilon_prime;
  j["freq_rank_above_eps_cap"] = freq_above_eps_cap;
  j["epsilon_second"] = epsilon_second;
  j["epsilon_second_is_lower_bound"] = epsilon_second_is_bound;
  j["sampler"] = {{"samples", sampler.samples},
                  {"max_marginal_deviation", sampler.max_marginal_deviation},
                  {"marginal_ok", sampler.marginal_ok},
                  {"balance_frequency", sampler.balance_frequency},
                  {"balance_expected", sampler.balance_expected},
                  {"balance_se", sampler.balance_se},
                  {"balance_ok", sampler.balance_ok}};
  Json rows = Json::array();
  for (const auto& tr : trials) {
    Json row;
    row["rank"] = tr.rank;
    row["summand_cap"] = tr.summand_cap.get_str();
    row["refined_cap"] = tr.refined_cap.get_str();
    Json ms = Json::array();
    for (const auto& m : tr.members) {
      ms.push_back({{"imbalance", m.imbalance},
                    {"D", m.d},
                    {"per_term_cap", m.per_term_cap.get_str()},
                    {"member_cap", m.member_cap.get_str()},
                    {"rank", m.rank}});
    }
    row["members"] = ms;
    row["holds"] = tr.holds;
    rows.push_back(row);
  }
  j["per_trial"] = rows;
  return j;
}

std::string WeaknessReport::trials_csv() const {
  std::ostringstream os;
  os << "trial,rank,summand_cap,refined_cap,imbalance,D,holds\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& tr = trials[i];
    std::string imb, d;
    for (std::size_t k = 0; k < tr.members.size(); ++k) {
      if (k) {
        imb += '|';
        d += '|';
      }
      imb += join(tr.members[k].imbalance, ';');
      d += std::to_string(tr.members[k].d);
    }
    os << i << ',' << tr.rank << ',' << tr.summand_cap.get_str() << ',' << tr.refined_cap.get_str() << ',' << imb << ','
       << d << ',' << (tr.holds ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace ipslab
