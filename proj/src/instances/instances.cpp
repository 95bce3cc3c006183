#include "ipslab/instances/instances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ipslab/algebra/ops.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/util/random.hpp"

namespace ipslab {

namespace {

constexpr std::uint64_t kMaxGeneratedTerms = std::uint64_t{1} << 22;

std::string idx(const std::string& base, std::uint64_t i) { return base + std::to_string(i); }

std::string idx2(const std::string& base, std::uint64_t i, std::uint64_t j) {
  return base + "_{" + std::to_string(i) + "," + std::to_string(j) + "}";
}

// Exact integer c-th root of v, if any.
std::optional<std::uint64_t> exact_root(std::uint64_t v, std::uint64_t c) {
  const auto guess = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<long double>(v), 1.0L / c)));
  for (std::uint64_t r = guess > 1 ? guess - 1 : 1; r <= guess + 1; ++r) {
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < c && acc <= v; ++i) acc *= r;
    if (acc == v) return r;
  }
  return std::nullopt;
}

Json field_scalar(const Field& f, const Scalar& s) { return f.format(s); }

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > ~std::uint64_t{0}) throw GuardError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

Json InstanceDescriptor::to_json(const VarTable& vars) const {
  Json j;
  j["family"] = family;
  Json p = Json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = std::move(p);
  j["field"] = field.describe();
  j["beta"] = field_scalar(field, beta);
  Json b = Json::array();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    b.push_back({{"label", blocks.label(i)}, {"vars", varset_to_json(blocks.block(i), vars)}});
  }
  j["blocks"] = std::move(b);
  if (!pi.empty()) j["pi"] = pi;
  if (!alpha.empty()) {
    Json a = Json::array();
    for (const auto& s : alpha) a.push_back(field.format(s));
    j["alpha"] = std::move(a);
  }
  j["notes"] = notes;
  return j;
}

bool blockwise_valid_n(std::uint64_t n) {
  if (n < 2 || !std::has_single_bit(n)) return false;
  const std::uint64_t L = std::countr_zero(n);
  return n % L == 0;
}

std::vector<std::uint64_t> blockwise_valid_sizes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= limit && n != 0; n <<= 1) {
    if (blockwise_valid_n(n)) out.push_back(n);
  }
  return out;
}

Field char_p_ambient(const Field& requested) {
  switch (requested.kind()) {
    case Field::Kind::rationals:
      return requested;
    case Field::Kind::prime:
      return Field::extension(requested.characteristic(), 2);
    case Field::Kind::extension:
      return requested;
  }
  return requested;
}

Instance gen_blockwise_binary(std::uint64_t n, const Field& requested, BlockwiseOptions opts) {
  if (!blockwise_valid_n(n)) {
    std::string valid;
    for (auto v : blockwise_valid_sizes(1u << 16)) valid += (valid.empty() ? "" : ", ") + std::to_string(v);
    throw DomainError("blockwise instance needs n = 2^L with L dividing n; valid n: " + valid + ", ...");
  }
  const Field F = char_p_ambient(requested);
  const std::uint64_t L = std::countr_zero(n);
  const std::uint64_t N = n / L;
  std::vector<std::string> names;
  for (std::uint64_t i = 1; i <= n; ++i) names.push_back(idx("x", i));
  for (std::uint64_t i = 0; i < n; ++i) names.push_back(idx("y", i));
  auto vars = VarTable::make(names);
  auto x = [](std::uint64_t i) { return static_cast<VarId>(i - 1); };  // 1-based
  auto y = [n](std::uint64_t t) { return static_cast<VarId>(n + t); };

  std::vector<SparsePoly::Term> terms;
  std::vector<VarSet> blocks;
  std::vector<std::string> labels;
  const std::uint64_t full = (std::uint64_t{1} << L) - 1;
  for (std::uint64_t b = 0; b < N; ++b) {
    VarSet block;
    for (std::uint64_t j = 1; j <= L; ++j) block.insert(x(b * L + j));
    blocks.push_back(block);
    labels.push_back(idx("X", b + 1));
    for (std::uint64_t s = 0; s <= full; ++s) {
      if (!opts.inclusive && (s == 0 || s == full)) continue;
      VarSet supp;
      for (std::uint64_t j = 0; j < L; ++j) {
        if (s >> j & 1) supp.insert(x(b * L + j + 1));
      }
      supp.insert(y(s));  // t(S) = sum_j Pi_S[j] 2^{j-1}
      terms.emplace_back(Monomial(supp), F.one());
    }
  }
  VarSet ys;
  for (std::uint64_t t = 0; t < n; ++t) ys.insert(y(t));
  blocks.push_back(ys);
  labels.push_back("Y");

  InstanceDescriptor d;
  d.family = "blockwise";
  d.params = {{"n", static_cast<std::int64_t>(n)}, {"log_n", static_cast<std::int64_t>(L)}, {"N", static_cast<std::int64_t>(N)}};
  d.field = F;
  d.beta = F.kind() == Field::Kind::rationals ? F.one() : F.generator();
  d.blocks = VarPartition(blocks, labels);
  d.notes.push_back(opts.inclusive ? "subsets S of X_i range over all subsets, including the empty set and X_i"
                                   : "subsets S of X_i range over nonempty proper subsets only");
  if (F.is_finite()) {
    d.params["p"] = static_cast<std::int64_t>(F.characteristic());
    d.params["k"] = static_cast<std::int64_t>(F.degree() - 1);
    d.notes.push_back("beta is the generator z of " + F.describe() + "; it lies in no proper subfield");
  }
  SparsePoly f = SparsePoly::from_terms(F, vars, std::move(terms)).add_constant(d.beta);
  return Instance{std::move(f), std::move(d)};
}

std::optional<SmconstShape> smconst_shape(std::uint64_t n, std::uint64_t c) {
  if (c <= 3 || n < 2) return std::nullopt;
  const std::uint64_t n2 = n * n;
  const auto ell = exact_root(n2, c);
  if (!ell || *ell < 2) return std::nullopt;
  if (n2 % c != 0) return std::nullopt;
  if (n2 % (*ell * c) != 0) return std::nullopt;  // n^{2(1-1/c)} / c = n^2 / (ell c)
  return SmconstShape{*ell, n2 / c, n2 / (*ell * c)};
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> smconst_valid(std::uint64_t max_n) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t n = 2; n <= max_n; ++n) {
    const auto cmax = 2 * static_cast<std::uint64_t>(std::bit_width(n));
    for (std::uint64_t c = 4; c <= cmax; ++c) {
      if (smconst_shape(n, c)) out.emplace_back(n, c);
    }
  }
  return out;
}

Instance gen_setmultilinear_constdeg(std::uint64_t n, std::uint64_t c, const Field& requested,
                                     std::optional<std::uint64_t> pi_seed) {
  const auto shape = smconst_shape(n, c);
  if (!shape) {
    throw DomainError("set-multilinear instance needs c > 3 with n^{2/c}, n^2/c and n^{2(1-1/c)}/c all integers (n=" +
                      std::to_string(n) + ", c=" + std::to_string(c) + ")");
  }
  const std::uint64_t n2 = n * n;
  if (shape->parts * n2 > kMaxGeneratedTerms) throw GuardError("set-multilinear instance too large to generate");
  const Field F = char_p_ambient(requested);
  std::vector<std::string> names;
  for (std::uint64_t i = 1; i <= c; ++i) {
    for (std::uint64_t j = 1; j <= shape->width; ++j) names.push_back(idx2("x", i, j));
  }
  for (std::uint64_t a = 1; a <= n; ++a) {
    for (std::uint64_t b = 1; b <= n; ++b) names.push_back(idx2("y", a, b));
  }
  auto vars = VarTable::make(names);
  auto x = [&](std::uint64_t i, std::uint64_t j) { return static_cast<VarId>((i - 1) * shape->width + (j - 1)); };
  auto y = [&](std::uint64_t r) { return static_cast<VarId>(c * shape->width + r); };

  InstanceDescriptor d;
  d.family = "smconst";
  d.params = {{"n", static_cast<std::int64_t>(n)},
              {"c", static_cast<std::int64_t>(c)},
              {"ell", static_cast<std::int64_t>(shape->ell)},
              {"parts", static_cast<std::int64_t>(shape->parts)}};
  d.field = F;
  d.beta = F.kind() == Field::Kind::rationals ? F.one() : F.generator();

  std::vector<SparsePoly::Term> terms;
  std::vector<VarSet> blocks;
  std::vector<std::string> labels;
  for (std::uint64_t k = 1; k <= shape->parts; ++k) {
    std::vector<std::uint32_t> pi(n2);
    for (std::uint32_t r = 0; r < n2; ++r) pi[r] = r;
    if (pi_seed) {
      Rng rng(derive_seed(*pi_seed, k));
      for (std::size_t i = pi.size(); i > 1; --i) std::swap(pi[i - 1], pi[uniform_below(rng, i)]);
    }
    VarSet block;
    for (std::uint64_t i = 1; i <= c; ++i) {
      for (std::uint64_t j = (k - 1) * shape->ell + 1; j <= k * shape->ell; ++j) block.insert(x(i, j));
    }
    blocks.push_back(block);
    labels.push_back("X(" + std::to_string(k) + ")");
    for (std::uint64_t r = 0; r < n2; ++r) {
      // digits of r in base ell, row 1 most significant
      VarSet supp;
      std::uint64_t rest = r;
      for (std::uint64_t i = c; i >= 1; --i) {
        const std::uint64_t tau = rest % shape->ell;
        rest /= shape->ell;
        supp.insert(x(i, (k - 1) * shape->ell + tau + 1));
      }
      supp.insert(y(pi[r]));
      terms.emplace_back(Monomial(supp), F.one());
    }
    d.pi.push_back(std::move(pi));
  }
  VarSet ys;
  for (std::uint64_t r = 0; r < n2; ++r) ys.insert(y(r));
  blocks.push_back(ys);
  labels.push_back("Y");
  d.blocks = VarPartition(blocks, labels);
  d.notes.push_back(pi_seed ? "pi_k: seeded random bijections (seed " + std::to_string(*pi_seed) + ")"
                            : "pi_k: lexicographic rank to row-major y order");
  if (F.is_finite()) d.notes.push_back("beta is the generator z of " + F.describe());
  SparsePoly f = SparsePoly::from_terms(F, vars, std::move(terms)).add_constant(d.beta);
  return Instance{std::move(f), std::move(d)};
}

Instance gen_subset_sum(std::uint64_t n, const Scalar& beta, const Field& F) {
  if (n == 0) throw DomainError("subset-sum instance needs n >= 1");
  std::vector<std::string> names;
  for (std::uint64_t i = 1; i <= n; ++i) names.push_back(idx("x", i));
  auto vars = VarTable::make(names);
  std::vector<SparsePoly::Term> terms;
  for (VarId v = 0; v < n; ++v) terms.emplace_back(Monomial::var(v), F.one());
  terms.emplace_back(Monomial(), F.neg(beta));
  InstanceDescriptor d;
  d.family = "subset";
  d.params = {{"n", static_cast<std::int64_t>(n)}};
  d.field = F;
  d.beta = beta;
  d.blocks = VarPartition({VarSet::range(static_cast<VarId>(n))}, {"X"});
  if (F.kind() == Field::Kind::rationals) {
    const auto& q = std::get<mpq_class>(beta);
    if (q.get_den() == 1 && q >= 0 && q <= static_cast<unsigned long>(n)) {
      d.notes.push_back("warning: beta in {0..n}, the axiom is satisfiable on the cube");
    }
  }
  return Instance{SparsePoly::from_terms(F, vars, std::move(terms)), std::move(d)};
}

namespace {

struct QuadVars {
  VarTablePtr vars;
  std::vector<std::pair<VarId, VarId>> pairs;  // (x_i, x_j) for each t in order
  std::vector<VarId> ts;
};

QuadVars quadratic_vars(std::uint64_t n) {
  QuadVars q;
  std::vector<std::string> names;
  const std::uint64_t m = 2 * n;
  for (std::uint64_t i = 0; i < m; ++i) names.push_back(idx("x", i));
  for (std::uint64_t i = 0; i < m; ++i) {
    for (std::uint64_t j = i + 1; j < m; ++j) {
      q.ts.push_back(static_cast<VarId>(names.size()));
      q.pairs.emplace_back(static_cast<VarId>(i), static_cast<VarId>(j));
      names.push_back(idx2("t", i, j));
    }
  }
  q.vars = VarTable::make(names);
  return q;
}

VarPartition quadratic_blocks(std::uint64_t n, const QuadVars& q) {
  return VarPartition({VarSet::range(static_cast<VarId>(2 * n)), VarSet::from_ids(q.ts)}, {"X", "T"});
}

}  // namespace

Instance gen_quadratic_subset_sum(std::uint64_t n, const Field& F) {
  if (n == 0) throw DomainError("quadratic subset-sum needs n >= 1");
  const QuadVars q = quadratic_vars(n);
  InstanceDescriptor d;
  d.family = "quadratic";
  d.params = {{"n", static_cast<std::int64_t>(n)}};
  d.field = F;
  d.beta = F.from_int(static_cast<std::int64_t>(2 * binomial(2 * n, 2)));
  d.blocks = quadratic_blocks(n, q);
  if (F.is_finite()) d.notes.push_back("beta = 2 C(2n,2) reduced into " + F.spec() + "; the canonical choice assumes characteristic 0");
  std::vector<SparsePoly::Term> terms;
  for (std::size_t e = 0; e < q.ts.size(); ++e) {
    terms.emplace_back(Monomial(VarSet{q.pairs[e].first, q.pairs[e].second, q.ts[e]}), F.one());
  }
  terms.emplace_back(Monomial(), F.neg(d.beta));
  return Instance{SparsePoly::from_terms(F, q.vars, std::move(terms)), std::move(d)};
}

const char* threshold_rule_name(ThresholdRule r) {
  switch (r) {
    case ThresholdRule::explicit_k:
      return "explicit";
    case ThresholdRule::binom_2n_2:
      return "p^k > C(2n,2)*2^(2n)";
    case ThresholdRule::binom_2n_n:
      return "p^k > C(2n,n)*2^(2n)";
  }
  return "";
}

unsigned threshold_k(std::uint64_t n, std::uint64_t p, ThresholdRule rule) {
  mpz_class bound;
  mpz_class pow2;
  mpz_ui_pow_ui(pow2.get_mpz_t(), 2, 2 * n);
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), 2 * n, rule == ThresholdRule::binom_2n_n ? n : 2);
  bound = binom * pow2;
  mpz_class acc = 1;
  unsigned k = 0;
  while (acc <= bound) {
    acc *= static_cast<unsigned long>(p);
    ++k;
  }
  return std::max(k, 1u);
}

Instance gen_scaled_quadratic(std::uint64_t n, const ScaledOptions& opts) {
  if (n == 0) throw DomainError("scaled quadratic needs n >= 1");
  if (!is_prime(opts.p)) throw DomainError("scaled quadratic needs a prime p");
  const unsigned k = opts.rule == ThresholdRule::explicit_k ? opts.k : threshold_k(n, opts.p, opts.rule);
  if (k == 0) throw DomainError("scaled quadratic needs k >= 1");
  if (static_cast<std::uint64_t>(k) * (k + 1) > 64) throw GuardError("ambient extension degree k(k+1) above 64");
  const Field F = Field::extension(opts.p, k * (k + 1));
  const QuadVars q = quadratic_vars(n);

  InstanceDescriptor d;
  d.family = "scaled";
  d.params = {{"n", static_cast<std::int64_t>(n)}, {"p", static_cast<std::int64_t>(opts.p)}, {"k", k}};
  d.field = F;
  d.notes.push_back(std::string("k rule: ") + threshold_rule_name(opts.rule));
  d.notes.push_back("ambient field F_{p^{k(k+1)}} holds F = F_{p^k} and F' = F_{p^{k+1}} as subfields");

  // beta: first trace image of z^i onto F_{p^{k+1}} that is not in F_{p^k}
  Scalar zi = F.one();
  std::optional<Scalar> beta;
  for (unsigned i = 1; i <= F.degree() && !beta; ++i) {
    zi = F.mul(zi, F.generator());
    Scalar b = F.trace_to_subfield(zi, k + 1);
    if (!F.in_subfield(b, k)) beta = b;
  }
  if (!beta) throw InternalError("no element of F_{p^{k+1}} outside F_{p^k} found");
  d.beta = *beta;

  const std::size_t m = q.ts.size();
  if (opts.alpha) {
    if (opts.alpha->size() != m) throw DomainError("alpha needs C(2n,2) entries");
    for (const auto& a : *opts.alpha) {
      if (!F.in_subfield(a, k)) throw DomainError("alpha entry " + F.format(a) + " is not in F_{p^k}");
    }
    d.alpha = *opts.alpha;
    d.notes.push_back("alpha supplied");
  } else if (opts.all_ones) {
    d.alpha.assign(m, F.one());
    d.notes.push_back("alpha = all ones");
  } else {
    Rng rng(opts.seed);
    for (std::size_t e = 0; e < m; ++e) d.alpha.push_back(F.trace_to_subfield(F.random(rng), k));
    d.params["seed"] = static_cast<std::int64_t>(opts.seed);
    d.notes.push_back("alpha sampled uniformly from F_{p^k} via the trace map");
  }
  d.blocks = quadratic_blocks(n, q);
  std::vector<SparsePoly::Term> terms;
  for (std::size_t e = 0; e < m; ++e) {
    terms.emplace_back(Monomial(VarSet{q.pairs[e].first, q.pairs[e].second, q.ts[e]}), d.alpha[e]);
  }
  terms.emplace_back(Monomial(), F.neg(d.beta));
  return Instance{SparsePoly::from_terms(F, q.vars, std::move(terms)), std::move(d)};
}

VectorInvariant::VectorInvariant(std::uint64_t n, Scalar beta, Field field)
    : n_(n), beta_(std::move(beta)), field_(std::move(field)) {
  if (n == 0) throw DomainError("vector invariant needs n >= 1");
  if (field_.is_finite() && field_.characteristic() < 5) throw DomainError("vector invariant needs characteristic at least 5");
  for (std::int64_t bad : {-1, 0, 1}) {
    if (field_.equal(beta_, field_.from_int(bad))) throw DomainError("vector invariant needs beta outside {-1, 0, 1}");
  }
  const std::uint64_t m = 4 * n;
  if (binomial(m, 4) > (std::uint64_t{1} << 20)) throw GuardError("vector invariant has too many factors");
  std::vector<std::string> names;
  for (std::uint64_t i = 1; i <= m; ++i) names.push_back(idx("x", i));
  for (std::uint64_t i = 1; i <= m; ++i)
    for (std::uint64_t j = i + 1; j <= m; ++j)
      for (std::uint64_t k = j + 1; k <= m; ++k)
        for (std::uint64_t l = k + 1; l <= m; ++l) {
          quads_.push_back(Quad{static_cast<VarId>(i - 1), static_cast<VarId>(j - 1), static_cast<VarId>(k - 1),
                                static_cast<VarId>(l - 1), static_cast<VarId>(names.size())});
          names.push_back("t_{" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "," +
                          std::to_string(l) + "}");
        }
  vars_ = VarTable::make(names);
}

Scalar VectorInvariant::factor_value(std::size_t q, const std::vector<Scalar>& pt) const {
  const Quad& Q = quads_.at(q);
  const Field& F = field_;
  const Scalar inner = F.sub(F.mul(pt.at(Q.i), pt.at(Q.l)), F.mul(pt.at(Q.j), pt.at(Q.k)));
  const Scalar& t = pt.at(Q.t);
  return F.add(F.sub(F.one(), t), F.mul(t, inner));
}

Scalar VectorInvariant::eval(const std::vector<Scalar>& pt) const {
  Scalar acc = field_.one();
  for (std::size_t q = 0; q < quads_.size(); ++q) {
    acc = field_.mul(acc, factor_value(q, pt));
    if (field_.is_zero(acc)) break;
  }
  return field_.sub(acc, beta_);
}

namespace {

SparsePoly factor_poly(const VectorInvariant& g, const VectorInvariant::Quad& Q) {
  const Field& F = g.field();
  const auto& V = g.vars();
  return SparsePoly::from_terms(F, V,
                                {{Monomial(), F.one()},
                                 {Monomial::var(Q.t), F.from_int(-1)},
                                 {Monomial(VarSet{Q.t, Q.i, Q.l}), F.one()},
                                 {Monomial(VarSet{Q.t, Q.j, Q.k}), F.from_int(-1)}});
}

}  // namespace

SparsePoly VectorInvariant::expand() const { return expand_restricted({}); }

SparsePoly VectorInvariant::expand_restricted(const Assignment& fixed) const {
  Scalar scale = field_.one();
  std::vector<SparsePoly> symbolic;
  for (const auto& Q : quads_) {
    SparsePoly p = factor_poly(*this, Q);
    if (!fixed.empty()) p = p.partial_eval(fixed);
    if (p.is_constant()) {
      scale = field_.mul(scale, p.constant_term());
    } else {
      symbolic.push_back(std::move(p));
      if (symbolic.size() > kExpandFactorLimit) {
        throw GuardError("expansion would multiply more than " + std::to_string(kExpandFactorLimit) +
                         " symbolic factors; fix more t variables or evaluate instead");
      }
    }
  }
  SparsePoly acc = SparsePoly::constant(field_, vars_, scale);
  for (const auto& p : symbolic) acc *= p;
  return acc.add_constant(field_.neg(beta_));
}

InstanceDescriptor VectorInvariant::descriptor() const {
  InstanceDescriptor d;
  d.family = "vecinv";
  d.params = {{"n", static_cast<std::int64_t>(n_)}, {"factors", static_cast<std::int64_t>(quads_.size())}};
  d.field = field_;
  d.beta = beta_;
  std::vector<VarId> ts;
  for (const auto& Q : quads_) ts.push_back(Q.t);
  d.blocks = VarPartition({VarSet::range(static_cast<VarId>(4 * n_)), VarSet::from_ids(ts)}, {"X", "T"});
  d.notes.push_back("stored factored; expansion allowed for at most " + std::to_string(kExpandFactorLimit) +
                    " symbolic factors");
  return d;
}

Instance gen_elem_sym_axiom(std::uint64_t n, std::uint64_t d, const Scalar& beta, const Field& F) {
  if (d < 1 || d > n) throw DomainError("elementary symmetric axiom needs 1 <= d <= n");
  if (binomial(n, d) > kMaxGeneratedTerms) throw GuardError("e_{n,d} has too many terms");
  std::vector<std::string> names;
  std::vector<VarId> xs;
  for (std::uint64_t i = 1; i <= n; ++i) {
    xs.push_back(static_cast<VarId>(i - 1));
    names.push_back(idx("x", i));
  }
  auto vars = VarTable::make(names);
  InstanceDescriptor desc;
  desc.family = "esym";
  desc.params = {{"n", static_cast<std::int64_t>(n)}, {"d", static_cast<std::int64_t>(d)}};
  desc.field = F;
  desc.beta = beta;
  desc.blocks = VarPartition({VarSet::range(static_cast<VarId>(n))}, {"X"});
  SparsePoly f = elementary_symmetric(F, vars, xs, static_cast<unsigned>(d)).add_constant(F.neg(beta));
  return Instance{std::move(f), std::move(desc)};
}

}  // namespace ipslab
