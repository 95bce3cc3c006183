#include "ipslab/refute/refute.hpp"

#include <bit>

#include "ipslab/algebra/ops.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/hypercube/dense.hpp"
#include "ipslab/hypercube/inverse.hpp"
#include "ipslab/instances/instances.hpp"

namespace ipslab {

namespace {

std::vector<SparsePoly> padded_h(const LinRefutation& r) {
  const auto& vars = r.f.vars();
  if (r.h.size() > vars->size()) throw DomainError("more Boolean witnesses than variables");
  std::vector<SparsePoly> h = r.h;
  while (h.size() < vars->size()) h.emplace_back(r.field(), vars);
  return h;
}

std::uint64_t degree_of(const SparsePoly& p) { return p.degree().value_or(0); }

}  // namespace

SparsePoly LinRefutation::combination() const {
  return g * f + boolean_combination(padded_h(*this), field(), f.vars());
}

ExactVerdict verify_exact(const LinRefutation& r) {
  ExactVerdict v{false, r.combination().add_constant(r.field().neg(r.field().one()))};
  v.ok = v.residual.is_zero();
  return v;
}

RandomizedVerdict verify_randomized(const LinRefutation& r, unsigned trials, std::uint64_t prime, std::uint64_t seed) {
  RandomizedVerdict out;
  std::vector<SparsePoly> h = padded_h(r);
  std::uint64_t deg = degree_of(r.g) + degree_of(r.f);
  for (const auto& hj : h) {
    if (!hj.is_zero()) deg = std::max<std::uint64_t>(deg, degree_of(hj) + 2);
  }
  out.degree_bound = deg;
  SparsePoly f = r.f, g = r.g;
  Field F = r.field();
  if (!F.is_finite()) {
    if (!is_prime(prime)) throw DomainError(std::to_string(prime) + " is not prime");
    F = Field::prime(prime);
    try {
      f = f.map_field(F);
      g = g.map_field(F);
      for (auto& hj : h) hj = hj.map_field(F);
    } catch (const DivisionByZero&) {
      throw DomainError("the prime divides a denominator of the certificate");
    }
  }
  out.field = F.describe();
  const auto order = F.order();
  if (order && *order <= deg) {
    throw DomainError("field of size " + std::to_string(*order) + " is too small for degree " + std::to_string(deg));
  }
  const std::size_t nv = f.vars()->size();
  for (unsigned t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    std::vector<Scalar> pt;
    for (std::size_t i = 0; i < nv; ++i) pt.push_back(F.random(rng));
    Scalar v = F.mul(g.eval_dense(pt), f.eval_dense(pt));
    for (std::size_t j = 0; j < nv; ++j) {
      if (h[j].is_zero()) continue;
      v = F.add(v, F.mul(h[j].eval_dense(pt), F.sub(F.mul(pt[j], pt[j]), pt[j])));
    }
    ++out.trials;
    if (!F.is_one(v)) {
      out.failed_trial = t;
      return out;
    }
  }
  out.ok = true;
  return out;
}

mpq_class subset_sum_coefficient(unsigned i, const mpq_class& beta) {
  mpq_class prod = 1;
  for (unsigned j = 0; j <= i; ++j) prod *= beta - j;
  if (sgn(prod) == 0) throw DomainError("prod_{j<=i} (beta - j) vanishes; the axiom is satisfiable");
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), i);
  mpq_class c = -mpq_class(fact) / prod;
  c.canonicalize();
  return c;
}

namespace {

LinRefutation with_witnesses(SparsePoly f, SparsePoly g) {
  const Field& F = f.field();
  SparsePoly rest = (g * f).add_constant(F.neg(F.one()));
  BooleanReduction red = reduce_by_boolean_axioms(-rest);
  if (!red.mult.is_zero()) throw InternalError("1 - g f does not vanish on the cube");
  LinRefutation r{std::move(f), std::move(g), std::move(red.h)};
  if (!verify_exact(r).ok) throw InternalError("assembled certificate fails verification");
  return r;
}

}  // namespace

LinRefutation build_subset_sum_refutation(std::uint64_t n, const mpq_class& beta) {
  if (n == 0 || n > 22) throw DomainError("subset-sum refutation needs 1 <= n <= 22");
  const Field Q = Field::rationals();
  std::vector<mpq_class> c;
  for (unsigned i = 0; i <= n; ++i) c.push_back(subset_sum_coefficient(i, beta));
  Instance inst = gen_subset_sum(n, Scalar(beta), Q);
  const auto& vars = inst.f.vars();
  std::vector<VarId> xs;
  for (VarId v = 0; v < n; ++v) xs.push_back(v);
  std::vector<SparsePoly::Term> terms;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    terms.emplace_back(Monomial(VarSet::from_mask(mask, xs)), Scalar(c[std::popcount(mask)]));
  }
  SparsePoly g = SparsePoly::from_terms(Q, vars, std::move(terms));
  for (unsigned i = 0; i <= n; ++i) {
    const VarSet s = VarSet::from_ids({xs.begin(), xs.begin() + i});
    if (!Q.equal(coeff_on_support(inst.f, s), Scalar(c[i]))) {
      throw InternalError("closed-form coefficient of degree " + std::to_string(i) + " disagrees with the cube inverse");
    }
  }
  return with_witnesses(std::move(inst.f), std::move(g));
}

LiftResult lift_sparse_refutation(const SparsePoly& f) {
  const Field& F = f.field();
  if (F.kind() != Field::Kind::rationals) {
    throw DomainError("lifting is implemented over Q only; positive-characteristic construction is out of scope");
  }
  LiftResult out;
  out.beta = -std::get<mpq_class>(f.constant_term());
  for (const auto& [m, c] : f.terms()) {
    if (m.is_one()) continue;
    const mpq_class& q = std::get<mpq_class>(c);
    if (q.get_den() != 1 || sgn(q) <= 0 || !q.get_num().fits_ulong_p()) {
      throw DomainError("unsupported shape: coefficient " + F.format(c) + " of " + f.format_monomial(m) +
                        " is not a positive integer");
    }
    for (unsigned long k = 0; k < q.get_num().get_ui(); ++k) {
      out.images.push_back(m);
      if (out.images.size() > 22) throw GuardError("lift needs more than 22 z variables");
    }
  }
  out.s = out.images.size();
  if (out.s == 0) throw DomainError("unsupported shape: constant axiom");
  const LinRefutation base = build_subset_sum_refutation(out.s, out.beta);
  std::vector<SparsePoly::Term> terms;
  for (const auto& [zm, c] : base.g.terms()) {
    Monomial m;
    zm.for_each([&](VarId k, std::uint32_t) { m = m * out.images[k]; });
    terms.emplace_back(std::move(m), c);
  }
  SparsePoly g = SparsePoly::from_terms(F, f.vars(), std::move(terms));
  out.cert = with_witnesses(f, std::move(g));
  return out;
}

FunctionalCheckReport functional_check_mult_ips(const SparsePoly& g, const SparsePoly& f) {
  FunctionalCheckReport r;
  const Field& F = f.field();
  r.verified = true;
  r.g = g;
  r.multilinear = g.is_multilinear();
  const auto universe = (f.support() | g.support()).ids();
  if (universe.size() > kDefaultExhaustiveLimit) {
    throw GuardError("cube agreement check over " + std::to_string(universe.size()) + " variables");
  }
  const CubeTable fv = CubeTable::values_of(f, universe);
  const CubeTable gv = CubeTable::values_of(g, universe);
  r.cube_points = fv.size();
  r.cube_agreement = true;
  for (std::uint64_t mask = 0; mask < fv.size(); ++mask) {
    if (!F.is_one(F.mul(fv.get(mask), gv.get(mask)))) {
      r.cube_agreement = false;
      const VarSet ones = VarSet::from_mask(mask, universe);
      std::string w = "{";
      for (std::size_t i = 0; i < universe.size(); ++i) {
        if (i) w += ", ";
        w += f.vars()->name(universe[i]) + ":" + (ones.contains(universe[i]) ? "1" : "0");
      }
      r.first_disagreement = w + "}";
      break;
    }
  }
  try {
    r.canonical = boolean_inverse_table(f, universe, kDefaultExhaustiveLimit).to_poly(f.vars());
    r.coefficientwise_equal = g == r.canonical;
  } catch (const SatisfiableError&) {
    r.canonical = SparsePoly(F, f.vars());
    r.coefficientwise_equal = false;
  }
  return r;
}

FunctionalCheckReport functional_check_mult_ips(const LinRefutation& cert) {
  FunctionalCheckReport r = functional_check_mult_ips(cert.g, cert.f);
  r.verified = verify_exact(cert).ok;
  return r;
}

Json FunctionalCheckReport::to_json() const {
  Json j;
  j["verified"] = verified;
  j["multilinear"] = multilinear;
  j["cube_agreement"] = cube_agreement;
  j["cube_points"] = cube_points;
  j["first_disagreement"] = first_disagreement ? Json(*first_disagreement) : Json(nullptr);
  j["coefficientwise_equal"] = coefficientwise_equal;
  j["g"] = poly_to_json(g);
  return j;
}

ElemSymStructure elem_sym_inverse_structure(std::uint64_t n, std::uint64_t d, const mpq_class& beta) {
  if (n == 0 || n > 16) throw DomainError("elementary symmetric structure check needs 1 <= n <= 16");
  const Field Q = Field::rationals();
  Instance inst = gen_elem_sym_axiom(n, d, Scalar(beta), Q);
  const SparsePoly g = boolean_inverse(inst.f).g;
  ElemSymStructure s;
  s.n = n;
  s.d = d;
  std::vector<std::optional<Scalar>> layer(n + 1);
  s.symmetric = true;
  for (const auto& [m, c] : g.terms()) {
    const auto k = m.degree();
    if (!layer[k]) {
      layer[k] = c;
    } else if (!Q.equal(*layer[k], c)) {
      s.symmetric = false;
    }
  }
  for (std::uint64_t k = 0; k <= n; ++k) s.alphas.push_back(layer[k] ? *layer[k] : Q.zero());
  // Every monomial of a nonzero layer must be present.
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (Q.is_zero(s.alphas[k])) continue;
    std::size_t count = 0;
    for (const auto& [m, c] : g.terms()) count += m.degree() == k;
    if (count != binomial(n, k)) s.symmetric = false;
  }
  if (!s.symmetric) throw InternalError("the inverse of a symmetric axiom is not symmetric");
  // Second route: the coefficient of x_1 ... x_k read straight off the cube.
  std::vector<VarId> xs;
  for (VarId v = 0; v < n; ++v) xs.push_back(v);
  for (std::uint64_t k = 0; k <= n; ++k) {
    const VarSet sk = VarSet::from_ids({xs.begin(), xs.begin() + k});
    if (!Q.equal(coeff_on_support(inst.f, sk), s.alphas[k])) throw InternalError("layer coefficient mismatch");
  }
  s.beta_prime = s.alphas[0];
  s.beta_prime_nonzero = !Q.is_zero(s.beta_prime);
  s.zero_pattern = true;
  for (std::uint64_t i = 1; i < d; ++i) s.zero_pattern = s.zero_pattern && Q.is_zero(s.alphas[i]);
  s.nonzero_pattern = true;
  for (std::uint64_t i = d; i <= n; ++i) s.nonzero_pattern = s.nonzero_pattern && !Q.is_zero(s.alphas[i]);
  return s;
}

Json certificate_to_json(const LinRefutation& r) {
  Json j;
  j["field"] = r.field().describe();
  j["axiom"] = poly_to_json(r.f);
  j["g"] = poly_to_json(r.g);
  Json h = Json::array();
  for (const auto& hj : padded_h(r)) h.push_back(poly_to_json(hj));
  j["h"] = h;
  return j;
}

LinRefutation certificate_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("axiom") || !j.contains("g")) {
    throw DomainError("certificate JSON needs \"axiom\" and \"g\"");
  }
  SparsePoly f = poly_from_json(j.at("axiom"));
  if (j.contains("field")) {
    const Field F = Field::parse(j.at("field").get<std::string>());
    if (!(F == f.field())) f = poly_from_json(j.at("axiom"), F, f.vars());
  }
  const Field& F = f.field();
  SparsePoly g = poly_from_json(j.at("g"), F, f.vars());
  std::vector<SparsePoly> h;
  if (j.contains("h")) {
    for (const auto& hj : j.at("h")) h.push_back(poly_from_json(hj, F, f.vars()));
  }
  if (h.size() > f.vars()->size()) throw DomainError("more Boolean witnesses than axiom variables");
  return LinRefutation{std::move(f), std::move(g), std::move(h)};
}

}  // namespace ipslab
