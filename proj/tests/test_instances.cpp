#include <doctest.h>

#include <set>

#include "ipslab/errors.hpp"
#include "ipslab/hypercube/inverse.hpp"
#include "ipslab/instances/instances.hpp"
#include "oracles.hpp"

using namespace ipslab;

namespace {

const Field Q = Field::rationals();

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

bool pairwise_incomparable(const SparsePoly& f) {
  std::vector<VarSet> s;
  for (const auto& [m, c] : f.terms()) {
    if (!m.is_one()) s.push_back(m.support());
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i != j && s[i].subset_of(s[j])) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("blockwise instance at n=4") {
  const Instance inst = gen_blockwise_binary(4, Q);
  const VarTablePtr& V = inst.f.vars();
  CHECK(inst.f == parse_poly("2*y0 + x1*y1 + x2*y2 + x1*x2*y3 + x3*y1 + x4*y2 + x3*x4*y3 + 1", Q, V));
  CHECK(inst.f.size() - 1 == 7);
  CHECK(inst.f.degree() == std::optional<std::uint64_t>(3));
  CHECK(inst.desc.blocks.size() == 3);
  CHECK(inst.desc.blocks.label(0) == "X1");
  CHECK(inst.desc.blocks.label(2) == "Y");
}

TEST_CASE("blockwise exclusive reading drops S = {} and S = X_i") {
  const Instance inst = gen_blockwise_binary(4, Q, BlockwiseOptions{false});
  CHECK(inst.f == parse_poly("x1*y1 + x2*y2 + x3*y1 + x4*y2 + 1", Q, inst.f.vars()));
}

TEST_CASE("blockwise sizes") {
  CHECK(blockwise_valid_sizes(300) == std::vector<std::uint64_t>{2, 4, 16, 256});
  CHECK_FALSE(blockwise_valid_n(64));
  CHECK_THROWS_AS(gen_blockwise_binary(8, Q), DomainError);
}

TEST_CASE("blockwise sparsity and degree closed forms") {
  for (std::uint64_t n : {2, 4, 16}) {
    const unsigned L = static_cast<unsigned>(std::countr_zero(n));
    const std::uint64_t N = n / L;
    const Instance inst = gen_blockwise_binary(n, Q);
    // every block contributes one monomial per subset; S = {} always lands on y0
    CHECK(inst.f.size() - 1 == N * (n - 1) + 1);
    CHECK(inst.f.degree() == std::optional<std::uint64_t>(L + 1));
    CHECK(pairwise_incomparable(inst.f));
  }
}

TEST_CASE("blockwise over F2 moves to F4 with beta = z") {
  const Instance inst = gen_blockwise_binary(4, Field::prime(2));
  const Field& F = inst.desc.field;
  CHECK(F == Field::extension(2, 2));
  CHECK_FALSE(F.in_subfield(inst.desc.beta, 1));
  CHECK(F.equal(inst.f.constant_term(), F.generator()));
  CHECK(is_unsat_on_cube(inst.f).unsat);
}

TEST_CASE("set-multilinear constant-degree instance") {
  const auto valid = smconst_valid(256);
  REQUIRE_FALSE(valid.empty());
  CHECK(valid.front() == std::pair<std::uint64_t, std::uint64_t>{4, 4});
  CHECK_FALSE(smconst_shape(4, 3));
  for (const auto& [n, c] : valid) {
    if (n > 16) break;
    const Instance inst = gen_setmultilinear_constdeg(n, c, Q);
    const auto shape = *smconst_shape(n, c);
    CHECK(inst.f.size() - 1 == ipow(n, 4) / shape.ell / c);
    for (const auto& [m, coef] : inst.f.terms()) {
      if (!m.is_one()) CHECK(m.degree() == c + 1);
    }
    CHECK(pairwise_incomparable(inst.f));
  }
}

TEST_CASE("pairing tables are bijections and seeded shuffles are reproducible") {
  const Instance a = gen_setmultilinear_constdeg(4, 4, Q, 5);
  const Instance b = gen_setmultilinear_constdeg(4, 4, Q, 5);
  CHECK(a.desc.pi == b.desc.pi);
  for (const auto& row : a.desc.pi) {
    std::set<std::uint32_t> s(row.begin(), row.end());
    CHECK(s.size() == row.size());
  }
  CHECK(poly_to_json(a.f).dump() == poly_to_json(b.f).dump());
}

TEST_CASE("subset sum") {
  const auto V = oracle::names("x", 2);
  const Instance a = gen_subset_sum(2, Q.from_int(3), Q);
  CHECK(a.f.to_string() == "x1 + x2 - 3");
  CHECK(gen_subset_sum(1, Q.from_int(2), Q).f.to_string() == "x1 - 2");
  CHECK(is_unsat_on_cube(gen_subset_sum(3, Q.from_int(4), Q).f).unsat);
  CHECK_FALSE(is_unsat_on_cube(gen_subset_sum(3, Q.from_int(2), Q).f).unsat);
}

TEST_CASE("quadratic subset sum") {
  const Instance one = gen_quadratic_subset_sum(1, Q);
  CHECK(one.f == parse_poly("t_{0,1}*x0*x1 - 2", Q, one.f.vars()));
  CHECK(is_unsat_on_cube(one.f).unsat);
  const Instance two = gen_quadratic_subset_sum(2, Q);
  CHECK(two.f.vars()->with_prefix("x").size() == 4);
  CHECK(two.f.vars()->with_prefix("t").size() == 6);
  CHECK(Q.format(two.desc.beta) == "12");
  const auto u = cube_universe(two.f);
  mpq_class hi = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << u.size()); ++m) {
    hi = std::max(hi, std::get<mpq_class>(two.f.add_constant(two.desc.beta).eval_bool(VarSet::from_mask(m, u))));
  }
  CHECK(hi == 6);
}

TEST_CASE("scaled quadratic") {
  ScaledOptions o;
  o.p = 2;
  o.k = 2;
  o.rule = ThresholdRule::explicit_k;
  o.all_ones = true;
  const Instance ones = gen_scaled_quadratic(1, o);
  const Field& F = ones.desc.field;
  CHECK(F.degree() == 6);
  CHECK(F.in_subfield(ones.desc.beta, 3));
  CHECK_FALSE(F.in_subfield(ones.desc.beta, 2));
  CHECK(F.equal(ones.f.constant_term(), F.neg(ones.desc.beta)));
  CHECK_FALSE(F.is_zero(ones.f.constant_term()));
  CHECK(is_unsat_on_cube(ones.f).unsat);
  // all-ones alpha: the same shape as the quadratic family
  CHECK(ones.f.size() == gen_quadratic_subset_sum(1, Q).f.size());

  o.all_ones = false;
  o.seed = 3;
  const Instance rnd = gen_scaled_quadratic(1, o);
  for (const auto& a : rnd.desc.alpha) CHECK(rnd.desc.field.in_subfield(a, 2));
  CHECK(is_unsat_on_cube(rnd.f).unsat);
  CHECK(threshold_k(1, 2, ThresholdRule::binom_2n_2) == 3);  // 2^3 > 1 * 4
}

TEST_CASE("vector invariant") {
  const Field F5 = Field::prime(5);
  VectorInvariant vi(1, F5.from_int(2), F5);
  REQUIRE(vi.factor_count() == 1);
  const auto& q = vi.quads()[0];
  std::vector<Scalar> pt(vi.vars()->size(), F5.zero());
  pt[q.i] = F5.one();
  pt[q.l] = F5.one();
  pt[q.t] = F5.one();
  CHECK(F5.is_one(vi.factor_value(0, pt)));

  const SparsePoly f = vi.expand();
  const auto u = cube_universe(f);
  CHECK(u.size() == 5);
  CHECK(is_unsat_on_cube(f).unsat);
  for (std::uint64_t m = 0; m < 32; ++m) {
    std::vector<Scalar> p(vi.vars()->size(), F5.zero());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if ((m >> i) & 1) p[u[i]] = F5.one();
    }
    const Scalar v = vi.factor_value(0, p);
    CHECK((F5.is_zero(v) || F5.is_one(v) || F5.is_one(F5.neg(v))));
    CHECK(F5.equal(vi.eval(p), f.eval_dense(p)));
  }
  CHECK_THROWS_AS(VectorInvariant(2, F5.from_int(2), F5).expand(), GuardError);
  CHECK_THROWS_AS(VectorInvariant(1, F5.from_int(1), F5), DomainError);
  CHECK_THROWS_AS(VectorInvariant(1, Field::prime(3).from_int(2), Field::prime(3)), DomainError);
}

TEST_CASE("elementary symmetric axiom") {
  const Instance e = gen_elem_sym_axiom(4, 2, Q.from_int(7), Q);
  CHECK(e.f.size() == 7);
  CHECK(is_unsat_on_cube(e.f).unsat);
  CHECK(gen_elem_sym_axiom(2, 1, Q.from_int(3), Q).f.to_string() == "x1 + x2 - 3");
  CHECK_THROWS_AS(gen_elem_sym_axiom(3, 4, Q.from_int(7), Q), DomainError);
}

TEST_CASE("char-0 families are unsatisfiable at exhaustive sizes") {
  for (std::uint64_t n : {2, 4}) CHECK(is_unsat_on_cube(gen_blockwise_binary(n, Q).f).unsat);
  // smconst at n=4 has 32 variables: positive coefficients and constant 1 keep every cube value >= 1
  for (const auto& [m, c] : gen_setmultilinear_constdeg(4, 4, Q).f.terms()) CHECK(std::get<mpq_class>(c) > 0);
  for (std::uint64_t n = 1; n <= 8; ++n) CHECK(is_unsat_on_cube(gen_subset_sum(n, Q.from_int(n + 1), Q).f).unsat);
  for (std::uint64_t n = 1; n <= 2; ++n) CHECK(is_unsat_on_cube(gen_quadratic_subset_sum(n, Q).f).unsat);
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (std::uint64_t d = 1; d <= n; ++d) {
      CHECK(is_unsat_on_cube(gen_elem_sym_axiom(n, d, Q.from_int(binomial(n, d) + 1), Q).f).unsat);
    }
  }
}

TEST_CASE("generators are deterministic") {
  CHECK(poly_to_json(gen_blockwise_binary(16, Q).f).dump() == poly_to_json(gen_blockwise_binary(16, Q).f).dump());
  const Instance a = gen_quadratic_subset_sum(2, Q);
  const Instance b = gen_quadratic_subset_sum(2, Q);
  CHECK(a.desc.to_json(*a.f.vars()).dump() == b.desc.to_json(*b.f.vars()).dump());
}
