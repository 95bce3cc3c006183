#include <doctest.h>

#include "ipslab/algebra/ops.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/hypercube/dense.hpp"
#include "ipslab/hypercube/inverse.hpp"
#include "ipslab/instances/instances.hpp"
#include "oracles.hpp"

using namespace ipslab;

namespace {

const Field Q = Field::rationals();

SparsePoly P(const std::string& s, const VarTablePtr& v, const Field& F = Q) { return parse_poly(s, F, v); }

/// A random multilinear f that is nonzero on the cube: random integer
/// coefficients, then the constant is shifted past every cube value.
SparsePoly random_unsat(Rng& rng, const VarTablePtr& V, std::size_t n) {
  SparsePoly f = multilinearize(oracle::random_poly(rng, Q, V, n, 2 + uniform_below(rng, 6), 1));
  std::vector<VarId> u;
  for (VarId v = 0; v < n; ++v) u.push_back(v);
  mpq_class hi = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    hi = std::max(hi, std::get<mpq_class>(f.eval_bool(VarSet::from_mask(m, u))));
  }
  return f.add_constant(Q.from_rational(-hi - 1 - mpq_class(uniform_below(rng, 3))));
}

}  // namespace

TEST_CASE("zeta and mobius are inverse") {
  const auto V = oracle::names("x", 6);
  Rng rng(1);
  for (const Field& F : {Q, Field::prime(13), Field::extension(2, 2)}) {
    const SparsePoly f = multilinearize(oracle::random_poly(rng, F, V, 6, 8, 1));
    std::vector<VarId> u{0, 1, 2, 3, 4, 5};
    CubeTable t = CubeTable::coefficients_of(f, u);
    t.zeta();
    for (std::uint64_t m = 0; m < t.size(); ++m) CHECK(F.equal(t.get(m), f.eval_bool(VarSet::from_mask(m, u))));
    t.mobius();
    CHECK(t.to_poly(V) == f);
  }
}

TEST_CASE("is_unsat_on_cube") {
  const auto V = oracle::names("x", 2);
  CHECK(is_unsat_on_cube(P("x1 + x2 - 3", V)).unsat);
  const UnsatCheck c = is_unsat_on_cube(P("x1 + x2 - 1", V));
  CHECK_FALSE(c.unsat);
  REQUIRE(c.witness);
  CHECK(P("x1 + x2 - 1", V).eval_bool(*c.witness) == Q.zero());
  CHECK(is_unsat_on_cube(gen_blockwise_binary(4, Q).f).unsat);
}

TEST_CASE("boolean_inverse on small examples") {
  const auto V = oracle::names("x", 2);
  CHECK(boolean_inverse(P("x1 - 2", V)).g == P("-1/2 - 1/2*x1", V));
  CHECK(boolean_inverse(P("x1 + x2 - 3", V)).g == P("-1/3 - 1/6*x1 - 1/6*x2 - 1/3*x1*x2", V));
  CHECK(boolean_inverse(P("5", V)).g == P("1/5", V));
  CHECK_THROWS_AS(boolean_inverse(P("x1 + x2 - 1", V)), SatisfiableError);
  std::string wide;
  for (int i = 1; i <= 30; ++i) wide += "x" + std::to_string(i) + " + ";
  CHECK_THROWS_AS(boolean_inverse(P(wide + "31", oracle::names("x", 30)), 24), GuardError);
}

TEST_CASE("boolean_inverse agrees with the triangular-solve oracle") {
  Rng rng(2024);
  for (std::size_t n = 1; n <= 7; ++n) {
    const auto V = oracle::names("x", n);
    std::vector<VarId> u;
    for (VarId v = 0; v < n; ++v) u.push_back(v);
    for (int rep = 0; rep < 4; ++rep) {
      const SparsePoly f = random_unsat(rng, V, n);
      const CubeInverse inv = boolean_inverse(f);
      CHECK(inv.g.is_multilinear());
      CHECK(inv.g == oracle::inverse_by_solving(f, inv.universe));
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        const VarSet b = VarSet::from_mask(m, u);
        CHECK(Q.is_one(Q.mul(inv.g.eval_bool(b), f.eval_bool(b))));
      }
    }
  }
}

TEST_CASE("boolean_inverse over finite fields") {
  const auto V = oracle::names("x", 3);
  const Field F = Field::extension(3, 2);
  const SparsePoly f = P("x1*x2 + x3", V, F).add_constant(F.generator());
  const CubeInverse inv = boolean_inverse(f);
  CHECK(inv.g == oracle::inverse_by_solving(f, inv.universe));
}

TEST_CASE("uniqueness: a multilinear g' agreeing on the cube is g") {
  Rng rng(8);
  const auto V = oracle::names("x", 5);
  const SparsePoly f = random_unsat(rng, V, 5);
  const SparsePoly g = boolean_inverse(f).g;
  // any multilinear polynomial vanishing on the cube is zero, so adding one
  // that does not vanish must break agreement
  for (int i = 0; i < 10; ++i) {
    const SparsePoly d = multilinearize(oracle::random_poly(rng, Q, V, 5, 3, 1));
    if (d.is_zero()) continue;
    bool agree = true;
    std::vector<VarId> u{0, 1, 2, 3, 4};
    for (std::uint64_t m = 0; m < 32; ++m) {
      const VarSet b = VarSet::from_mask(m, u);
      agree = agree && Q.is_one(Q.mul((g + d).eval_bool(b), f.eval_bool(b)));
    }
    CHECK_FALSE(agree);
  }
}

TEST_CASE("coeff_on_support examples") {
  const auto V = oracle::names("x", 2);
  const SparsePoly f = P("x1*x2 - 2", V);
  CHECK(Q.format(coeff_on_support(f, VarSet{0, 1})) == "-1/2");
  CHECK(Q.is_zero(coeff_on_support(f, VarSet{0})));
  CHECK(Q.format(coeff_on_support(f, VarSet{})) == "-1/2");
  CHECK(Q.format(coeff_on_support(P("x1 + 7", V), VarSet{})) == "1/7");
}

TEST_CASE("coeff_on_support equals the interpolated coefficient") {
  Rng rng(99);
  for (std::size_t n = 2; n <= 9; ++n) {
    const auto V = oracle::names("x", n);
    const SparsePoly f = random_unsat(rng, V, n);
    const SparsePoly g = boolean_inverse(f).g;
    std::vector<VarId> u;
    for (VarId v = 0; v < n; ++v) u.push_back(v);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); m += 1 + uniform_below(rng, 3)) {
      const VarSet s = VarSet::from_mask(m, u);
      CHECK(Q.equal(coeff_on_support(f, s), g.coeff(Monomial(s))));
    }
  }
}

TEST_CASE("support containment") {
  const VarTablePtr V = VarTable::make({"x1", "x2", "y1", "y2"});
  const auto rep = check_support_containment(P("x1*y1 + x2*y2 - 2", V));
  CHECK(rep.all_nonzero);
  CHECK(rep.all_match);
  for (const auto& e : rep.entries) CHECK(Q.format(e.coeff) == "-1/2");
  CHECK_THROWS_AS(check_support_containment(P("x1 + x1*x2 - 2", V)), DomainError);

  const Instance inst = gen_blockwise_binary(4, Q);
  const auto big = check_support_containment(inst.f);
  CHECK(big.entries.size() == 7);
  CHECK(big.all_nonzero);
  CHECK(big.all_match);
}

TEST_CASE("zero coefficient rule") {
  const auto V = oracle::names("x", 2);
  auto z = check_zero_coeff_rule(P("x1*x2 - 2", V), Monomial::var(0));
  CHECK(z.is_forced_zero);
  CHECK(Q.is_zero(z.value));
  z = check_zero_coeff_rule(P("x1 + x2 - 3", V), Monomial(VarSet{0, 1}));
  CHECK_FALSE(z.is_forced_zero);
  CHECK(Q.format(z.value) == "-1/3");

  const Instance inst = gen_blockwise_binary(4, Q);
  const VarTable& vars = *inst.f.vars();
  const Monomial unreachable(VarSet{vars.id("x1"), vars.id("y0"), vars.id("y2")});
  z = check_zero_coeff_rule(inst.f, unreachable);
  CHECK(z.is_forced_zero);
  CHECK(Q.is_zero(z.value));
  // {x1, y0, y1} = {y0} u {x1, y1} is the support of the product y0 * x1y1
  const Monomial product(VarSet{vars.id("x1"), vars.id("y0"), vars.id("y1")});
  z = check_zero_coeff_rule(inst.f, product);
  CHECK_FALSE(z.is_forced_zero);
  CHECK(Q.equal(z.value, boolean_inverse(inst.f).g.coeff(product)));
  CHECK_FALSE(Q.is_zero(z.value));
}

TEST_CASE("blockwise instance: unreachable supports have zero coefficient (exhaustive)") {
  const Instance inst = gen_blockwise_binary(4, Q);
  const SparsePoly g = boolean_inverse(inst.f).g;
  const auto u = cube_universe(inst.f);
  REQUIRE(u.size() == 8);
  std::size_t forced = 0;
  for (std::uint64_t m = 0; m < 256; ++m) {
    const VarSet s = VarSet::from_mask(m, u);
    if (is_product_support(inst.f, s)) continue;
    ++forced;
    CHECK(Q.is_zero(g.coeff(Monomial(s))));
  }
  CHECK(forced > 0);
}

TEST_CASE("containment and zero patterns do not depend on the characteristic") {
  for (const Field& F : {Field::extension(3, 2), Field::extension(5, 2)}) {
    const Instance a = gen_blockwise_binary(4, Q);
    const Instance b = gen_blockwise_binary(4, F);
    REQUIRE(a.f.vars()->names() == b.f.vars()->names());
    const auto ra = check_support_containment(a.f);
    const auto rb = check_support_containment(b.f);
    REQUIRE(ra.entries.size() == rb.entries.size());
    for (std::size_t i = 0; i < ra.entries.size(); ++i) {
      CHECK(ra.entries[i].m == rb.entries[i].m);
      CHECK(ra.entries[i].nonzero == rb.entries[i].nonzero);
    }
    const auto u = cube_universe(a.f);
    for (std::uint64_t m = 0; m < 256; ++m) {
      const Monomial mono(VarSet::from_mask(m, u));
      const auto za = check_zero_coeff_rule(a.f, mono);
      const auto zb = check_zero_coeff_rule(b.f, mono);
      CHECK(za.is_forced_zero == zb.is_forced_zero);
      CHECK(za.holds);
      CHECK(zb.holds);
    }
  }
}
