#include <doctest.h>

#include <algorithm>

#include "ipslab/algebra/field.hpp"
#include "ipslab/algebra/ops.hpp"
#include "ipslab/algebra/order.hpp"
#include "ipslab/algebra/parse.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/io/json.hpp"
#include "oracles.hpp"

using namespace ipslab;

namespace {

const Field Q = Field::rationals();

/// Remainder of a by monic b over F_p, coefficients low to high.
std::vector<std::uint64_t> poly_mod(std::vector<std::uint64_t> a, const std::vector<std::uint64_t>& b, std::uint64_t p) {
  while (a.size() >= b.size()) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + (p - lead) * b[i]) % p;
    a.pop_back();
  }
  return a;
}

/// Trial division by every monic polynomial of degree 1..deg/2.
bool irreducible_by_trial_division(const std::vector<std::uint64_t>& f, std::uint64_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<std::uint64_t> b(d + 1, 1);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i, c /= p) b[i] = c % p;
      const auto r = poly_mod(f, b, p);
      if (std::all_of(r.begin(), r.end(), [](std::uint64_t x) { return x == 0; })) return false;
    }
  }
  return true;
}

SparsePoly P(const std::string& s, const VarTablePtr& v, const Field& F = Q) { return parse_poly(s, F, v); }

}  // namespace

TEST_CASE("rational arithmetic") {
  const auto a = FieldElement::parse(Q, "1/2");
  const auto b = FieldElement::parse(Q, "1/3");
  CHECK((a + b).to_string() == "5/6");
  CHECK((a / b).to_string() == "3/2");
  CHECK_THROWS_AS((a / FieldElement::from_int(Q, 0)), DivisionByZero);
}

TEST_CASE("prime field arithmetic") {
  const Field F5 = Field::prime(5);
  CHECK(F5.format(F5.mul(F5.from_int(3), F5.from_int(4))) == "2");
  CHECK(F5.format(F5.inv(F5.from_int(2))) == "3");
  CHECK(F5.format(F5.from_int(-1)) == "4");
  CHECK_THROWS(Field::prime(6));
}

TEST_CASE("F4 uses z^2+z+1 and z*z = z+1") {
  const Field F4 = Field::extension(2, 2);
  CHECK(F4.modulus() == std::vector<std::uint64_t>{1, 1, 1});
  const Scalar z = F4.generator();
  CHECK(F4.format(F4.mul(z, z)) == "[1,1]");
  // z^3 = 1 in F4^*
  CHECK(F4.is_one(F4.pow(z, 3)));
  CHECK(F4.equal(F4.mul(z, F4.inv(z)), F4.one()));
  CHECK(F4.in_subfield(F4.one(), 1));
  CHECK_FALSE(F4.in_subfield(z, 1));
}

TEST_CASE("first irreducible polynomials") {
  // scanning [c0, c1, c2] lexicographically: x^3 + x^2 + 1 comes before x^3 + x + 1
  CHECK(first_irreducible(2, 3) == std::vector<std::uint64_t>{1, 0, 1, 1});
  CHECK(first_irreducible(3, 2) == std::vector<std::uint64_t>{1, 0, 1});
  const std::vector<std::uint64_t> reducible{1, 0, 1};  // x^2 + 1 = (x+1)^2 over F2
  CHECK_FALSE(is_irreducible(2, reducible));
}

TEST_CASE("irreducibility test agrees with trial division") {
  for (std::uint64_t p : {2, 3, 5}) {
    for (std::size_t k = 1; k <= 4; ++k) {
      std::uint64_t count = 1;
      for (std::size_t i = 0; i < k; ++i) count *= p;
      for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<std::uint64_t> f(k + 1, 1);
        std::uint64_t c = code;
        for (std::size_t i = 0; i < k; ++i, c /= p) f[i] = c % p;
        CHECK(is_irreducible(p, f) == irreducible_by_trial_division(f, p));
      }
    }
  }
}

TEST_CASE("field axioms on random triples") {
  for (const Field& F : {Q, Field::prime(101), Field::extension(3, 2), Field::extension(2, 3)}) {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
      const Scalar a = F.random(rng), b = F.random(rng), c = F.random(rng);
      CHECK(F.equal(F.add(F.add(a, b), c), F.add(a, F.add(b, c))));
      CHECK(F.equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c))));
      CHECK(F.equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c))));
      CHECK(F.equal(F.mul(a, b), F.mul(b, a)));
      CHECK(F.is_zero(F.add(a, F.neg(a))));
      if (!F.is_zero(a)) CHECK(F.is_one(F.mul(a, F.inv(a))));
    }
  }
}

TEST_CASE("field spec parsing") {
  CHECK(Field::parse("Q") == Q);
  CHECK(Field::parse("Fp:65537").characteristic() == 65537);
  const Field F = Field::parse("Fpk:p=2,k=2");
  CHECK(F.order() == std::optional<std::uint64_t>(4));
  CHECK(Field::parse(F.describe()) == F);
  CHECK_THROWS(Field::parse("R"));
}

TEST_CASE("polynomial arithmetic") {
  const auto V = oracle::names("x", 2);
  CHECK(P("(x1+1)*(x1-1)", V) == P("x1^2 - 1", V));
  CHECK(P("(x1+x2)^2", V) == P("x1^2 + 2*x1*x2 + x2^2", V));
  Assignment pt{{0, Q.one()}, {1, Q.one()}};
  CHECK(Q.format(P("x1*x2 - 2", V).eval(pt)) == "-1");
  CHECK(P("x1 - x1", V).is_zero());
  CHECK(P("x1^2*x2", V).degree() == std::optional<std::uint64_t>(3));
}

TEST_CASE("polynomials from different tables do not mix") {
  const SparsePoly a = parse_poly("x1");
  const SparsePoly b = parse_poly("y1");
  CHECK_THROWS(a + b);
  CHECK_THROWS(a + a.map_field(Field::prime(7)));
}

TEST_CASE("multilinearize") {
  const auto V = oracle::names("x", 2);
  CHECK(multilinearize(P("x1^2*x2", V)) == P("x1*x2", V));
  CHECK(multilinearize(P("x1^2 + x1", V)) == P("2*x1", V));
  CHECK(multilinearize(P("3", V)) == P("3", V));
}

TEST_CASE("multilinearize is idempotent, linear and preserves cube values") {
  const auto V = oracle::names("x", 5);
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    const SparsePoly f = oracle::random_poly(rng, Q, V, 5, 6, 3);
    const SparsePoly g = oracle::random_poly(rng, Q, V, 5, 6, 3);
    const SparsePoly mf = multilinearize(f);
    CHECK(multilinearize(mf) == mf);
    const Scalar a = Q.from_int(3), b = Q.from_int(-2);
    CHECK(multilinearize(f.scale(a) + g.scale(b)) == mf.scale(a) + multilinearize(g).scale(b));
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
      const VarSet ones = VarSet::from_mask(mask, {0, 1, 2, 3, 4});
      CHECK(Q.equal(mf.eval_bool(ones), f.eval_bool(ones)));
    }
  }
}

TEST_CASE("Boolean reduction witnesses") {
  const auto V = oracle::names("x", 3);
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    const SparsePoly f = oracle::random_poly(rng, Q, V, 3, 5, 4);
    const BooleanReduction r = reduce_by_boolean_axioms(f);
    CHECK(r.mult == multilinearize(f));
    CHECK(r.mult + boolean_combination(r.h, Q, V) == f);
  }
}

TEST_CASE("monomial orders") {
  const VarTablePtr V = VarTable::make({"x1", "x2", "y0", "y1", "y3"});
  const MonomialOrder o = MonomialOrder::parse("x>y", *V);
  CHECK(P("y0", V) == SparsePoly::term(Q, V, trailing_monomial(P("x1*x2 + y0", V), o), Q.one()));
  CHECK(trailing_monomial(P("x1*y1 + x1*x2*y3", V), o) == P("x1*y1", V).terms()[0].first);
  const MonomialOrder by = MonomialOrder::parse("x1>x2", *V);
  CHECK(leading_monomial(P("x1 + x2", V), by) == Monomial::var(0));
  CHECK_THROWS_AS(leading_monomial(SparsePoly(Q, V), o), DomainError);
}

TEST_CASE("monomial order is total and transitive") {
  const auto V = oracle::names("x", 4);
  const MonomialOrder o = MonomialOrder::by_id(4);
  Rng rng(9);
  std::vector<Monomial> ms;
  for (int i = 0; i < 60; ++i) {
    const SparsePoly t = oracle::random_poly(rng, Q, V, 4, 1, 2);
    ms.push_back(t.is_zero() ? Monomial() : t.terms()[0].first);
  }
  for (const auto& a : ms) {
    for (const auto& b : ms) {
      const int ab = o.compare(a, b), ba = o.compare(b, a);
      CHECK((ab > 0) == (ba < 0));
      CHECK((ab == 0) == (a == b));
      for (const auto& c : ms) {
        if (ab > 0 && o.compare(b, c) > 0) CHECK(o.compare(a, c) > 0);
      }
    }
  }
}

TEST_CASE("coefficient decomposition") {
  const VarTablePtr V = VarTable::make({"x1", "x2", "y0", "y1", "y3"});
  const VarSet S{0, 1};
  auto d = coeff_decompose(P("x1*y0 + x1*x2*y3", V), S);
  REQUIRE(d.size() == 2);
  CHECK(d.at(Monomial::var(0)) == P("y0", V));
  CHECK(d.at(Monomial(VarSet{0, 1})) == P("y3", V));
  d = coeff_decompose(P("y0", V), VarSet{0});
  REQUIRE(d.size() == 1);
  CHECK(d.at(Monomial()) == P("y0", V));
  d = coeff_decompose(P("x1*y0 + x1*y1", V), VarSet{0});
  CHECK(d.at(Monomial::var(0)) == P("y0 + y1", V));
}

TEST_CASE("coefficient decomposition round trip") {
  const auto V = oracle::names("x", 6);
  Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    const SparsePoly f = oracle::random_poly(rng, Q, V, 6, 7, 3);
    VarSet s;
    for (VarId v = 0; v < 6; ++v) {
      if (uniform_below(rng, 2)) s.insert(v);
    }
    SparsePoly back(Q, V);
    for (const auto& [m, fm] : coeff_decompose(f, s)) back += fm.mul_monomial(m, Q.one());
    CHECK(back == f);
  }
}

TEST_CASE("elementary symmetric polynomials") {
  const auto V = oracle::names("x", 4);
  CHECK(elementary_symmetric(Q, V, {0, 1}, 1) == P("x1 + x2", V));
  CHECK(elementary_symmetric(Q, V, {0, 1, 2}, 2) == P("x1*x2 + x1*x3 + x2*x3", V));
  CHECK(elementary_symmetric(Q, V, {0, 1, 2, 3}, 2).size() == 6);
}

TEST_CASE("parser") {
  const SparsePoly f = parse_poly("t_{0,1}*x0*x1 - 2");
  CHECK(f.vars()->names() == std::vector<std::string>{"t_{0,1}", "x0", "x1"});
  CHECK(natural_less("x2", "x10"));
  CHECK_THROWS(parse_poly("x1 +", Q));
  CHECK_THROWS(parse_poly("z9", Q, oracle::names("x", 2)));
}

TEST_CASE("JSON round trip over several fields") {
  const auto V = oracle::names("x", 3);
  Rng rng(2);
  for (const Field& F : {Q, Field::prime(7), Field::extension(2, 2)}) {
    const SparsePoly f = oracle::random_poly(rng, F, V, 3, 5, 3)
                             .add_constant(F.kind() == Field::Kind::extension ? F.generator() : F.from_int(2));
    const SparsePoly back = poly_from_json(poly_to_json(f));
    CHECK(back.field() == F);
    CHECK(back == f);
    CHECK(poly_to_json(back).dump() == poly_to_json(f).dump());
  }
}
