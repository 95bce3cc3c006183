#include <doctest.h>

#include <functional>

#include "ipslab/algebra/ops.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/measures/measures.hpp"
#include "ipslab/roabp/roabp.hpp"
#include "ipslab/roabp/weakness.hpp"
#include "oracles.hpp"

using namespace ipslab;

namespace {

const Field Q = Field::rationals();

SparsePoly P(const std::string& s, const VarTablePtr& v, const Field& F = Q) { return parse_poly(s, F, v); }

Univariate U(std::initializer_list<std::int64_t> cs) {
  Univariate u;
  for (auto c : cs) u.push_back(Q.from_int(c));
  return u;
}

RoabpLayer scalar_layer(Univariate u) {
  RoabpLayer l;
  l.labels = {std::move(u)};
  return l;
}

/// Width-1 chain reading vars 0..k-1 with the given labels.
Roabp chain(const VarTablePtr& V, std::vector<Univariate> labels) {
  std::vector<VarId> order;
  std::vector<RoabpLayer> layers;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    order.push_back(static_cast<VarId>(i));
    layers.push_back(scalar_layer(labels[i]));
  }
  return Roabp(Q, V, order, layers);
}

/// Matrix-product fold written out as a sum over all source-sink paths.
SparsePoly paths_oracle(const Roabp& a) {
  const Field& F = a.field();
  SparsePoly total = SparsePoly::constant(F, a.vars(), 0);
  std::function<void(std::size_t, std::size_t, SparsePoly)> walk = [&](std::size_t layer, std::size_t node,
                                                                       SparsePoly acc) {
    if (layer == a.n()) {
      total = total + acc;
      return;
    }
    const RoabpLayer& l = a.layers()[layer];
    for (std::size_t j = 0; j < l.cols; ++j) {
      SparsePoly label = SparsePoly::constant(F, a.vars(), 0);
      const Univariate& u = l.at(node, j);
      for (std::size_t k = 0; k < u.size(); ++k) {
        if (F.is_zero(u[k])) continue;
        label = label + SparsePoly::term(F, a.vars(), Monomial::from_exponents({{a.order()[layer], std::uint32_t(k)}}),
                                         u[k]);
      }
      if (!label.is_zero()) walk(layer + 1, j, acc * label);
    }
  };
  walk(0, 0, SparsePoly::constant(F, a.vars(), 1));
  return total;
}

SparsePoly boolean_axiom_sum(const MultilinearWitnesses& w, const VarTablePtr& V, const Field& F) {
  SparsePoly s = SparsePoly::constant(F, V, 0);
  for (VarId v = 0; v < w.h.size(); ++v) {
    if (!w.h[v].is_zero()) s = s + w.h[v] * boolean_axiom(F, V, v);
  }
  return s;
}

}  // namespace

TEST_CASE("chain evaluation and extraction") {
  const auto V = oracle::names("x", 2);
  const Roabp a = chain(V, {U({1, 1}), U({1, 1})});
  CHECK(a.extract() == P("1 + x1 + x2 + x1*x2", V));
  CHECK(Q.format(a.eval(std::vector<Scalar>{Q.one(), Q.one()})) == "4");
  CHECK(a.is_multilinear());
  CHECK(a.width() == 1);

  const Roabp sq = chain(oracle::names("x", 1), {U({0, 0, 1})});
  CHECK(sq.extract() == P("x1^2", sq.vars()));
  CHECK_FALSE(sq.is_multilinear());
}

TEST_CASE("construction rejects malformed chains") {
  const auto V = oracle::names("x", 2);
  RoabpLayer wide;
  wide.cols = 2;
  wide.labels = {U({1}), U({1})};
  CHECK_THROWS_AS(Roabp(Q, V, {0}, {wide}), DomainError);
  CHECK_THROWS_AS(Roabp(Q, V, {0, 0}, {scalar_layer(U({1})), scalar_layer(U({1}))}), DomainError);
  CHECK_THROWS(Roabp(Q, V, {0}, {scalar_layer(U({0, 0, 0, 0, 0, 0, 0, 0, 0, 1}))}));
}

TEST_CASE("multilinearization of labels") {
  const auto V = oracle::names("x", 1);
  const Roabp sq = multilinearize_roabp(chain(V, {U({0, 0, 1})}));
  CHECK(sq.extract() == P("x1", V));
  const Roabp m = multilinearize_roabp(chain(V, {U({2, 1, 3})}));
  CHECK(m.layers()[0].at(0, 0).size() <= 2);
  CHECK(m.extract() == P("2 + 4*x1", V));
}

TEST_CASE("extraction matches the path-sum oracle and evaluation") {
  Rng rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + uniform_below(rng, 5);
    const auto V = oracle::names("x", n);
    RandomRoabpOptions o;
    o.n = n;
    o.max_width = 1 + uniform_below(rng, 3);
    o.degree = 1 + uniform_below(rng, 3);
    o.seed = rep;
    const Roabp a = random_roabp(Q, V, o);
    const SparsePoly f = a.extract();
    CHECK(f == paths_oracle(a));
    std::vector<Scalar> pt;
    for (std::size_t i = 0; i < n; ++i) pt.push_back(Q.from_int(static_cast<std::int64_t>(uniform_below(rng, 7)) - 3));
    CHECK(Q.equal(a.eval(pt), f.eval_dense(pt)));
  }
}

TEST_CASE("multilinearize commutes with extraction") {
  Rng rng(6);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 1 + uniform_below(rng, 8);
    const auto V = oracle::names("x", n);
    RandomRoabpOptions o;
    o.n = n;
    o.max_width = 1 + uniform_below(rng, 4);
    o.degree = 1 + uniform_below(rng, 3);
    o.seed = 100 + rep;
    const Roabp a = random_roabp(Q, V, o);
    const Roabp m = multilinearize_roabp(a);
    CHECK(m.extract() == multilinearize(a.extract()));
    CHECK(m.widths() == a.widths());
    CHECK(m.order() == a.order());
    CHECK(m.is_multilinear());
  }
  // width 3, n = 6, degree 3
  const auto V = oracle::names("x", 6);
  RandomRoabpOptions o;
  o.n = 6;
  o.max_width = 3;
  o.degree = 3;
  o.seed = 3;
  const Roabp a = random_roabp(Q, V, o);
  CHECK(multilinearize_roabp(a).extract() == multilinearize(a.extract()));
}

TEST_CASE("witnesses for a single chain") {
  const auto V = oracle::names("x", 2);
  const SumRoabp a({chain(V, {U({1, 0, 1}), U({1, 1})})});
  const MultilinearWitnesses w = multilinearize_sum_with_witnesses(a);
  CHECK(w.b.extract() == P("(1 + x1)*(1 + x2)", V));
  CHECK(w.h[0] == P("1 + x2", V));
  CHECK(w.h[1].is_zero());

  const SumRoabp lin({chain(V, {U({1, 2}), U({0, 1})})});
  for (const auto& h : multilinearize_sum_with_witnesses(lin).h) CHECK(h.is_zero());
}

TEST_CASE("witnesses of cancelling members sum to zero") {
  const auto V = oracle::names("x", 1);
  const SumRoabp a({chain(V, {U({0, 0, 1})}), chain(V, {U({0, 0, -1})})});
  const MultilinearWitnesses w = multilinearize_sum_with_witnesses(a);
  CHECK(w.b.extract().is_zero());
  CHECK(w.h[0].is_zero());
  CHECK(a.extract().is_zero());
}

TEST_CASE("witness identity on random sums") {
  Rng rng(23);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + uniform_below(rng, 6);
    const auto V = oracle::names("x", n);
    RandomRoabpOptions o;
    o.n = n;
    o.max_width = 1 + uniform_below(rng, 3);
    o.degree = 1 + uniform_below(rng, 3);
    o.seed = rep;
    const SumRoabp a = random_sum_roabp(Q, V, 1 + uniform_below(rng, 3), o);
    const MultilinearWitnesses w = multilinearize_sum_with_witnesses(a);
    CHECK(a.extract() == w.b.extract() + boolean_axiom_sum(w, V, Q));
    CHECK(w.b.is_multilinear());
    CHECK(w.b.extract() == multilinearize(a.extract()));
  }
}

TEST_CASE("width lower bound examples") {
  const auto V = oracle::names("x", 4);
  const SparsePoly f = P("x1*x2 + x3*x4", V);
  CHECK(width_lower_bound(f, {0, 2, 1, 3}) == 2);
  CHECK(width_lower_bound(f, {0, 1, 2, 3}) == 2);
  CHECK(width_lower_bound(P("x1 + 2*x2 - x3 + x4 + 5", V), {3, 1, 0, 2}) == 2);
  CHECK(width_lower_bound(P("x1 + 2*x2 - x3 + x4 + 5", V), {0, 1, 2, 3}) == 2);
}

TEST_CASE("width lower bound is sound for random ROABPs") {
  Rng rng(41);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + uniform_below(rng, 7);
    const auto V = oracle::names("x", n);
    RandomRoabpOptions o;
    o.n = n;
    o.max_width = 1 + uniform_below(rng, 4);
    o.seed = rep;
    const Roabp a = random_roabp(Q, V, o);
    CHECK(width_lower_bound(a.extract(), a.order()) <= a.width());
  }
}

TEST_CASE("json round trip") {
  const auto V = oracle::names("x", 5);
  RandomRoabpOptions o;
  o.n = 5;
  o.max_width = 3;
  o.degree = 2;
  o.seed = 9;
  const Roabp a = random_roabp(Q, V, o);
  const Roabp b = roabp_from_json(roabp_to_json(a), Q, V);
  CHECK(b.extract() == a.extract());
  CHECK(roabp_to_json(b) == roabp_to_json(a));

  const SumRoabp s = random_sum_roabp(Q, V, 2, o);
  const SumRoabp t = sum_roabp_from_json(sum_roabp_to_json(s));
  CHECK(sum_roabp_to_json(t) == sum_roabp_to_json(s));
  CHECK(t.total_width() == s.total_width());
}

TEST_CASE("segment decomposition") {
  const auto V = oracle::names("x", 6);
  RandomRoabpOptions o;
  o.n = 6;
  o.width_profile = {2, 3, 4, 3, 2};
  o.seed = 1;
  const Roabp a = random_roabp(Q, V, o);
  const SegmentDecomposition d = segment_decomposition(a, 3, 2);
  CHECK(d.blocks.size() == 3);
  CHECK(d.boundary_widths == std::vector<std::size_t>{3, 3});
  CHECK(d.blocks[0] == VarSet{a.order()[0], a.order()[1]});
  CHECK_THROWS_AS(segment_decomposition(a, 4, 2), DomainError);
}

TEST_CASE("weakness: width-1 product stays under the per-term cap") {
  const auto V = oracle::names("x", 8);
  RandomRoabpOptions o;
  o.n = 8;
  o.max_width = 1;
  o.seed = 4;
  const SumRoabp a({random_roabp(Q, V, o)});
  const WeaknessReport r = weakness_experiment(a, 2, 4, 30, 11, 2000);
  CHECK(r.violations == 0);
  for (const auto& t : r.trials) {
    CHECK(t.holds);
    CHECK(t.rank <= 1);  // product of univariate factors
    CHECK(t.members[0].rank <= t.members[0].per_term_cap);
    mpz_class cap = 1;
    // rank <= prod_j min(2^|Y_j|, 2^|Z_j|)
    for (const VarSet& blk : segment_decomposition(a.members()[0], 2, 4).blocks) {
      const std::size_t yj = (blk & t.y).size(), zj = (blk & t.z).size();
      cap *= mpz_class(1) << static_cast<unsigned>(std::min(yj, zj));
    }
    CHECK(mpz_class(t.rank) <= cap);
  }
}

TEST_CASE("weakness: caps, balance and measured ranks") {
  const auto V = oracle::names("x", 8);
  RandomRoabpOptions o;
  o.n = 8;
  o.max_width = 3;
  o.coeff_bound = 0;
  o.seed = 2;
  const Field Fp = Field::prime(kDefaultRankPrime);
  const SumRoabp a = random_sum_roabp(Fp, V, 2, o);
  const WeaknessReport r = weakness_experiment(a, 2, 4, 40, 5, 2000);
  CHECK(r.violations == 0);
  bool saw_balanced = false;
  for (const auto& t : r.trials) {
    CHECK(t.y.size() == 4);
    CHECK(t.z.size() == 4);
    CHECK(t.rank <= t.refined_cap);
    CHECK(t.refined_cap <= t.summand_cap);
    // measured rank against the dense oracle
    const SparsePoly f = a.extract();
    CHECK(t.rank == rank_exact(pd_matrix(f, t.y, t.z)));
    bool all_zero = true;
    for (const auto& m : t.members) {
      for (unsigned im : m.imbalance) all_zero = all_zero && im == 0;
    }
    if (all_zero) {
      saw_balanced = true;
      // t * s^{q-1} * 2^{n/2} with t = 2, s = 3, q = 2
      REQUIRE(r.s == 3);
      CHECK(t.summand_cap == mpz_class(2 * 3 * 16));
      for (const auto& m : t.members) CHECK(m.d == 2);
    }
  }
  CHECK(saw_balanced);
  CHECK(r.sampler.marginal_ok);
  CHECK(r.sampler.balance_ok);
}

TEST_CASE("weakness rejects non-multilinear members and bad shapes") {
  const auto V = oracle::names("x", 4);
  RandomRoabpOptions o;
  o.n = 4;
  o.degree = 2;
  const SumRoabp a({random_roabp(Q, V, o)});
  CHECK_THROWS_AS(weakness_experiment(a, 2, 2, 1, 0, 10), DomainError);
  o.degree = 1;
  const SumRoabp b({random_roabp(Q, V, o)});
  CHECK_THROWS_AS(weakness_experiment(b, 3, 2, 1, 0, 10), DomainError);
}
