#include <doctest.h>

#include <cmath>
#include <set>

#include "ipslab/algebra/ops.hpp"
#include "ipslab/errors.hpp"
#include "ipslab/hypercube/inverse.hpp"
#include "ipslab/instances/instances.hpp"
#include "ipslab/measures/measures.hpp"
#include "oracles.hpp"

using namespace ipslab;

namespace {

const Field Q = Field::rationals();

SparsePoly P(const std::string& s, const VarTablePtr& v, const Field& F = Q) { return parse_poly(s, F, v); }

Monomial M(const std::string& s, const VarTablePtr& v) { return P(s, v).terms().begin()->first; }

std::vector<VarId> ids_of(const VarTable& t, std::initializer_list<const char*> names) {
  std::vector<VarId> r;
  for (const char* n : names) r.push_back(t.id(n));
  return r;
}

/// Full 2^|Y| x 2^|Z| coefficient matrix of a multilinear f, rank by plain elimination.
std::size_t pd_rank_oracle(const SparsePoly& f, const std::vector<VarId>& y, const std::vector<VarId>& z) {
  std::vector<std::vector<Scalar>> a(std::size_t{1} << y.size(),
                                     std::vector<Scalar>(std::size_t{1} << z.size(), f.field().zero()));
  for (const auto& [m, c] : f.terms()) {
    const VarSet s = m.support();
    a[s.mask_in(y)][s.mask_in(z)] = c;
  }
  return oracle::rank_field(f.field(), a);
}

/// dim span{ f(X, b) : b in {0,1}^|Y| } computed by substitution into each term.
std::size_t eval_dim_oracle(const SparsePoly& f, const std::vector<VarId>& x, const std::vector<VarId>& y) {
  const Field& F = f.field();
  std::vector<std::vector<Scalar>> rows;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << y.size()); ++b) {
    const VarSet on = VarSet::from_mask(b, y);
    std::vector<Scalar> row(std::size_t{1} << x.size(), F.zero());
    for (const auto& [m, c] : f.terms()) {
      const VarSet s = m.support();
      bool alive = true;
      for (VarId v : y) alive = alive && (!s.contains(v) || on.contains(v));
      if (alive) row[s.mask_in(x)] = F.add(row[s.mask_in(x)], c);
    }
    rows.push_back(std::move(row));
  }
  return oracle::rank_field(F, rows);
}

SparsePoly random_bipartite(Rng& rng, const VarTablePtr& V, std::size_t nvars) {
  return multilinearize(oracle::random_poly(rng, Q, V, nvars, 1 + uniform_below(rng, 10), 1));
}

}  // namespace

TEST_CASE("monomial independence") {
  const auto V = oracle::names("x", 3);
  CHECK(monomials_alg_independent({M("x1", V), M("x1*x2", V)}));
  CHECK(monomials_alg_independent({M("x1*x2", V), M("x2*x3", V), M("x1*x3", V)}));
  CHECK_FALSE(monomials_alg_independent({M("x1*x2", V), M("x2*x3", V), M("x1*x3", V), M("x1*x2*x3", V)}));
  CHECK_FALSE(monomials_alg_independent({M("x1^2", V), M("x1^3", V)}));
  CHECK_THROWS_AS(monomials_alg_independent({}), DomainError);
}

TEST_CASE("trailing-monomial bound examples") {
  const VarTablePtr V = VarTable::make({"x1", "x2", "y0", "y1", "y3"});
  const MonomialOrder ord = MonomialOrder::parse("X>Y", *V);
  const VarSet S = VarSet::from_ids(ids_of(*V, {"x1", "x2"}));

  TMBound b = alg_rank_lower_bound_via_TM(P("x1*y0 + x1*x2*y3", V), S, ord);
  CHECK(b.bound == 2);
  CHECK(b.tm_set == std::vector<Monomial>{M("y3", V), M("y0", V)});

  b = alg_rank_lower_bound_via_TM(P("y0 + y1", V), VarSet{V->id("x1")}, ord);
  CHECK(b.bound == 1);
  // y0 ranks above y1 in the lex tie-break, so the trailing monomial is y1
  CHECK(b.tm_set == std::vector<Monomial>{M("y1", V)});
}

TEST_CASE("trailing monomials of the blockwise inverse") {
  const Instance inst = gen_blockwise_binary(4, Q);
  const SparsePoly g = boolean_inverse(inst.f).g;
  const VarTable& vars = *g.vars();
  const MonomialOrder ord = MonomialOrder::parse("X>Y", vars);
  std::set<Monomial> want;
  for (const char* y : {"y0", "y1", "y2", "y3"}) want.insert(Monomial::var(vars.id(y)));
  for (std::size_t i = 0; i < 2; ++i) {
    const TMBound b = alg_rank_lower_bound_via_TM(g, inst.desc.blocks.block(i), ord);
    CHECK(std::set<Monomial>(b.tm_set.begin(), b.tm_set.end()) == want);
    CHECK(b.bound == 4);
    CHECK(monomials_alg_independent(b.independent));
  }
  const MeasureReport r = kalorkoti_bound(g, inst.desc.blocks, ord);
  CHECK(r.sum >= 9);
  CHECK(r.blocks.size() == 3);

  // the targeted reading through coefficient queries lands on the same sets
  const VarPartition xs({inst.desc.blocks.block(0), inst.desc.blocks.block(1)});
  const MeasureReport t = kalorkoti_bound_targeted(inst.f, xs, ord);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(t.blocks[i].tm.tm_set == r.blocks[i].tm.tm_set);
    CHECK(t.blocks[i].tm.bound == 4);
  }
}

TEST_CASE("kalorkoti small cases") {
  const auto V = oracle::names("x", 2);
  const MonomialOrder ord = MonomialOrder::by_id(2);
  const VarPartition p({VarSet{0}, VarSet{1}});
  CHECK(kalorkoti_bound(P("x1 + x2", V), p, ord).sum == 2);
  CHECK(kalorkoti_bound(P("7", V), p, ord).sum == 0);
}

TEST_CASE("bound never exceeds the number of coefficients") {
  Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + uniform_below(rng, 9);
    const auto V = oracle::names("v", n);
    const SparsePoly f = oracle::random_poly(rng, Q, V, n, 1 + uniform_below(rng, 8), 2);
    if (f.is_zero()) continue;
    VarSet s;
    for (VarId v = 0; v < n; ++v) {
      if (uniform_below(rng, 2)) s.insert(v);
    }
    const TMBound b = alg_rank_lower_bound_via_TM(f, s, MonomialOrder::by_id(n));
    CHECK(b.bound <= coeff_decompose(f, s).size());
    CHECK(b.bound == b.independent.size());
    if (!b.independent.empty()) CHECK(monomials_alg_independent(b.independent));
  }
}

TEST_CASE("partial derivative matrix examples") {
  const VarTablePtr V = VarTable::make({"x1", "x2", "y1", "y2"});
  const VarSet Y{0, 1}, Z{2, 3};
  CHECK(rank_exact(pd_matrix(P("x1*y1 + x2*y2", V), Y, Z)) == 2);
  CHECK(rank_exact(pd_matrix(P("(x1 + x2)*(y1 + y2)", V), Y, Z)) == 1);
  CHECK(rank_exact(pd_matrix(P("0", V), Y, Z)) == 0);
  const PDMatrix m = pd_matrix(P("x1*y1 + x2*y2", V), Y, Z);
  CHECK(m.logical_rows == 4);
  CHECK(m.logical_cols == 4);
  CHECK_THROWS(pd_matrix(P("x1*y1", V), VarSet{0}, VarSet{3}));

  CHECK_THROWS_AS(pd_matrix(P("x1*y1 + x2*y2 + x1*x2*y1", V), Y, Z, 2), GuardError);
}

TEST_CASE("quadratic subset-sum inverse at n=1 after substituting t") {
  const Instance inst = gen_quadratic_subset_sum(1, Q);
  const SparsePoly g = boolean_inverse(inst.f).g;
  const VarTable& vars = *g.vars();
  const VarSet Y{vars.id("x0")}, Z{vars.id("x1")};
  const FunctionFieldRank r = rank_over_function_field(g, Y, Z, 3, kDefaultRankPrime, 7);
  CHECK(r.rank == 2);
  CHECK(r.per_trial.size() + r.discarded == 3);
  CHECK(rank_symbolic_function_field(g, Y, Z) == 2);
}

TEST_CASE("function-field rank of the n=2 inverse meets 2^n") {
  const Instance inst = gen_quadratic_subset_sum(2, Q);
  const SparsePoly g = boolean_inverse(inst.f).g;
  const auto xs = g.vars()->with_prefix("x");
  REQUIRE(xs.size() == 4);
  for (std::uint64_t mask : {0b0011u, 0b0101u, 0b1001u}) {
    const VarSet Y = VarSet::from_mask(mask, xs);
    const VarSet Z = VarSet::from_ids(xs) - Y;
    CHECK(rank_over_function_field(g, Y, Z, 3, kDefaultRankPrime, mask).rank >= 4);
  }
}

TEST_CASE("function-field rank: T-free input and zero") {
  const VarTablePtr V = VarTable::make({"x1", "x2", "y1", "y2"});
  const SparsePoly f = P("x1*y1 + x2*y2 + 3*x1*x2*y1", V);
  const VarSet Y{0, 1}, Z{2, 3};
  CHECK(rank_over_function_field(f, Y, Z).rank == rank_exact(pd_matrix(f, Y, Z)));
  CHECK(rank_over_function_field(P("0", V), Y, Z).rank == 0);
}

TEST_CASE("function-field rank never exceeds the symbolic rank") {
  Rng rng(404);
  const auto V = oracle::names("v", 7);  // v1..v4 split, v5..v7 play T
  const VarSet Y{0, 1}, Z{2, 3};
  for (int rep = 0; rep < 40; ++rep) {
    const SparsePoly g = multilinearize(oracle::random_poly(rng, Q, V, 7, 2 + uniform_below(rng, 10), 1));
    const std::size_t sym = rank_symbolic_function_field(g, Y, Z);
    const FunctionFieldRank r = rank_over_function_field(g, Y, Z, 3, kDefaultRankPrime, rep);
    CHECK(r.rank <= sym);
  }
}

TEST_CASE("dense function-field rank matches the sparse path") {
  const Instance inst = gen_quadratic_subset_sum(2, Q);
  const SparsePoly g = boolean_inverse(inst.f).g;
  const Field Fp = Field::prime(kDefaultRankPrime);
  const SparsePoly gp = boolean_inverse(gen_quadratic_subset_sum(2, Fp).f).g;
  const auto xs = g.vars()->with_prefix("x");
  const VarSet Y = VarSet::from_mask(0b0110, xs);
  const VarSet Z = VarSet::from_ids(xs) - Y;
  const CubeTable t = CubeTable::coefficients_of(gp, cube_universe(gp));
  CHECK(rank_over_function_field_dense(t, Y, Z, 3, 1).rank == 4);
}

TEST_CASE("rank algorithms agree with each other and the oracle") {
  Rng rng(77);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t r = 1 + uniform_below(rng, 8), c = 1 + uniform_below(rng, 8);
    // low-rank products make rank deficiency common
    const std::size_t k = 1 + uniform_below(rng, std::min(r, c));
    std::vector<std::vector<long>> a(r, std::vector<long>(k)), b(k, std::vector<long>(c));
    for (auto& row : a) for (auto& v : row) v = static_cast<long>(uniform_below(rng, 21)) - 10;
    for (auto& row : b) for (auto& v : row) v = static_cast<long>(uniform_below(rng, 21)) - 10;
    std::vector<std::vector<mpz_class>> z(r, std::vector<mpz_class>(c, 0));
    std::vector<std::vector<mpq_class>> q(r, std::vector<mpq_class>(c, 0));
    std::vector<std::vector<std::uint64_t>> m(r, std::vector<std::uint64_t>(c, 0));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        long s = 0;
        for (std::size_t l = 0; l < k; ++l) s += a[i][l] * b[l][j];
        z[i][j] = s;
        q[i][j] = s;
        const long p = static_cast<long>(kDefaultRankPrime);
        m[i][j] = static_cast<std::uint64_t>(((s % p) + p) % p);
      }
    }
    const std::size_t want = oracle::rank_q(q);
    CHECK(rank_bareiss(z) == want);
    CHECK(rank_rational(q) == want);
    CHECK(rank_mod_p(m, kDefaultRankPrime) == want);
  }
}

TEST_CASE("pd rank matches the dense oracle; subadditivity") {
  Rng rng(5);
  const auto V = oracle::names("v", 8);
  const std::vector<VarId> y{0, 1, 2, 3}, z{4, 5, 6, 7};
  const VarSet Y = VarSet::from_ids(y), Z = VarSet::from_ids(z);
  for (int rep = 0; rep < 60; ++rep) {
    const SparsePoly f = random_bipartite(rng, V, 8);
    const SparsePoly g = random_bipartite(rng, V, 8);
    const std::size_t rf = rank_exact(pd_matrix(f, Y, Z));
    const std::size_t rg = rank_exact(pd_matrix(g, Y, Z));
    CHECK(rf == pd_rank_oracle(f, y, z));
    CHECK(rank_exact(pd_matrix(f + g, Y, Z)) <= rf + rg);
  }
}

TEST_CASE("evaluation dimension examples") {
  const VarTablePtr V = VarTable::make({"x1", "x2", "y1", "y2"});
  const VarSet X{0, 1}, Y{2, 3};
  const std::vector<Scalar> S{Q.zero(), Q.one()};
  // substitutions give {0, x1, x2, x1 + x2}, which span a plane
  CHECK(eval_dim_lower_bound(P("x1*y1 + x2*y2", V), X, Y, S) == 2);
  CHECK(eval_dim_lower_bound(P("x1*x2 + 3", V), X, Y, S) == 1);
  CHECK(eval_dim_lower_bound(P("0", V), X, Y, S) == 0);
  CHECK(eval_dim_lower_bound(P("x1*y1 + x2*y2", V), X, Y, S, 1, 3) <= 1);
}

TEST_CASE("evaluation dimension is bounded by the pd rank") {
  Rng rng(12);
  const std::vector<Scalar> S{Q.zero(), Q.one()};
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t nx = 1 + uniform_below(rng, 5), ny = 1 + uniform_below(rng, 5);
    const auto V = oracle::names("v", nx + ny);
    std::vector<VarId> x, y;
    for (VarId i = 0; i < nx; ++i) x.push_back(i);
    for (VarId i = 0; i < ny; ++i) y.push_back(static_cast<VarId>(nx + i));
    const SparsePoly f = random_bipartite(rng, V, nx + ny);
    const VarSet X = VarSet::from_ids(x), Y = VarSet::from_ids(y);
    const std::size_t e = eval_dim_lower_bound(f, X, Y, S);
    CHECK(e == eval_dim_oracle(f, x, y));
    CHECK(e <= rank_exact(pd_matrix(f, X, Y)));
    // more samples never lose dimension
    CHECK(eval_dim_lower_bound(f, X, Y, S, 2, rep) <= e);
  }
}

TEST_CASE("balanced partition sampler") {
  const std::vector<VarId> four{0, 1, 2, 3};
  const Bipartition a = random_balanced_partition(four, 9);
  const Bipartition b = random_balanced_partition(four, 9);
  CHECK(a == b);
  CHECK(a.first.size() == 2);
  CHECK(a.second.size() == 2);
  CHECK((a.first | a.second) == VarSet::from_ids(four));
  CHECK_THROWS_AS(random_balanced_partition(std::vector<VarId>{0, 1, 2}, 1), DomainError);

  Rng rng(2718);
  const int N = 10000;
  std::vector<int> hits(8, 0);
  const std::vector<VarId> eight{0, 1, 2, 3, 4, 5, 6, 7};
  for (int i = 0; i < N; ++i) {
    const Bipartition p = random_balanced_partition(eight, rng);
    for (VarId v : eight) hits[v] += p.first.contains(v);
  }
  for (int h : hits) CHECK(std::abs(h / double(N) - 0.5) < 0.02);

  int left = 0;
  for (int i = 0; i < N; ++i) left += random_balanced_partition(std::vector<VarId>{0, 1}, rng).first.contains(0);
  CHECK(std::abs(left / double(N) - 0.5) < 0.02);
}

TEST_CASE("unconditioned sampler hits balance at the binomial rate") {
  Rng rng(3);
  const int N = 20000, n = 10;
  std::vector<VarId> vs;
  for (VarId i = 0; i < n; ++i) vs.push_back(i);
  int balanced = 0;
  for (int i = 0; i < N; ++i) balanced += random_partition(vs, rng).first.size() == n / 2;
  const double p = 252.0 / 1024.0;
  CHECK(std::abs(balanced / double(N) - p) < 3 * std::sqrt(p * (1 - p) / N));
}
