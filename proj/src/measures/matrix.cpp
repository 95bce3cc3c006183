#include "ipslab/measures/matrix.hpp"

#include <algorithm>
#include <map>

#include "ipslab/algebra/modular.hpp"
#include "ipslab/errors.hpp"

namespace ipslab {

std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const std::uint64_t inv = mod::inv(a[rank][c], p);
    for (std::size_t j = c; j < cols; ++j) a[rank][j] = mod::mul(a[rank][j], inv, p);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const std::uint64_t factor = a[r][c];
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        if (a[rank][j]) a[r][j] = mod::sub(a[r][j], mod::mul(factor, a[rank][j], p), p);
      }
    }
    ++rank;
  }
  return rank;
}

std::size_t rank_bareiss(std::vector<std::vector<mpz_class>> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && sgn(a[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[r][j] = a[rank][c] * a[r][j] - a[r][c] * a[rank][j];
        mpz_divexact(a[r][j].get_mpz_t(), a[r][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

std::size_t rank_rational(const std::vector<std::vector<mpq_class>>& rows) {
  std::vector<std::vector<mpz_class>> ints;
  ints.reserve(rows.size());
  for (const auto& row : rows) {
    mpz_class l = 1;
    for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> r;
    r.reserve(row.size());
    for (const auto& q : row) r.emplace_back(q.get_num() * (l / q.get_den()));
    ints.push_back(std::move(r));
  }
  return rank_bareiss(std::move(ints));
}

std::size_t rank_scalar(const Field& F, const std::vector<std::vector<Scalar>>& rows) {
  if (rows.empty() || rows[0].empty()) return 0;
  switch (F.kind()) {
    case Field::Kind::rationals: {
      std::vector<std::vector<mpq_class>> q;
      for (const auto& r : rows) {
        std::vector<mpq_class> row;
        for (const auto& s : r) row.push_back(std::get<mpq_class>(s));
        q.push_back(std::move(row));
      }
      return rank_rational(q);
    }
    case Field::Kind::prime: {
      std::vector<std::vector<std::uint64_t>> m;
      for (const auto& r : rows) {
        std::vector<std::uint64_t> row;
        for (const auto& s : r) row.push_back(std::get<std::uint64_t>(s));
        m.push_back(std::move(row));
      }
      return rank_mod_p(std::move(m), F.characteristic());
    }
    case Field::Kind::extension: {
      auto a = rows;
      const std::size_t nr = a.size(), nc = a[0].size();
      std::size_t rank = 0;
      for (std::size_t c = 0; c < nc && rank < nr; ++c) {
        std::size_t piv = rank;
        while (piv < nr && F.is_zero(a[piv][c])) ++piv;
        if (piv == nr) continue;
        std::swap(a[piv], a[rank]);
        const Scalar inv = F.inv(a[rank][c]);
        for (std::size_t j = c; j < nc; ++j) a[rank][j] = F.mul(a[rank][j], inv);
        for (std::size_t r = rank + 1; r < nr; ++r) {
          if (F.is_zero(a[r][c])) continue;
          const Scalar factor = a[r][c];
          for (std::size_t j = c; j < nc; ++j) a[r][j] = F.sub(a[r][j], F.mul(factor, a[rank][j]));
        }
        ++rank;
      }
      return rank;
    }
  }
  return 0;
}

namespace {

std::vector<std::vector<mpz_class>> exponent_matrix(const std::vector<Monomial>& ms, const std::vector<VarId>& cols) {
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& m : ms) {
    std::vector<mpz_class> r;
    for (VarId v : cols) r.emplace_back(static_cast<unsigned long>(m.exponent(v)));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<VarId> all_vars(const std::vector<Monomial>& ms) {
  VarSet s;
  for (const auto& m : ms) s = s | m.support();
  return s.ids();
}

}  // namespace

std::size_t exponent_rank(const std::vector<Monomial>& ms) {
  if (ms.empty()) return 0;
  const auto cols = all_vars(ms);
  if (cols.empty()) return 0;
  return rank_bareiss(exponent_matrix(ms, cols));
}

std::vector<std::size_t> greedy_independent_subset(const std::vector<Monomial>& ms) {
  std::vector<std::size_t> chosen;
  std::vector<Monomial> basis;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    basis.push_back(ms[i]);
    if (exponent_rank(basis) == basis.size()) {
      chosen.push_back(i);
    } else {
      basis.pop_back();
    }
  }
  return chosen;
}

PDMatrix pd_matrix(const SparsePoly& f, const VarSet& y, const VarSet& z, std::size_t limit) {
  if (y.intersects(z)) throw DomainError("Y and Z must be disjoint");
  if (!f.support().subset_of(y | z)) throw DomainError("Y and Z must cover the variables of f");
  PDMatrix m{f.field(), {}, {}, {}, 0, 0, false};
  const std::size_t ny = y.size(), nz = z.size();
  m.logical_rows = ny < 64 ? std::uint64_t{1} << ny : ~std::uint64_t{0};
  m.logical_cols = nz < 64 ? std::uint64_t{1} << nz : ~std::uint64_t{0};
  std::map<Monomial, std::size_t> row_index, col_index;
  for (const auto& t : f.terms()) {
    row_index.emplace(t.first.restrict_to(y), 0);
    col_index.emplace(t.first.restrict_to(z), 0);
  }
  if (row_index.size() > limit || col_index.size() > limit) {
    throw GuardError("partial derivative matrix would materialize " + std::to_string(row_index.size()) + " x " +
                     std::to_string(col_index.size()) + " entries (limit " + std::to_string(limit) + " per side)");
  }
  for (auto& [mono, i] : row_index) {
    i = m.rows.size();
    m.rows.push_back(mono);
  }
  for (auto& [mono, i] : col_index) {
    i = m.cols.size();
    m.cols.push_back(mono);
  }
  m.entries.assign(m.rows.size(), std::vector<Scalar>(m.cols.size(), f.field().zero()));
  for (const auto& [mono, c] : f.terms()) {
    m.entries[row_index.at(mono.restrict_to(y))][col_index.at(mono.restrict_to(z))] = c;
  }
  m.pruned = m.rows.size() < m.logical_rows || m.cols.size() < m.logical_cols;
  return m;
}

std::size_t rank_exact(const PDMatrix& m) {
  if (m.rows.empty() || m.cols.empty()) return 0;
  return rank_scalar(m.field, m.entries);
}

}  // namespace ipslab
