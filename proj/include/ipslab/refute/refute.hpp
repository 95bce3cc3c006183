#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipslab/algebra/poly.hpp"
#include "ipslab/io/json.hpp"

namespace ipslab {

/// P(X, y, z) = g y + sum_j h_j z_j, a refutation of f when
/// g f + sum_j h_j (x_j^2 - x_j) = 1. h is indexed by variable id of f's table;
/// missing entries count as zero.
struct LinRefutation {
  SparsePoly f;
  SparsePoly g;
  std::vector<SparsePoly> h;

  const Field& field() const { return f.field(); }
  /// g f + sum_j h_j (x_j^2 - x_j)
  SparsePoly combination() const;
};

struct ExactVerdict {
  bool ok = false;
  SparsePoly residual;  // combination() - 1
};

ExactVerdict verify_exact(const LinRefutation& r);

struct RandomizedVerdict {
  bool ok = false;
  unsigned trials = 0;
  std::uint64_t degree_bound = 0;
  std::string field;
  std::optional<unsigned> failed_trial;
};

/// Evaluates the identity at uniform points over F_prime (rational
/// certificates are reduced mod prime; finite-field certificates use their own
/// field). DomainError when the field is not larger than the degree bound.
RandomizedVerdict verify_randomized(const LinRefutation& r, unsigned trials, std::uint64_t prime = 2147483659ULL,
                                    std::uint64_t seed = 0);

/// -i! / prod_{j=0}^{i} (beta - j); DomainError when the product vanishes.
mpq_class subset_sum_coefficient(unsigned i, const mpq_class& beta);

/// Certificate for sum x_i - beta over Q with g = sum_i c_i e_{n,i}. The layer
/// coefficients are checked against the cube inverse before returning.
LinRefutation build_subset_sum_refutation(std::uint64_t n, const mpq_class& beta);

struct LiftResult {
  LinRefutation cert;
  std::size_t s = 0;             // number of z variables, coefficients counted with multiplicity
  mpq_class beta;                // of the lifted subset-sum axiom sum z - beta
  std::vector<Monomial> images;  // z_k -> images[k]
};

/// f = sum_i c_i m_i + c0 over Q with positive integer c_i: every m_i is
/// replaced by c_i fresh z variables, the subset-sum certificate for
/// sum z - (-c0) is built, the monomials are substituted back and the Boolean
/// witnesses are recovered by division. Other shapes raise DomainError.
LiftResult lift_sparse_refutation(const SparsePoly& f);

struct FunctionalCheckReport {
  bool verified = false;       // the certificate identity (true when checking a bare g)
  bool multilinear = false;
  bool cube_agreement = false;  // g(b) f(b) = 1 for every cube point b
  std::uint64_t cube_points = 0;
  std::optional<std::string> first_disagreement;
  bool coefficientwise_equal = false;  // g == canonical inverse
  SparsePoly g;
  SparsePoly canonical;

  Json to_json() const;
};

FunctionalCheckReport functional_check_mult_ips(const LinRefutation& r);
/// Same checks for a candidate g = P(X, 1, 0).
FunctionalCheckReport functional_check_mult_ips(const SparsePoly& g, const SparsePoly& f);

struct ElemSymStructure {
  std::uint64_t n = 0, d = 0;
  std::vector<Scalar> alphas;  // alpha_0 .. alpha_n; alpha_0 is beta'
  Scalar beta_prime;
  bool symmetric = false;
  bool zero_pattern = false;     // alpha_i = 0 for 1 <= i < d
  bool nonzero_pattern = false;  // alpha_i != 0 for d <= i <= n
  bool beta_prime_nonzero = false;
  bool ok() const { return symmetric && zero_pattern && nonzero_pattern && beta_prime_nonzero; }
};

/// Inverse of e_{n,d} - beta over Q projected onto the elementary symmetric basis.
ElemSymStructure elem_sym_inverse_structure(std::uint64_t n, std::uint64_t d, const mpq_class& beta);

/// {"axiom": ..., "g": ..., "h": [...], "field": ...}; h aligned with the axiom's variables.
Json certificate_to_json(const LinRefutation& r);
LinRefutation certificate_from_json(const Json& j);

}  // namespace ipslab
