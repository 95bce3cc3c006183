#include "ipslab/algebra/field.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ipslab/algebra/modular.hpp"
#include "ipslab/errors.hpp"

namespace ipslab {

namespace {

using UPoly = std::vector<std::uint64_t>;  // low-to-high over F_p

void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo m (m nonzero, any leading coefficient).
UPoly poly_rem(UPoly a, const UPoly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = mod::inv(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t c = mod::mul(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t j = 0; j <= dm; ++j) {
      a[shift + j] = mod::sub(a[shift + j], mod::mul(c, m[j], p), p);
    }
    trim(a);
  }
  return a;
}

UPoly poly_mul(const UPoly& a, const UPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = mod::add(r[i + j], mod::mul(a[i], b[j], p), p);
    }
  }
  trim(r);
  return r;
}

UPoly poly_gcd(UPoly a, UPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

UPoly poly_powmod(UPoly base, std::uint64_t e, const UPoly& m, std::uint64_t p) {
  UPoly result{1};
  base = poly_rem(std::move(base), m, p);
  while (e) {
    if (e & 1) result = poly_rem(poly_mul(result, base, p), m, p);
    e >>= 1;
    if (e) base = poly_rem(poly_mul(base, base, p), m, p);
  }
  return result;
}

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, unsigned s) {
  std::uint64_t x = mod::pow(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mod::mul(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
  }
  return v;
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) {
    throw DomainError("cannot parse rational from '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw DivisionByZero("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

bool is_irreducible(std::uint64_t p, std::span<const std::uint64_t> monic) {
  UPoly f(monic.begin(), monic.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t k = f.size() - 1;
  if (k == 1) return true;
  if (f[0] == 0) return false;
  const UPoly z{0, 1};
  UPoly h = z;
  for (std::size_t i = 1; i <= k / 2; ++i) {
    h = poly_powmod(h, p, f, p);
    UPoly diff = h;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = mod::sub(diff[1], 1, p);
    trim(diff);
    if (diff.empty()) return false;
    if (poly_gcd(f, diff, p).size() > 1) return false;
  }
  return true;
}

std::vector<std::uint64_t> first_irreducible(std::uint64_t p, unsigned k) {
  if (k == 0) throw DomainError("extension degree must be positive");
  std::vector<std::uint64_t> coeffs(k, 0);  // c0 .. c_{k-1}; c_{k-1} varies fastest
  for (;;) {
    if (coeffs[0] != 0 || k == 1) {
      std::vector<std::uint64_t> f(coeffs);
      f.push_back(1);
      if (is_irreducible(p, f)) return f;
    }
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++coeffs[pos] < p) break;
      coeffs[pos] = 0;
      if (pos == 0) throw InternalError("no irreducible polynomial found");
    }
  }
}

struct Field::Data {
  Kind kind = Kind::rationals;
  std::uint64_t p = 0;
  unsigned k = 1;
  std::vector<std::uint64_t> modulus;  // extension only, monic, low-to-high
};

Field::Field() : data_(std::make_shared<const Data>()) {}
Field::Field(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

Field Field::rationals() { return Field(); }

Field Field::prime(std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("Fp requires a prime modulus, got " + std::to_string(p));
  if (p >= (1ULL << 63)) throw DomainError("prime must be below 2^63");
  auto d = std::make_shared<Data>();
  d->kind = Kind::prime;
  d->p = p;
  return Field(std::move(d));
}

Field Field::extension(std::uint64_t p, unsigned k) {
  if (!is_prime(p)) throw DomainError("Fpk requires a prime characteristic, got " + std::to_string(p));
  if (k < 2) throw DomainError("Fpk requires k >= 2; use Fp:" + std::to_string(p) + " for k = 1");
  return extension(p, first_irreducible(p, k));
}

Field Field::extension(std::uint64_t p, std::vector<std::uint64_t> monic_modulus) {
  if (!is_prime(p)) throw DomainError("Fpk requires a prime characteristic, got " + std::to_string(p));
  for (auto& c : monic_modulus) c %= p;
  if (monic_modulus.size() < 3 || monic_modulus.back() != 1) {
    throw DomainError("extension modulus must be monic of degree >= 2");
  }
  if (!is_irreducible(p, monic_modulus)) throw DomainError("extension modulus is reducible over F_p");
  auto d = std::make_shared<Data>();
  d->kind = Kind::extension;
  d->p = p;
  d->k = static_cast<unsigned>(monic_modulus.size() - 1);
  d->modulus = std::move(monic_modulus);
  return Field(std::move(d));
}

Field Field::parse(std::string_view spec) {
  if (spec == "Q" || spec == "QQ") return rationals();
  if (spec.rfind("Fp:", 0) == 0) return prime(parse_u64(spec.substr(3), "prime"));
  if (spec.rfind("Fpk:", 0) == 0) {
    std::string_view rest = spec.substr(4);
    std::optional<std::uint64_t> p;
    std::optional<unsigned> k;
    std::optional<std::vector<std::uint64_t>> modulus;
    while (!rest.empty()) {
      std::size_t end = rest.find(',');
      if (rest.rfind("mod=[", 0) == 0) end = rest.find(']') + 1;
      std::string_view item = rest.substr(0, end);
      rest = end >= rest.size() ? std::string_view{} : rest.substr(end + (end < rest.size() && rest[end] == ',' ? 1 : 0));
      if (item.rfind("p=", 0) == 0) {
        p = parse_u64(item.substr(2), "p");
      } else if (item.rfind("k=", 0) == 0) {
        k = static_cast<unsigned>(parse_u64(item.substr(2), "k"));
      } else if (item.rfind("mod=[", 0) == 0 && item.back() == ']') {
        std::vector<std::uint64_t> m;
        std::string_view body = item.substr(5, item.size() - 6);
        while (!body.empty()) {
          const std::size_t c = body.find(',');
          m.push_back(parse_u64(body.substr(0, c), "modulus coefficient"));
          body = c == std::string_view::npos ? std::string_view{} : body.substr(c + 1);
        }
        modulus = std::move(m);
      } else {
        throw DomainError("unrecognized field option '" + std::string(item) + "'");
      }
    }
    if (!p || (!k && !modulus)) throw DomainError("Fpk spec needs p= and k=");
    if (modulus) {
      Field f = extension(*p, *modulus);
      if (k && *k != f.degree()) throw DomainError("modulus degree disagrees with k");
      return f;
    }
    return extension(*p, *k);
  }
  throw DomainError("unknown field spec '" + std::string(spec) + "' (expected Q, Fp:<p>, Fpk:p=<p>,k=<k>)");
}

Field::Kind Field::kind() const { return data_->kind; }
std::uint64_t Field::characteristic() const { return data_->p; }
unsigned Field::degree() const { return data_->k; }
const std::vector<std::uint64_t>& Field::modulus() const { return data_->modulus; }

std::optional<std::uint64_t> Field::order() const {
  if (!is_finite()) return std::nullopt;
  unsigned __int128 q = 1;
  for (unsigned i = 0; i < degree(); ++i) {
    q *= data_->p;
    if (q > ~std::uint64_t{0}) return std::nullopt;
  }
  return static_cast<std::uint64_t>(q);
}

std::string Field::spec() const {
  switch (kind()) {
    case Kind::rationals:
      return "Q";
    case Kind::prime:
      return "Fp:" + std::to_string(data_->p);
    case Kind::extension:
      return "Fpk:p=" + std::to_string(data_->p) + ",k=" + std::to_string(data_->k);
  }
  return {};
}

std::string Field::describe() const {
  if (kind() != Kind::extension) return spec();
  std::string s = spec() + ",mod=[";
  for (std::size_t i = 0; i < data_->modulus.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(data_->modulus[i]);
  }
  return s + "]";
}

bool Field::operator==(const Field& other) const {
  if (data_ == other.data_) return true;
  return data_->kind == other.data_->kind && data_->p == other.data_->p && data_->k == other.data_->k &&
         data_->modulus == other.data_->modulus;
}

Scalar Field::zero() const {
  switch (kind()) {
    case Kind::rationals:
      return mpq_class(0);
    case Kind::prime:
      return std::uint64_t{0};
    case Kind::extension:
      return ExtCoeffs(degree(), 0);
  }
  return {};
}

Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(std::int64_t v) const {
  if (kind() == Kind::rationals) return mpq_class(static_cast<long>(v));
  const std::uint64_t p = data_->p;
  std::uint64_t r = v >= 0 ? static_cast<std::uint64_t>(v) % p
                           : (p - (static_cast<std::uint64_t>(-(v + 1)) + 1) % p) % p;
  if (kind() == Kind::prime) return r;
  ExtCoeffs c(degree(), 0);
  c[0] = r;
  return c;
}

Scalar Field::from_rational(const mpq_class& q) const {
  if (kind() == Kind::rationals) return q;
  const std::uint64_t p = data_->p;
  auto reduce = [p](const mpz_class& z) {
    mpz_class r = z % mpz_class(static_cast<unsigned long>(p));
    if (r < 0) r += static_cast<unsigned long>(p);
    return static_cast<std::uint64_t>(r.get_ui());
  };
  static_assert(sizeof(unsigned long) == 8);
  const std::uint64_t num = reduce(q.get_num());
  const std::uint64_t den = reduce(q.get_den());
  if (den == 0) {
    throw DivisionByZero("denominator of " + q.get_str() + " vanishes modulo " + std::to_string(p));
  }
  const std::uint64_t r = mod::mul(num, mod::inv(den, p), p);
  if (kind() == Kind::prime) return r;
  ExtCoeffs c(degree(), 0);
  c[0] = r;
  return c;
}

Scalar Field::convert(const Field& src, const Scalar& v) const {
  if (src == *this) return v;
  if (src.kind() == Kind::rationals) return from_rational(std::get<mpq_class>(v));
  if (src.kind() == Kind::prime && kind() == Kind::extension && src.characteristic() == characteristic()) {
    ExtCoeffs c(degree(), 0);
    c[0] = std::get<std::uint64_t>(v);
    return c;
  }
  throw FieldMismatch("no natural map from " + src.spec() + " to " + spec());
}

Scalar Field::generator() const {
  if (kind() != Kind::extension) throw DomainError("generator() requires an extension field");
  ExtCoeffs c(degree(), 0);
  c[1] = 1;
  return c;
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  switch (kind()) {
    case Kind::rationals:
      return mpq_class(std::get<mpq_class>(a) + std::get<mpq_class>(b));
    case Kind::prime:
      return mod::add(std::get<std::uint64_t>(a), std::get<std::uint64_t>(b), data_->p);
    case Kind::extension: {
      const auto& x = std::get<ExtCoeffs>(a);
      const auto& y = std::get<ExtCoeffs>(b);
      ExtCoeffs r(degree());
      for (unsigned i = 0; i < degree(); ++i) r[i] = mod::add(x[i], y[i], data_->p);
      return r;
    }
  }
  return {};
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  switch (kind()) {
    case Kind::rationals:
      return mpq_class(std::get<mpq_class>(a) - std::get<mpq_class>(b));
    case Kind::prime:
      return mod::sub(std::get<std::uint64_t>(a), std::get<std::uint64_t>(b), data_->p);
    case Kind::extension: {
      const auto& x = std::get<ExtCoeffs>(a);
      const auto& y = std::get<ExtCoeffs>(b);
      ExtCoeffs r(degree());
      for (unsigned i = 0; i < degree(); ++i) r[i] = mod::sub(x[i], y[i], data_->p);
      return r;
    }
  }
  return {};
}

Scalar Field::neg(const Scalar& a) const { return sub(zero(), a); }

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  switch (kind()) {
    case Kind::rationals:
      return mpq_class(std::get<mpq_class>(a) * std::get<mpq_class>(b));
    case Kind::prime:
      return mod::mul(std::get<std::uint64_t>(a), std::get<std::uint64_t>(b), data_->p);
    case Kind::extension: {
      const auto& x = std::get<ExtCoeffs>(a);
      const auto& y = std::get<ExtCoeffs>(b);
      const unsigned k = degree();
      const std::uint64_t p = data_->p;
      boost::container::small_vector<std::uint64_t, 16> prod(2 * k - 1, 0);
      for (unsigned i = 0; i < k; ++i) {
        if (x[i] == 0) continue;
        for (unsigned j = 0; j < k; ++j) prod[i + j] = mod::add(prod[i + j], mod::mul(x[i], y[j], p), p);
      }
      const auto& m = data_->modulus;
      for (unsigned i = 2 * k - 2; i >= k; --i) {
        const std::uint64_t c = prod[i];
        if (c == 0) continue;
        for (unsigned j = 0; j < k; ++j) prod[i - k + j] = mod::sub(prod[i - k + j], mod::mul(c, m[j], p), p);
      }
      return ExtCoeffs(prod.begin(), prod.begin() + k);
    }
  }
  return {};
}

Scalar Field::inv(const Scalar& a) const {
  if (is_zero(a)) throw DivisionByZero("inverse of zero in " + spec());
  switch (kind()) {
    case Kind::rationals: {
      mpq_class r;
      mpq_inv(r.get_mpq_t(), std::get<mpq_class>(a).get_mpq_t());
      return r;
    }
    case Kind::prime:
      return mod::inv(std::get<std::uint64_t>(a), data_->p);
    case Kind::extension: {
      // extended Euclid: track s with s * a == r (mod modulus)
      const std::uint64_t p = data_->p;
      const auto& x = std::get<ExtCoeffs>(a);
      UPoly r0(data_->modulus), r1(x.begin(), x.end());
      trim(r1);
      UPoly s0, s1{1};
      while (r1.size() > 1) {
        // one long-division step sequence: r0 = q r1 + rem
        UPoly q(r0.size() - r1.size() + 1, 0);
        UPoly rem = r0;
        const std::uint64_t lead_inv = mod::inv(r1.back(), p);
        while (rem.size() >= r1.size()) {
          const std::uint64_t c = mod::mul(rem.back(), lead_inv, p);
          const std::size_t shift = rem.size() - r1.size();
          q[shift] = c;
          for (std::size_t j = 0; j < r1.size(); ++j) {
            rem[shift + j] = mod::sub(rem[shift + j], mod::mul(c, r1[j], p), p);
          }
          trim(rem);
        }
        UPoly qs = poly_mul(q, s1, p);
        UPoly s2(std::max(s0.size(), qs.size()), 0);
        for (std::size_t i = 0; i < s2.size(); ++i) {
          const std::uint64_t u = i < s0.size() ? s0[i] : 0;
          const std::uint64_t v = i < qs.size() ? qs[i] : 0;
          s2[i] = mod::sub(u, v, p);
        }
        trim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
      }
      // r1 is a nonzero constant
      const std::uint64_t c = mod::inv(r1[0], p);
      ExtCoeffs out(degree(), 0);
      for (std::size_t i = 0; i < s1.size() && i < degree(); ++i) out[i] = mod::mul(s1[i], c, p);
      return out;
    }
  }
  return {};
}

Scalar Field::div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

Scalar Field::pow(const Scalar& a, std::uint64_t e) const {
  Scalar result = one();
  Scalar base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

bool Field::is_zero(const Scalar& a) const {
  switch (kind()) {
    case Kind::rationals:
      return sgn(std::get<mpq_class>(a)) == 0;
    case Kind::prime:
      return std::get<std::uint64_t>(a) == 0;
    case Kind::extension: {
      const auto& x = std::get<ExtCoeffs>(a);
      return std::all_of(x.begin(), x.end(), [](std::uint64_t c) { return c == 0; });
    }
  }
  return false;
}

bool Field::is_one(const Scalar& a) const { return equal(a, one()); }

bool Field::equal(const Scalar& a, const Scalar& b) const {
  switch (kind()) {
    case Kind::rationals:
      return std::get<mpq_class>(a) == std::get<mpq_class>(b);
    case Kind::prime:
      return std::get<std::uint64_t>(a) == std::get<std::uint64_t>(b);
    case Kind::extension:
      return std::get<ExtCoeffs>(a) == std::get<ExtCoeffs>(b);
  }
  return false;
}

Scalar Field::frobenius(const Scalar& a) const {
  if (kind() != Kind::extension) return a;
  return pow(a, data_->p);
}

bool Field::in_subfield(const Scalar& a, unsigned d) const {
  if (d == 0 || degree() % d != 0) throw DomainError("subfield degree must divide the field degree");
  Scalar x = a;
  for (unsigned i = 0; i < d; ++i) x = frobenius(x);
  return equal(x, a);
}

Scalar Field::trace_to_subfield(const Scalar& a, unsigned d) const {
  if (d == 0 || degree() % d != 0) throw DomainError("subfield degree must divide the field degree");
  Scalar acc = zero();
  Scalar cur = a;
  for (unsigned i = 0; i < degree() / d; ++i) {
    acc = add(acc, cur);
    for (unsigned j = 0; j < d; ++j) cur = frobenius(cur);
  }
  return acc;
}

Scalar Field::random(Rng& rng, std::uint64_t int_bound) const {
  switch (kind()) {
    case Kind::rationals: {
      const std::uint64_t span = 2 * int_bound + 1;
      return mpq_class(static_cast<long>(uniform_below(rng, span)) - static_cast<long>(int_bound));
    }
    case Kind::prime:
      return uniform_below(rng, data_->p);
    case Kind::extension: {
      ExtCoeffs c(degree());
      for (auto& x : c) x = uniform_below(rng, data_->p);
      return c;
    }
  }
  return {};
}

std::string Field::format(const Scalar& a) const {
  switch (kind()) {
    case Kind::rationals:
      return std::get<mpq_class>(a).get_str();
    case Kind::prime:
      return std::to_string(std::get<std::uint64_t>(a));
    case Kind::extension: {
      const auto& x = std::get<ExtCoeffs>(a);
      std::string s = "[";
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(x[i]);
      }
      return s + "]";
    }
  }
  return {};
}

Scalar Field::parse_scalar(std::string_view text) const {
  if (kind() == Kind::extension && !text.empty() && text.front() == '[') {
    if (text.back() != ']') throw DomainError("unterminated extension element '" + std::string(text) + "'");
    ExtCoeffs c(degree(), 0);
    std::string_view body = text.substr(1, text.size() - 2);
    std::size_t i = 0;
    while (!body.empty()) {
      const std::size_t comma = body.find(',');
      if (i >= degree()) throw DomainError("too many coefficients in '" + std::string(text) + "'");
      c[i++] = std::get<std::uint64_t>(Field::prime(data_->p).from_rational(parse_rational(body.substr(0, comma))));
      body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    }
    return c;
  }
  return from_rational(parse_rational(text));
}

FieldElement::FieldElement(Field field, Scalar value) : field_(std::move(field)), value_(std::move(value)) {}

FieldElement FieldElement::from_int(const Field& f, std::int64_t v) { return {f, f.from_int(v)}; }

FieldElement FieldElement::parse(const Field& f, std::string_view text) { return {f, f.parse_scalar(text)}; }

void FieldElement::require_same(const FieldElement& o) const {
  if (!(field_ == o.field_)) throw FieldMismatch("operands from " + field_.spec() + " and " + o.field_.spec());
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same(o);
  return {field_, field_.add(value_, o.value_)};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same(o);
  return {field_, field_.sub(value_, o.value_)};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same(o);
  return {field_, field_.mul(value_, o.value_)};
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  require_same(o);
  return {field_, field_.div(value_, o.value_)};
}

FieldElement FieldElement::operator-() const { return {field_, field_.neg(value_)}; }

FieldElement FieldElement::inverse() const { return {field_, field_.inv(value_)}; }

bool FieldElement::operator==(const FieldElement& o) const {
  return field_ == o.field_ && field_.equal(value_, o.value_);
}

}  // namespace ipslab
