#include "ttperm/ring.hpp"

#include <charconv>

namespace ttperm {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring Ring::prime_field(int p) {
  if (!is_prime(p)) throw PreconditionError("F_p needs a prime, got " + std::to_string(p));
  return Ring(Kind::PrimeField, p);
}

Ring Ring::parse(std::string_view text) {
  if (text == "Z") return integers();
  if (text == "Q") return rationals();
  if (text.size() >= 2 && (text[0] == 'F' || text[0] == 'f')) {
    int p = 0;
    auto body = text.substr(1);
    if (!body.empty() && body[0] == '_') body = body.substr(1);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
    if (ec == std::errc() && ptr == body.data() + body.size()) return prime_field(p);
  }
  throw PreconditionError("unknown ring '" + std::string(text) + "' (expected Z, Q or F<p>)");
}

std::string Ring::name() const {
  switch (kind_) {
    case Kind::Integers: return "Z";
    case Kind::Rationals: return "Q";
    case Kind::PrimeField: return "F" + std::to_string(p_);
  }
  return "?";
}

Scalar Ring::normalize(const Scalar& x) const {
  switch (kind_) {
    case Kind::Rationals: return x;
    case Kind::Integers:
      if (x.get_den() != 1) throw PreconditionError("non-integral value " + x.get_str() + " over Z");
      return x;
    case Kind::PrimeField: {
      mpz_class p = p_;
      mpz_class num = x.get_num() % p;
      if (x.get_den() != 1) {
        mpz_class den = x.get_den() % p;
        if (den < 0) den += p;
        if (den == 0) throw PreconditionError("denominator divisible by p in " + x.get_str());
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
        num = (num * inv) % p;
      }
      if (num < 0) num += p;
      return Scalar(num);
    }
  }
  return x;
}

bool Ring::is_unit(const Scalar& x) const {
  Scalar y = normalize(x);
  if (is_field()) return y != 0;
  return y == 1 || y == -1;
}

bool Ring::inverts(long n) const {
  if (n == 0) return false;
  switch (kind_) {
    case Kind::Rationals: return true;
    case Kind::Integers: return n == 1 || n == -1;
    case Kind::PrimeField: return n % p_ != 0;
  }
  return false;
}

std::string to_string(const Scalar& x) { return x.get_str(); }

}  // namespace ttperm
