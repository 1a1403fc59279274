#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttperm {

using Scalar = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A claimed identity failed to hold on concrete data.
class TheoryCheckFailure : public Error {
 public:
  using Error::Error;
};

class BoundExceeded : public Error {
 public:
  using Error::Error;
};

class Ring {
 public:
  enum class Kind { Integers, Rationals, PrimeField };

  static Ring integers() { return Ring(Kind::Integers, 0); }
  static Ring rationals() { return Ring(Kind::Rationals, 0); }
  static Ring prime_field(int p);
  // "Z", "Q", "F<p>"
  static Ring parse(std::string_view text);

  Kind kind() const { return kind_; }
  int characteristic() const { return p_; }
  bool is_field() const { return kind_ != Kind::Integers; }
  bool is_integers() const { return kind_ == Kind::Integers; }
  std::string name() const;

  // Canonical representative: F_p values land in [0,p), Z values must be integral.
  Scalar normalize(const Scalar& x) const;
  bool is_unit(const Scalar& x) const;
  // True when n is invertible in the ring.
  bool inverts(long n) const;

  bool operator==(const Ring& o) const { return kind_ == o.kind_ && p_ == o.p_; }
  bool operator!=(const Ring& o) const { return !(*this == o); }

 private:
  Ring(Kind k, int p) : kind_(k), p_(p) {}
  Kind kind_;
  int p_;
};

bool is_prime(long n);
std::string to_string(const Scalar& x);

}  // namespace ttperm
