#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "pph/errors.hpp"

namespace pph {

/// The coefficient ring A. Three families: Z, Z[1/l] (l prime), Z[sqrt 2].
class BaseRing {
 public:
  enum class Kind { Integers, LocalizedIntegers, QuadraticSqrt2 };

  static BaseRing integers() { return BaseRing(Kind::Integers, 0); }
  static BaseRing localized(unsigned long ell);
  static BaseRing sqrt2() { return BaseRing(Kind::QuadraticSqrt2, 0); }

  Kind kind() const { return kind_; }
  unsigned long ell() const { return ell_; }
  bool dense() const { return kind_ != Kind::Integers; }

  bool operator==(const BaseRing& o) const {
    return kind_ == o.kind_ && ell_ == o.ell_;
  }
  bool operator!=(const BaseRing& o) const { return !(*this == o); }

  std::string name() const;

 private:
  BaseRing(Kind k, unsigned long ell) : kind_(k), ell_(ell) {}
  Kind kind_;
  unsigned long ell_;
};

/// Exact element of the ring A, kept in canonical form.
///
/// Payload interpretation by ring kind:
///   Integers:          a
///   LocalizedIntegers: a / l^k with l not dividing a (unless a = 0, k = 0)
///   QuadraticSqrt2:    a + b * sqrt(2)
class RingElem {
 public:
  RingElem(BaseRing ring, mpz_class n);            // integer-valued element
  static RingElem localized(BaseRing ring, mpz_class num, unsigned long k);
  static RingElem sqrt2(BaseRing ring, mpz_class u, mpz_class v);
  static RingElem zero(BaseRing ring) { return RingElem(ring, 0); }
  static RingElem one(BaseRing ring) { return RingElem(ring, 1); }

  const BaseRing& ring() const { return ring_; }
  const mpz_class& a() const { return a_; }
  const mpz_class& b() const { return b_; }
  unsigned long k() const { return k_; }

  RingElem operator+(const RingElem& o) const;
  RingElem operator-(const RingElem& o) const;
  RingElem operator*(const RingElem& o) const;
  RingElem operator-() const;

  /// Sign of the real embedding: -1, 0, +1. Exact for u + v*sqrt(2).
  int sign() const;
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool operator==(const RingElem& o) const;
  bool operator!=(const RingElem& o) const { return !(*this == o); }

  /// Real embedding as (rational part, sqrt2 part); second is 0 for
  /// the rational rings.
  std::pair<mpq_class, mpq_class> field_pair() const;

  std::string str() const;

 private:
  RingElem(BaseRing ring, mpz_class a, mpz_class b, unsigned long k)
      : ring_(ring), a_(std::move(a)), b_(std::move(b)), k_(k) {}
  void canonicalize();
  static void check_same(const RingElem& x, const RingElem& y);

  BaseRing ring_;
  mpz_class a_;
  mpz_class b_;       // sqrt2 coefficient; 0 otherwise
  unsigned long k_;   // localization exponent; 0 otherwise
};

/// Sign of u + v*sqrt(2), decided by comparing u^2 against 2 v^2.
int sqrt2_sign(const mpz_class& u, const mpz_class& v);
int sqrt2_sign(const mpq_class& u, const mpq_class& v);

}  // namespace pph
