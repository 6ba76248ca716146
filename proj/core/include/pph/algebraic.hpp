#pragma once

#include <gmpxx.h>

#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "pph/poly.hpp"
#include "pph/ring.hpp"

namespace pph {

/// Exact real algebraic number: square-free primitive integer polynomial
/// plus an isolating interval with rational endpoints. Values are
/// immutable; the refined interval is an internal cache shared between
/// copies and protected by a lock.
class AlgebraicReal {
 public:
  enum class Branch { Plus, Minus };

  static AlgebraicReal from_rational(const mpq_class& r);
  static AlgebraicReal from_ring(const RingElem& x);
  /// Value u + v*sqrt(2).
  static AlgebraicReal from_field_pair(const mpq_class& u, const mpq_class& v);
  /// Root (-B +- sqrt(B^2 - 4AC)) / (2A) of A x^2 + B x + C, coefficients
  /// in the fraction field of a common ring.
  static AlgebraicReal quadratic_root(const RingElem& A, const RingElem& B,
                                      const RingElem& C, Branch branch);
  /// Validating constructor used by deserialization.
  static AlgebraicReal from_parts(ZPoly minpoly, mpq_class lo, mpq_class hi);

  const ZPoly& minpoly() const { return rep_->poly; }
  const mpq_class& lo() const { return rep_->lo; }
  const mpq_class& hi() const { return rep_->hi; }

  bool is_rational() const;
  mpq_class rational_value() const;  // requires is_rational()

  int sign() const;
  static int compare(const AlgebraicReal& x, const AlgebraicReal& y);

  bool operator==(const AlgebraicReal& o) const { return compare(*this, o) == 0; }
  bool operator!=(const AlgebraicReal& o) const { return compare(*this, o) != 0; }
  bool operator<(const AlgebraicReal& o) const { return compare(*this, o) < 0; }
  bool operator<=(const AlgebraicReal& o) const { return compare(*this, o) <= 0; }
  bool operator>(const AlgebraicReal& o) const { return compare(*this, o) > 0; }
  bool operator>=(const AlgebraicReal& o) const { return compare(*this, o) >= 0; }

  AlgebraicReal operator-() const;
  AlgebraicReal operator+(const AlgebraicReal& o) const;
  AlgebraicReal operator-(const AlgebraicReal& o) const;
  AlgebraicReal operator*(const AlgebraicReal& o) const;
  AlgebraicReal operator/(const AlgebraicReal& o) const;
  AlgebraicReal inverse() const;

  /// Dyadic d with |d - x| <= 2^-k.
  mpq_class approx(unsigned k) const;
  /// Isolating interval refined to width <= 2^-k.
  std::pair<mpq_class, mpq_class> refined(unsigned k) const;

  double to_double() const;
  std::string str() const;

 private:
  struct Rep {
    ZPoly poly;
    mpq_class lo, hi;          // as constructed (serialized form)
    mutable mpq_class rlo, rhi;  // refinement cache
    mutable std::mutex mtx;
  };
  explicit AlgebraicReal(std::shared_ptr<const Rep> rep)
      : rep_(std::move(rep)) {}
  static AlgebraicReal make_isolated(
      const QPoly& raw,
      const std::function<std::pair<mpq_class, mpq_class>(unsigned)>& box,
      bool try_reduce);

  std::shared_ptr<const Rep> rep_;

  friend AlgebraicReal mobius_image(const AlgebraicReal& x,
                                    const std::pair<mpq_class, mpq_class>& a,
                                    const std::pair<mpq_class, mpq_class>& b,
                                    const std::pair<mpq_class, mpq_class>& c,
                                    const std::pair<mpq_class, mpq_class>& d);
};

/// Image (a x + b) / (c x + d) of x, with matrix entries given as
/// u + v*sqrt(2) field pairs. The denominator must not vanish at x.
AlgebraicReal mobius_image(const AlgebraicReal& x,
                           const std::pair<mpq_class, mpq_class>& a,
                           const std::pair<mpq_class, mpq_class>& b,
                           const std::pair<mpq_class, mpq_class>& c,
                           const std::pair<mpq_class, mpq_class>& d);

/// Dyadic interval of width <= 2^-k around sqrt(q); q >= 0.
std::pair<mpq_class, mpq_class> sqrt_interval(const mpq_class& q, unsigned k);

}  // namespace pph
