#pragma once

#include <optional>
#include <vector>

#include "pph/algebraic.hpp"
#include "pph/ring.hpp"

namespace pph {

/// Point of the projective line: Infinity or a finite algebraic value.
class ProjPoint {
 public:
  static ProjPoint infinity() { return ProjPoint(); }
  static ProjPoint affine(AlgebraicReal v) { return ProjPoint(std::move(v)); }
  static ProjPoint rational(const mpq_class& r) {
    return ProjPoint(AlgebraicReal::from_rational(r));
  }

  bool is_infinity() const { return !value_.has_value(); }
  const AlgebraicReal& value() const { return *value_; }

  bool operator==(const ProjPoint& o) const;
  bool operator!=(const ProjPoint& o) const { return !(*this == o); }

  /// Total order used for canonical forms: Infinity first, then by value.
  static int order(const ProjPoint& x, const ProjPoint& y);

  std::string str() const;

 private:
  ProjPoint() = default;
  explicit ProjPoint(AlgebraicReal v) : value_(std::move(v)) {}
  std::optional<AlgebraicReal> value_;
};

enum class MatClass { Identity, Elliptic, Parabolic, Hyperbolic };

/// Element of PSL2(A): determinant-one matrix in canonical sign
/// (c > 0, or c = 0 and a > 0).
class ProjMatrix {
 public:
  ProjMatrix(RingElem a, RingElem b, RingElem c, RingElem d);
  static ProjMatrix identity(const BaseRing& ring);
  static ProjMatrix from_ints(const BaseRing& ring, long a, long b, long c,
                              long d);

  const RingElem& a() const { return a_; }
  const RingElem& b() const { return b_; }
  const RingElem& c() const { return c_; }
  const RingElem& d() const { return d_; }
  const BaseRing& ring() const { return a_.ring(); }

  RingElem trace() const { return a_ + d_; }
  bool is_identity() const;
  MatClass classify() const;

  ProjMatrix operator*(const ProjMatrix& o) const;
  ProjMatrix inverse() const;
  ProjMatrix pow(long n) const;
  bool operator==(const ProjMatrix& o) const;
  bool operator!=(const ProjMatrix& o) const { return !(*this == o); }

  ProjPoint apply(const ProjPoint& p) const;

  /// Fixed points with derivative multipliers, attracting first for
  /// hyperbolic elements. Empty for elliptic; error for the identity.
  std::vector<std::pair<ProjPoint, AlgebraicReal>> fixed_points() const;

  std::string str() const;

 private:
  RingElem a_, b_, c_, d_;
};

/// True iff (x, y, z) lie in positive cyclic order on the circle
/// (finite reals increase, wrapping through Infinity).
bool cyclic_ordered(const ProjPoint& x, const ProjPoint& y, const ProjPoint& z);

/// Open arc from start to end in positive orientation. start == end is
/// permitted and denotes the complement of the single point.
class Arc {
 public:
  Arc(ProjPoint start, ProjPoint end)
      : start_(std::move(start)), end_(std::move(end)) {}
  static Arc rational(const mpq_class& s, const mpq_class& e) {
    return Arc(ProjPoint::rational(s), ProjPoint::rational(e));
  }

  const ProjPoint& start() const { return start_; }
  const ProjPoint& end() const { return end_; }
  bool is_punctured_circle() const { return start_ == end_; }

  bool contains(const ProjPoint& p) const;
  Arc image(const ProjMatrix& m) const {
    return Arc(m.apply(start_), m.apply(end_));
  }

  std::string str() const;

 private:
  ProjPoint start_, end_;
};

/// True iff the closed arcs overlap in more than endpoint touching is
/// allowed: open-arc intersection test.
bool arcs_intersect(const Arc& x, const Arc& y);

/// True iff every point of inner lies in outer (closure allowed at
/// matching endpoints is not granted: open-in-open containment with
/// endpoints of inner allowed to touch outer's endpoints).
bool arc_subset(const Arc& inner, const Arc& outer);

}  // namespace pph
