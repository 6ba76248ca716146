#include "pph/projective.hpp"

#include <sstream>

#include "pph/errors.hpp"

namespace pph {

namespace {

using Pair = std::pair<mpq_class, mpq_class>;

Pair pneg(const Pair& x) { return {-x.first, -x.second}; }
Pair psub(const Pair& x, const Pair& y) {
  return {x.first - y.first, x.second - y.second};
}
Pair pdiv(const Pair& x, const Pair& y) {
  mpq_class n = y.first * y.first - 2 * y.second * y.second;
  if (n == 0) fail(ErrorCode::DivisionByZero, "division by zero in Q(sqrt2)");
  Pair num{x.first * y.first - 2 * x.second * y.second,
           x.second * y.first - x.first * y.second};
  return {num.first / n, num.second / n};
}

}  // namespace

// ---- ProjPoint ----------------------------------------------------------

int ProjPoint::order(const ProjPoint& x, const ProjPoint& y) {
  if (x.is_infinity() && y.is_infinity()) return 0;
  if (x.is_infinity()) return -1;
  if (y.is_infinity()) return 1;
  return AlgebraicReal::compare(x.value(), y.value());
}

bool ProjPoint::operator==(const ProjPoint& o) const {
  return order(*this, o) == 0;
}

std::string ProjPoint::str() const {
  return is_infinity() ? "inf" : value().str();
}

bool cyclic_ordered(const ProjPoint& x, const ProjPoint& y,
                    const ProjPoint& z) {
  int xy = ProjPoint::order(x, y), yz = ProjPoint::order(y, z),
      zx = ProjPoint::order(z, x);
  if (xy == 0 || yz == 0 || zx == 0)
    fail(ErrorCode::NotDistinct, "cyclic order needs three distinct points");
  // positive iff (x, y, z) is an even rotation of an increasing triple in
  // the cut linear order (Infinity first)
  return (xy < 0 && yz < 0) || (yz < 0 && zx < 0) || (zx < 0 && xy < 0);
}

// ---- ProjMatrix ---------------------------------------------------------

ProjMatrix::ProjMatrix(RingElem a, RingElem b, RingElem c, RingElem d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_.ring() != b_.ring() || a_.ring() != c_.ring() ||
      a_.ring() != d_.ring())
    fail(ErrorCode::RingMismatch, "matrix entries from mixed rings");
  RingElem det = a_ * d_ - b_ * c_;
  if (det != RingElem::one(a_.ring()))
    fail(ErrorCode::ValidationError, "matrix determinant must be 1");
  int cs = c_.sign();
  if (cs < 0 || (cs == 0 && a_.sign() < 0)) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
    d_ = -d_;
  }
}

ProjMatrix ProjMatrix::identity(const BaseRing& ring) {
  return ProjMatrix(RingElem::one(ring), RingElem::zero(ring),
                    RingElem::zero(ring), RingElem::one(ring));
}

ProjMatrix ProjMatrix::from_ints(const BaseRing& ring, long a, long b, long c,
                                 long d) {
  return ProjMatrix(RingElem(ring, a), RingElem(ring, b), RingElem(ring, c),
                    RingElem(ring, d));
}

bool ProjMatrix::is_identity() const {
  return b_.is_zero() && c_.is_zero() && a_ == RingElem::one(ring()) &&
         d_ == RingElem::one(ring());
}

MatClass ProjMatrix::classify() const {
  RingElem tau = trace();
  RingElem disc = tau * tau - RingElem(ring(), 4);
  int s = disc.sign();
  if (s > 0) return MatClass::Hyperbolic;
  if (s < 0) return MatClass::Elliptic;
  return is_identity() ? MatClass::Identity : MatClass::Parabolic;
}

ProjMatrix ProjMatrix::operator*(const ProjMatrix& o) const {
  return ProjMatrix(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                    c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
}

ProjMatrix ProjMatrix::inverse() const {
  return ProjMatrix(d_, -b_, -c_, a_);
}

ProjMatrix ProjMatrix::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  ProjMatrix acc = identity(ring());
  ProjMatrix base = *this;
  while (n > 0) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

bool ProjMatrix::operator==(const ProjMatrix& o) const {
  return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
}

ProjPoint ProjMatrix::apply(const ProjPoint& p) const {
  Pair pa = a_.field_pair(), pb = b_.field_pair(), pc = c_.field_pair(),
       pd = d_.field_pair();
  if (p.is_infinity()) {
    if (c_.sign() == 0) return ProjPoint::infinity();
    Pair v = pdiv(pa, pc);
    return ProjPoint::affine(AlgebraicReal::from_field_pair(v.first, v.second));
  }
  if (c_.sign() != 0) {
    Pair pole = pdiv(pneg(pd), pc);
    AlgebraicReal pole_val =
        AlgebraicReal::from_field_pair(pole.first, pole.second);
    if (AlgebraicReal::compare(p.value(), pole_val) == 0)
      return ProjPoint::infinity();
  }
  return ProjPoint::affine(mobius_image(p.value(), pa, pb, pc, pd));
}

std::vector<std::pair<ProjPoint, AlgebraicReal>> ProjMatrix::fixed_points()
    const {
  if (is_identity())
    fail(ErrorCode::IdentityHasAllPoints, "every point is fixed");
  MatClass cls = classify();
  if (cls == MatClass::Elliptic) return {};
  const AlgebraicReal one = AlgebraicReal::from_rational(1);

  if (c_.sign() == 0) {
    AlgebraicReal da = AlgebraicReal::from_ring(d_);
    AlgebraicReal mult_inf = da * da;  // derivative d/a with ad = 1
    if (cls == MatClass::Parabolic) return {{ProjPoint::infinity(), one}};
    // second fixed point b / (d - a), derivative a^2
    Pair other = pdiv(b_.field_pair(), psub(d_.field_pair(), a_.field_pair()));
    ProjPoint fp =
        ProjPoint::affine(AlgebraicReal::from_field_pair(other.first, other.second));
    AlgebraicReal aa = AlgebraicReal::from_ring(a_);
    AlgebraicReal mult_fp = aa * aa;
    if (AlgebraicReal::compare(mult_inf, one) < 0)
      return {{ProjPoint::infinity(), mult_inf}, {fp, mult_fp}};
    return {{fp, mult_fp}, {ProjPoint::infinity(), mult_inf}};
  }

  // c > 0: fixed points are roots of c x^2 + (d - a) x - b
  if (cls == MatClass::Parabolic) {
    Pair v = pdiv(psub(a_.field_pair(), d_.field_pair()),
                  {2 * c_.field_pair().first, 2 * c_.field_pair().second});
    return {{ProjPoint::affine(AlgebraicReal::from_field_pair(v.first, v.second)),
             one}};
  }
  RingElem tau = trace();
  AlgebraicReal xi_plus = AlgebraicReal::quadratic_root(
      c_, d_ - a_, -b_, AlgebraicReal::Branch::Plus);
  AlgebraicReal xi_minus = AlgebraicReal::quadratic_root(
      c_, d_ - a_, -b_, AlgebraicReal::Branch::Minus);
  AlgebraicReal lam_plus = AlgebraicReal::quadratic_root(
      RingElem::one(ring()), -tau, RingElem::one(ring()),
      AlgebraicReal::Branch::Plus);
  AlgebraicReal lam_minus = AlgebraicReal::quadratic_root(
      RingElem::one(ring()), -tau, RingElem::one(ring()),
      AlgebraicReal::Branch::Minus);
  // multiplier at xi(lambda) is lambda^-2; the plus branches pair up since
  // xi = (lambda - d) / c is increasing in lambda for c > 0
  AlgebraicReal mult_plus = (lam_plus * lam_plus).inverse();
  AlgebraicReal mult_minus = (lam_minus * lam_minus).inverse();
  if (AlgebraicReal::compare(mult_plus, one) < 0)
    return {{ProjPoint::affine(xi_plus), mult_plus},
            {ProjPoint::affine(xi_minus), mult_minus}};
  return {{ProjPoint::affine(xi_minus), mult_minus},
          {ProjPoint::affine(xi_plus), mult_plus}};
}

std::string ProjMatrix::str() const {
  std::ostringstream os;
  os << "[[" << a_.str() << ", " << b_.str() << "], [" << c_.str() << ", "
     << d_.str() << "]]";
  return os.str();
}

// ---- Arc ----------------------------------------------------------------

bool Arc::contains(const ProjPoint& p) const {
  if (is_punctured_circle()) return p != start_;
  if (p == start_ || p == end_) return false;
  return cyclic_ordered(start_, p, end_);
}

std::string Arc::str() const {
  return "(" + start_.str() + ", " + end_.str() + ")";
}

bool arcs_intersect(const Arc& x, const Arc& y) {
  if (x.is_punctured_circle() || y.is_punctured_circle()) return true;
  if (x.start() == y.start() && x.end() == y.end()) return true;
  return x.contains(y.start()) || x.contains(y.end()) ||
         y.contains(x.start()) || y.contains(x.end());
}

bool arc_subset(const Arc& inner, const Arc& outer) {
  if (outer.is_punctured_circle()) {
    if (inner.is_punctured_circle()) return inner.start() == outer.start();
    return !inner.contains(outer.start());
  }
  if (inner.is_punctured_circle()) return false;
  const ProjPoint &s = inner.start(), &e = inner.end();
  const ProjPoint &a = outer.start(), &b = outer.end();
  bool s_ok = s == a || outer.contains(s);
  bool e_ok = e == b || outer.contains(e);
  if (!s_ok || !e_ok) return false;
  if (s == a || e == b) return true;
  return cyclic_ordered(a, s, e);
}

}  // namespace pph
