#include "pph/algebraic.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <vector>

#include "pph/errors.hpp"

namespace pph {

using poly::degree;

namespace {

mpq_class pow2_inv(unsigned k) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, k);
  return mpq_class(1, 1) / mpq_class(d);
}

// ---- exact rational interval arithmetic ---------------------------------

struct QI {
  mpq_class lo, hi;
};

QI qi_point(const mpq_class& v) { return {v, v}; }
QI qi_add(const QI& a, const QI& b) { return {a.lo + b.lo, a.hi + b.hi}; }
QI qi_neg(const QI& a) { return {-a.hi, -a.lo}; }
QI qi_mul(const QI& a, const QI& b) {
  mpq_class c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo,
            c4 = a.hi * b.hi;
  return {std::min({c1, c2, c3, c4}), std::max({c1, c2, c3, c4})};
}
bool qi_has_zero(const QI& a) { return sgn(a.lo) <= 0 && sgn(a.hi) >= 0; }
QI qi_inv(const QI& a) {
  assert(!qi_has_zero(a));
  return {1 / a.hi, 1 / a.lo};
}
QI qi_div(const QI& a, const QI& b) { return qi_mul(a, qi_inv(b)); }

// ---- Q(sqrt2) as pairs (u, v) = u + v*sqrt2 -----------------------------

using Pair = std::pair<mpq_class, mpq_class>;

Pair padd(const Pair& x, const Pair& y) {
  return {x.first + y.first, x.second + y.second};
}
Pair psub(const Pair& x, const Pair& y) {
  return {x.first - y.first, x.second - y.second};
}
Pair pneg(const Pair& x) { return {-x.first, -x.second}; }
Pair pmul(const Pair& x, const Pair& y) {
  return {x.first * y.first + 2 * x.second * y.second,
          x.first * y.second + x.second * y.first};
}
Pair pconj(const Pair& x) { return {x.first, -x.second}; }
bool pzero(const Pair& x) { return x.first == 0 && x.second == 0; }
Pair pdiv(const Pair& x, const Pair& y) {
  mpq_class n = y.first * y.first - 2 * y.second * y.second;
  if (n == 0) fail(ErrorCode::DivisionByZero, "division by zero in Q(sqrt2)");
  Pair c = pconj(y);
  Pair num = pmul(x, c);
  return {num.first / n, num.second / n};
}
Pair pscale(const Pair& x, const mpq_class& c) {
  return {x.first * c, x.second * c};
}

QI pair_interval(const Pair& p, unsigned prec) {
  if (p.second == 0) return qi_point(p.first);
  auto [sl, sh] = sqrt_interval(2, prec);
  if (sgn(p.second) > 0)
    return {p.first + p.second * sl, p.first + p.second * sh};
  return {p.first + p.second * sh, p.first + p.second * sl};
}

using FieldPoly = std::vector<Pair>;

FieldPoly fmul(const FieldPoly& a, const FieldPoly& b) {
  if (a.empty() || b.empty()) return {};
  FieldPoly r(a.size() + b.size() - 1, Pair{0, 0});
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = padd(r[i + j], pmul(a[i], b[j]));
  return r;
}

FieldPoly fconj(const FieldPoly& a) {
  FieldPoly r(a);
  for (auto& c : r) c = pconj(c);
  return r;
}

}  // namespace

std::pair<mpq_class, mpq_class> sqrt_interval(const mpq_class& q, unsigned k) {
  assert(sgn(q) >= 0);
  // sqrt(n/d) = sqrt(n*d)/d; floor integer sqrt of n*d*4^k
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, k);
  mpz_class nd = q.get_num() * q.get_den() * scale * scale;
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), nd.get_mpz_t());
  mpq_class lo(s, q.get_den() * scale), hi(s + 1, q.get_den() * scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

// ---- construction -------------------------------------------------------

AlgebraicReal AlgebraicReal::from_rational(const mpq_class& r) {
  auto rep = std::make_shared<Rep>();
  rep->poly = poly::primitive(QPoly{-r, 1});
  rep->lo = rep->hi = rep->rlo = rep->rhi = r;
  return AlgebraicReal(std::move(rep));
}

AlgebraicReal AlgebraicReal::make_isolated(
    const QPoly& raw,
    const std::function<std::pair<mpq_class, mpq_class>(unsigned)>& box,
    bool try_reduce) {
  ZPoly sqf = poly::square_free(raw);
  int d = static_cast<int>(sqf.size()) - 1;
  if (d < 1) fail(ErrorCode::InternalError, "empty annihilator");
  // every value arises in a tower of quadratic extensions, so only
  // power-of-two factor degrees can occur (degree 1 is handled by the
  // rational-collapse check below)
  if (d > 8) {
    auto m = poly::minimal_divisor(sqf, {2, 4, 8}, box);
    if (!m)
      fail(ErrorCode::DegreeOverflow,
           "algebraic degree exceeds 8 (raw degree " + std::to_string(d) + ")");
    sqf = *m;
    d = static_cast<int>(sqf.size()) - 1;
  } else if (try_reduce && d > 2) {
    std::vector<int> degs;
    for (int c = 2; c < d; c *= 2) degs.push_back(c);
    // a missed reduction keeps a valid (non-minimal) annihilator, so a
    // short precision ladder suffices here
    auto m = poly::minimal_divisor(sqf, degs, box, 96);
    if (m) {
      sqf = *m;
      d = static_cast<int>(sqf.size()) - 1;
    }
  }
  if (d == 1)
    return from_rational(mpq_class(-mpq_class(sqf[0]) / mpq_class(sqf[1])));

  auto chain = poly::sturm_chain(poly::from_z(sqf));
  unsigned k = 8;
  while (true) {
    auto [a, b] = box(k);
    if (a == b) {
      if (poly::sign_at(sqf, a) == 0) return from_rational(a);
      fail(ErrorCode::InternalError, "exact box misses annihilator root");
    }
    mpq_class w = b - a;
    mpq_class a2 = poly::off_root(sqf, a, w / 16, -1);
    mpq_class b2 = poly::off_root(sqf, b, w / 16, +1);
    if (poly::sturm_count(chain, a2, b2) == 1) {
      // the interval isolates one root of sqf, so a verified rational root
      // inside it is the value itself; any rational root p/q in lowest
      // terms has q dividing the (positive) leading coefficient, so it is
      // a multiple of 1/lead, and the tight enclosure holds at most a few
      auto [ra, rb] = box(96);
      if (ra < a2) ra = a2;
      if (rb > b2) rb = b2;
      if (ra <= rb) {
        const mpz_class& lead = sqf.back();
        mpz_class n0, n1, t0 = ra.get_num() * lead, t1 = rb.get_num() * lead;
        mpz_cdiv_q(n0.get_mpz_t(), t0.get_mpz_t(), ra.get_den().get_mpz_t());
        mpz_fdiv_q(n1.get_mpz_t(), t1.get_mpz_t(), rb.get_den().get_mpz_t());
        for (mpz_class m = n0; m <= n1 && m <= n0 + 8; ++m) {
          mpq_class r(m, lead);
          r.canonicalize();
          if (poly::sign_at(sqf, r) == 0) return from_rational(r);
        }
      }
      auto rep = std::make_shared<Rep>();
      rep->poly = std::move(sqf);
      rep->lo = rep->rlo = a2;
      rep->hi = rep->rhi = b2;
      return AlgebraicReal(std::move(rep));
    }
    if (k > (1u << 22)) fail(ErrorCode::InternalError, "isolation stalled");
    k *= 2;
  }
}

AlgebraicReal AlgebraicReal::from_parts(ZPoly minpoly, mpq_class lo,
                                        mpq_class hi) {
  QPoly p = poly::from_z(minpoly);
  int d = degree(p);
  if (d < 1) fail(ErrorCode::ValidationError, "minpoly must have degree >= 1");
  if (d > 8) fail(ErrorCode::DegreeOverflow, "minpoly degree exceeds 8");
  if (poly::primitive(p) != minpoly)
    fail(ErrorCode::ValidationError,
         "minpoly must be primitive with positive leading coefficient");
  if (degree(poly::gcd(p, poly::derivative(p))) != 0)
    fail(ErrorCode::ValidationError, "minpoly must be square-free");
  if (lo > hi) fail(ErrorCode::ValidationError, "empty isolating interval");
  if (d == 1) {
    mpq_class r = -p[0] / p[1];
    if (r < lo || r > hi)
      fail(ErrorCode::ValidationError, "interval does not contain the root");
    return from_rational(r);
  }
  if (lo == hi) {
    if (poly::sign_at(minpoly, lo) != 0)
      fail(ErrorCode::ValidationError, "point interval is not a root");
    return from_rational(lo);
  }
  if (poly::sign_at(minpoly, lo) == 0 || poly::sign_at(minpoly, hi) == 0)
    fail(ErrorCode::ValidationError,
         "isolating interval endpoints must not be roots");
  auto chain = poly::sturm_chain(p);
  if (poly::sturm_count(chain, lo, hi) != 1)
    fail(ErrorCode::ValidationError,
         "interval must isolate exactly one real root");
  auto rep = std::make_shared<Rep>();
  rep->poly = std::move(minpoly);
  rep->lo = rep->rlo = lo;
  rep->hi = rep->rhi = hi;
  return AlgebraicReal(std::move(rep));
}

AlgebraicReal AlgebraicReal::from_field_pair(const mpq_class& u,
                                             const mpq_class& v) {
  if (v == 0) return from_rational(u);
  QPoly p{u * u - 2 * v * v, -2 * u, 1};
  auto box = [u, v](unsigned k) {
    unsigned prec = k + 2;
    while (true) {
      QI i = pair_interval({u, v}, prec);
      if (i.hi - i.lo <= pow2_inv(k)) return std::make_pair(i.lo, i.hi);
      prec += 16;
    }
  };
  return make_isolated(p, box, false);
}

AlgebraicReal AlgebraicReal::from_ring(const RingElem& x) {
  auto [u, v] = x.field_pair();
  return from_field_pair(u, v);
}

AlgebraicReal AlgebraicReal::quadratic_root(const RingElem& A,
                                            const RingElem& B,
                                            const RingElem& C, Branch branch) {
  if (A.ring() != B.ring() || A.ring() != C.ring())
    fail(ErrorCode::RingMismatch, "quadratic coefficients from mixed rings");
  if (A.is_zero())
    fail(ErrorCode::PreconditionViolated, "leading coefficient is zero");
  Pair a = A.field_pair(), b = B.field_pair(), c = C.field_pair();
  Pair disc = psub(pmul(b, b), pscale(pmul(a, c), 4));
  int ds = sqrt2_sign(disc.first, disc.second);
  if (ds < 0)
    fail(ErrorCode::NegativeDiscriminant, "B^2 - 4AC < 0, no real root");
  if (ds == 0) {
    Pair val = pdiv(pneg(b), pscale(a, 2));
    return from_field_pair(val.first, val.second);
  }
  int sign = branch == Branch::Plus ? 1 : -1;

  if (a.second == 0 && b.second == 0 && c.second == 0) {
    // rational quadratic
    QPoly p{c.first, b.first, a.first};
    mpq_class aq = a.first, bq = b.first, D = disc.first;
    auto box = [aq, bq, D, sign](unsigned k) {
      unsigned prec = k + 2;
      while (true) {
        auto [sl, sh] = sqrt_interval(D, prec);
        QI s = sign > 0 ? QI{sl, sh} : QI{-sh, -sl};
        QI num = qi_add(qi_point(-bq), s);
        QI val = qi_div(num, qi_point(2 * aq));
        if (val.hi - val.lo <= pow2_inv(k)) return std::make_pair(val.lo, val.hi);
        prec += 16;
      }
    };
    return make_isolated(p, box, false);
  }

  // Q(sqrt2) coefficients: rationalize by the sqrt2-conjugate quadratic.
  FieldPoly quad{c, b, a};
  FieldPoly prod = fmul(quad, fconj(quad));
  QPoly raw(prod.size());
  for (size_t i = 0; i < prod.size(); ++i) {
    assert(prod[i].second == 0);
    raw[i] = prod[i].first;
  }
  auto box = [a, b, disc, sign](unsigned k) {
    unsigned prec = k + 2;
    while (true) {
      QI ia = pair_interval(a, prec);
      QI ib = pair_interval(b, prec);
      QI id = pair_interval(disc, prec);
      if (sgn(id.lo) < 0 || qi_has_zero(ia)) {
        prec += 16;
        continue;
      }
      QI s{sqrt_interval(id.lo, prec).first, sqrt_interval(id.hi, prec).second};
      if (sign < 0) s = qi_neg(s);
      QI val = qi_div(qi_add(qi_neg(ib), s), qi_mul(qi_point(2), ia));
      if (val.hi - val.lo <= pow2_inv(k)) return std::make_pair(val.lo, val.hi);
      prec += 16;
    }
  };
  return make_isolated(raw, box, true);
}

// ---- refinement ---------------------------------------------------------

namespace {

// x rounded to the nearest multiple of 2^-m
mpq_class snap_dyadic(const mpq_class& x, unsigned long m) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, m);
  mpq_class s = x * mpq_class(scale);
  mpz_class n, num2 = 2 * s.get_num() + s.get_den();
  mpz_fdiv_q(n.get_mpz_t(), num2.get_mpz_t(),
             mpz_class(2 * s.get_den()).get_mpz_t());
  mpq_class r(n, scale);
  r.canonicalize();
  return r;
}

}  // namespace

std::pair<mpq_class, mpq_class> AlgebraicReal::refined(unsigned k) const {
  const Rep& r = *rep_;
  std::lock_guard<std::mutex> lock(r.mtx);
  mpq_class eps = pow2_inv(k);
  if (r.rhi - r.rlo <= eps) return {r.rlo, r.rhi};
  const ZPoly& p = r.poly;
  ZPoly dp(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = mpz_class(i) * p[i];
  const int slo = poly::sign_at(p, r.rlo);
  const mpq_class quarter(1, 4);
  // invariant: sign_at(rlo) == slo != 0 and sign_at(rhi) == -slo
  while (r.rhi - r.rlo > eps) {
    mpq_class w = r.rhi - r.rlo;
    mpq_class mid = (r.rlo + r.rhi) / 2;
    mpq_class pm = poly::eval(p, mid);
    if (pm == 0) {
      r.rlo = r.rhi = mid;
      break;
    }
    // Newton step from the midpoint, verified by exact sign checks; near
    // the root the error squares, so each accepted step roughly doubles
    // the number of correct bits
    bool stepped = false;
    if (w <= quarter) {
      mpq_class dm = poly::eval(dp, mid);
      if (dm != 0) {
        // enclosure half-width: a power of two in (w^2/8, w^2/4]
        mpq_class h = w * w / 4;
        long m = static_cast<long>(
                     mpz_sizeinbase(h.get_den().get_mpz_t(), 2)) -
                 static_cast<long>(
                     mpz_sizeinbase(h.get_num().get_mpz_t(), 2)) +
                 1;
        if (m < 1) m = 1;
        mpq_class g = pow2_inv(static_cast<unsigned>(m));
        mpq_class x1 = snap_dyadic(mid - pm / dm, static_cast<unsigned>(m));
        mpq_class lo2 = x1 - g, hi2 = x1 + g;
        if (lo2 > r.rlo && hi2 < r.rhi) {
          int s1 = poly::sign_at(p, lo2);
          if (s1 == 0) {
            r.rlo = r.rhi = lo2;
            break;
          }
          int s2 = poly::sign_at(p, hi2);
          if (s2 == 0) {
            r.rlo = r.rhi = hi2;
            break;
          }
          if (s1 == slo && s2 == -slo) {
            r.rlo = lo2;
            r.rhi = hi2;
            stepped = true;
          }
        }
      }
    }
    if (!stepped) {
      if (sgn(pm) == slo)
        r.rlo = mid;
      else
        r.rhi = mid;
    }
  }
  return {r.rlo, r.rhi};
}

mpq_class AlgebraicReal::approx(unsigned k) const {
  auto [lo, hi] = refined(k + 1);
  mpq_class mid = (lo + hi) / 2;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, k + 1);
  mpq_class scaled = mid * mpq_class(scale);
  // round to nearest integer
  mpz_class n;
  mpz_class num2 = 2 * scaled.get_num() + scaled.get_den();
  mpz_fdiv_q(n.get_mpz_t(), num2.get_mpz_t(),
             mpz_class(2 * scaled.get_den()).get_mpz_t());
  mpq_class d(n, scale);
  d.canonicalize();
  return d;
}

double AlgebraicReal::to_double() const {
  auto [lo, hi] = refined(60);
  return mpq_class((lo + hi) / 2).get_d();
}

bool AlgebraicReal::is_rational() const { return rep_->lo == rep_->hi; }

mpq_class AlgebraicReal::rational_value() const {
  assert(is_rational());
  return rep_->lo;
}

int AlgebraicReal::sign() const {
  if (is_rational()) return sgn(rational_value());
  bool zero_is_root = rep_->poly[0] == 0;
  unsigned k = 8;
  while (true) {
    auto [lo, hi] = refined(k);
    if (sgn(lo) > 0) return 1;
    if (sgn(hi) < 0) return -1;
    if (lo == hi) return sgn(lo);
    if (zero_is_root) return 0;  // 0 is a root lying in the isolating interval
    if (sgn(lo) == 0) return 1;
    if (sgn(hi) == 0) return -1;
    k *= 2;
  }
}

namespace {

// sign of (a - r) for rational r
int compare_alg_rational(const AlgebraicReal& a, const mpq_class& r) {
  if (a.is_rational()) return cmp(a.rational_value(), r);
  bool r_is_root = poly::sign_at(a.minpoly(), r) == 0;
  unsigned k = 8;
  while (true) {
    auto [lo, hi] = a.refined(k);
    if (hi < r) return -1;
    if (lo > r) return 1;
    if (lo == hi) return cmp(lo, r);
    // r in [lo, hi]
    if (r_is_root) return 0;
    if (lo == r) return 1;
    if (hi == r) return -1;
    k *= 2;
  }
}

}  // namespace

int AlgebraicReal::compare(const AlgebraicReal& x, const AlgebraicReal& y) {
  if (x.rep_ == y.rep_) return 0;
  if (x.is_rational() && y.is_rational())
    return cmp(x.rational_value(), y.rational_value());
  if (x.is_rational()) return -compare_alg_rational(y, x.rational_value());
  if (y.is_rational()) return compare_alg_rational(x, y.rational_value());

  unsigned k = 16;
  auto [xl, xh] = x.refined(k);
  auto [yl, yh] = y.refined(k);
  QPoly g =
      poly::gcd(poly::from_z(x.minpoly()), poly::from_z(y.minpoly()));
  bool maybe_equal = degree(g) >= 1;
  std::vector<QPoly> chain_g;
  if (maybe_equal) chain_g = poly::sturm_chain(g);
  while (true) {
    if (xh < yl) return -1;
    if (yh < xl) return 1;
    if (xl == xh) return -compare_alg_rational(y, xl);
    if (yl == yh) return compare_alg_rational(x, yl);
    if (maybe_equal) {
      // g divides both annihilators, so a root of g inside an isolating
      // interval is the isolated value itself.
      int cx = poly::sturm_count(chain_g, xl, xh);
      int cy = poly::sturm_count(chain_g, yl, yh);
      if (cx == 0 || cy == 0) {
        maybe_equal = false;
      } else {
        mpq_class hl = std::min(xl, yl), hh = std::max(xh, yh);
        if (poly::sturm_count(chain_g, hl, hh) == 1) return 0;
      }
    }
    k *= 2;
    std::tie(xl, xh) = x.refined(k);
    std::tie(yl, yh) = y.refined(k);
  }
}

// ---- arithmetic ---------------------------------------------------------

AlgebraicReal AlgebraicReal::operator-() const {
  if (is_rational()) return from_rational(-rational_value());
  ZPoly p = rep_->poly;
  for (size_t i = 0; i < p.size(); ++i)
    if (i % 2 == 1) p[i] = -p[i];
  if (sgn(p.back()) < 0)
    for (auto& c : p) c = -c;
  auto [lo, hi] = refined(0);
  auto rep = std::make_shared<Rep>();
  rep->poly = std::move(p);
  rep->lo = rep->rlo = -hi;
  rep->hi = rep->rhi = -lo;
  return AlgebraicReal(std::move(rep));
}

namespace {

AlgebraicReal shift_by_rational(const AlgebraicReal& x, const mpq_class& r) {
  if (r == 0) return x;
  if (x.is_rational())
    return AlgebraicReal::from_rational(x.rational_value() + r);
  // p(t - r) annihilates x + r
  QPoly p = poly::from_z(x.minpoly());
  QPoly acc;
  QPoly lin{-r, 1};
  for (size_t i = p.size(); i-- > 0;) {
    acc = poly::mul(acc, lin);
    if (acc.empty()) acc = QPoly{p[i]};
    else acc[0] += p[i];
    poly::trim(acc);
  }
  auto [lo, hi] = x.refined(0);
  return AlgebraicReal::from_parts(poly::primitive(acc), lo + r, hi + r);
}

AlgebraicReal scale_by_rational(const AlgebraicReal& x, const mpq_class& r) {
  if (r == 0) return AlgebraicReal::from_rational(0);
  if (x.is_rational())
    return AlgebraicReal::from_rational(x.rational_value() * r);
  // q(t) = p(t/r) * r^d annihilates r*x
  const ZPoly& p = x.minpoly();
  size_t d = p.size() - 1;
  QPoly q(p.size());
  mpq_class pw(1);
  for (size_t i = p.size(); i-- > 0;) {
    q[i] = mpq_class(p[i]) * pw;
    pw *= r;
  }
  auto [lo, hi] = x.refined(0);
  mpq_class a = lo * r, b = hi * r;
  if (a > b) std::swap(a, b);
  (void)d;
  return AlgebraicReal::from_parts(poly::primitive(q), a, b);
}

std::vector<mpq_class> sample_points(size_t n) {
  std::vector<mpq_class> ts;
  ts.reserve(n);
  ts.emplace_back(0);
  for (long i = 1; ts.size() < n; ++i) {
    ts.emplace_back(i);
    if (ts.size() < n) ts.emplace_back(-i);
  }
  return ts;
}

}  // namespace

AlgebraicReal AlgebraicReal::inverse() const {
  int s = sign();
  if (s == 0) fail(ErrorCode::DivisionByZero, "inverse of zero");
  if (is_rational()) return from_rational(1 / rational_value());
  ZPoly p = rep_->poly;
  std::reverse(p.begin(), p.end());
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (sgn(p.back()) < 0)
    for (auto& c : p) c = -c;
  unsigned k = 8;
  mpq_class lo, hi;
  while (true) {
    std::tie(lo, hi) = refined(k);
    if (sgn(lo) > 0 || sgn(hi) < 0) break;
    k *= 2;
  }
  auto rep = std::make_shared<Rep>();
  rep->poly = std::move(p);
  rep->lo = rep->rlo = 1 / hi;
  rep->hi = rep->rhi = 1 / lo;
  return AlgebraicReal(std::move(rep));
}

AlgebraicReal AlgebraicReal::operator+(const AlgebraicReal& o) const {
  if (o.is_rational()) return shift_by_rational(*this, o.rational_value());
  if (is_rational()) return shift_by_rational(o, rational_value());

  QPoly P = poly::from_z(rep_->poly), Q = poly::from_z(o.rep_->poly);
  int m = degree(P), n = degree(Q);
  size_t count = static_cast<size_t>(m) * n + 1;
  auto ts = sample_points(count);
  std::vector<mpq_class> rs(count);
  for (size_t s = 0; s < count; ++s) {
    // Q(t0 - y) as a polynomial in y
    QPoly lin{ts[s], -1}, acc;
    for (size_t i = Q.size(); i-- > 0;) {
      acc = poly::mul(acc, lin);
      if (acc.empty()) acc = QPoly{Q[i]};
      else acc[0] += Q[i];
      poly::trim(acc);
    }
    rs[s] = poly::resultant(P, acc);
  }
  QPoly raw = poly::interpolate(ts, rs);
  AlgebraicReal x = *this, y = o;
  auto box = [x, y](unsigned k) {
    auto [a, b] = x.refined(k + 2);
    auto [c, d] = y.refined(k + 2);
    // materialize before returning: lazy expression nodes must not outlive
    // the locals they reference
    return std::make_pair(mpq_class(a + c), mpq_class(b + d));
  };
  return make_isolated(raw, box, false);
}

AlgebraicReal AlgebraicReal::operator-(const AlgebraicReal& o) const {
  if (o.is_rational()) return shift_by_rational(*this, -o.rational_value());
  return *this + (-o);
}

AlgebraicReal AlgebraicReal::operator*(const AlgebraicReal& o) const {
  if (o.is_rational()) return scale_by_rational(*this, o.rational_value());
  if (is_rational()) return scale_by_rational(o, rational_value());
  if (sign() == 0 || o.sign() == 0) return from_rational(0);

  QPoly P = poly::from_z(rep_->poly), Q = poly::from_z(o.rep_->poly);
  if (Q[0] == 0) {  // drop the spurious root at 0; our value is nonzero
    Q.erase(Q.begin());
  }
  if (P[0] == 0) P.erase(P.begin());
  int m = degree(P), n = degree(Q);
  size_t count = static_cast<size_t>(m) * n + 1;
  auto ts = sample_points(count);
  std::vector<mpq_class> rs(count);
  for (size_t s = 0; s < count; ++s) {
    // y^n * Q(t0/y): coefficient of y^i is q_{n-i} * t0^{n-i}
    QPoly qs(n + 1);
    mpq_class pw(1);
    for (int i = n; i >= 0; --i) {
      qs[i] = Q[n - i] * pw;
      pw *= ts[s];
    }
    poly::trim(qs);
    rs[s] = poly::resultant(P, qs);
  }
  QPoly raw = poly::interpolate(ts, rs);
  AlgebraicReal x = *this, y = o;
  auto box = [x, y](unsigned k) {
    unsigned prec = k + 2;
    while (true) {
      auto [a, b] = x.refined(prec);
      auto [c, d] = y.refined(prec);
      QI v = qi_mul({a, b}, {c, d});
      if (v.hi - v.lo <= pow2_inv(k)) return std::make_pair(v.lo, v.hi);
      prec += 16;
    }
  };
  return make_isolated(raw, box, false);
}

AlgebraicReal AlgebraicReal::operator/(const AlgebraicReal& o) const {
  if (o.sign() == 0) fail(ErrorCode::DivisionByZero, "division by zero");
  if (o.is_rational()) return scale_by_rational(*this, 1 / o.rational_value());
  return *this * o.inverse();
}

// ---- Moebius images -----------------------------------------------------

AlgebraicReal mobius_image(const AlgebraicReal& x, const Pair& a,
                           const Pair& b, const Pair& c, const Pair& d) {
  if (x.is_rational()) {
    mpq_class r = x.rational_value();
    Pair num = padd(pscale(a, r), b);
    Pair den = padd(pscale(c, r), d);
    if (pzero(den))
      fail(ErrorCode::InternalError, "mobius_image evaluated at its pole");
    Pair val = pdiv(num, den);
    return AlgebraicReal::from_field_pair(val.first, val.second);
  }

  const ZPoly& pz = x.minpoly();
  size_t m = pz.size() - 1;
  bool rational_entries =
      a.second == 0 && b.second == 0 && c.second == 0 && d.second == 0;

  // N(z) = sum_i p_i (d z - b)^i (a - c z)^(m-i) annihilates the image.
  FieldPoly lin1{pneg(b), d};
  FieldPoly lin2{a, pneg(c)};
  std::vector<FieldPoly> pow1{{Pair{1, 0}}}, pow2{{Pair{1, 0}}};
  for (size_t i = 1; i <= m; ++i) {
    pow1.push_back(fmul(pow1.back(), lin1));
    pow2.push_back(fmul(pow2.back(), lin2));
  }
  FieldPoly N{Pair{0, 0}};
  for (size_t i = 0; i <= m; ++i) {
    FieldPoly term = fmul(pow1[i], pow2[m - i]);
    if (N.size() < term.size()) N.resize(term.size(), Pair{0, 0});
    for (size_t j = 0; j < term.size(); ++j)
      N[j] = padd(N[j], pscale(term[j], mpq_class(pz[i])));
  }

  QPoly raw;
  if (rational_entries) {
    raw.resize(N.size());
    for (size_t i = 0; i < N.size(); ++i) raw[i] = N[i].first;
  } else {
    FieldPoly prod = fmul(N, fconj(N));
    raw.resize(prod.size());
    for (size_t i = 0; i < prod.size(); ++i) {
      assert(prod[i].second == 0);
      raw[i] = prod[i].first;
    }
  }
  poly::trim(raw);

  auto box = [x, a, b, c, d](unsigned k) {
    unsigned prec = k + 2;
    while (true) {
      auto [lo, hi] = x.refined(prec);
      QI xi{lo, hi};
      QI ia = pair_interval(a, prec), ib = pair_interval(b, prec);
      QI ic = pair_interval(c, prec), id = pair_interval(d, prec);
      QI den = qi_add(qi_mul(ic, xi), id);
      if (qi_has_zero(den)) {
        prec += 16;
        continue;
      }
      QI v = qi_div(qi_add(qi_mul(ia, xi), ib), den);
      if (v.hi - v.lo <= pow2_inv(k)) return std::make_pair(v.lo, v.hi);
      prec += 16;
    }
  };
  return AlgebraicReal::make_isolated(raw, box, !rational_entries);
}

std::string AlgebraicReal::str() const {
  std::ostringstream os;
  if (is_rational()) {
    os << rational_value();
    return os.str();
  }
  os << "root of [";
  for (size_t i = 0; i < rep_->poly.size(); ++i) {
    if (i) os << ", ";
    os << rep_->poly[i];
  }
  os << "] near " << to_double();
  return os.str();
}

}  // namespace pph
