// Acceptance gate: twelve end-to-end checks, one PASS/FAIL line each.
// Exit status is nonzero iff any criterion fails.

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pph/constructions.hpp"
#include "pph/errors.hpp"
#include "pph/json_io.hpp"
#include "pph/words.hpp"

using namespace pph;

namespace {

std::mt19937_64 rng(20240817);
int failures = 0;

void report(int n, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", n,
              name.c_str(), detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++failures;
}

const BaseRing Z = BaseRing::integers();
const BaseRing S2 = BaseRing::sqrt2();

ProjMatrix M(long a, long b, long c, long d) {
  return ProjMatrix::from_ints(Z, a, b, c, d);
}

RingElem s2e(long u, long v) { return RingElem::sqrt2(S2, u, v); }

AlgebraicReal qroot(long A, long B, long C, AlgebraicReal::Branch br) {
  return AlgebraicReal::quadratic_root(RingElem(Z, A), RingElem(Z, B),
                                       RingElem(Z, C), br);
}

long rnd(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

mpq_class rnd_rational() { return mpq_class(rnd(-20, 20), rnd(1, 9)); }

ProjMatrix random_psl2z(int len) {
  ProjMatrix t = ProjMatrix::identity(Z);
  for (int i = 0; i < len; ++i) {
    switch (rnd(0, 3)) {
      case 0: t = t * M(1, 1, 0, 1); break;
      case 1: t = t * M(1, -1, 0, 1); break;
      case 2: t = t * M(0, -1, 1, 0); break;
      default: t = t * M(2, 1, 1, 1); break;
    }
  }
  return t;
}

// two-piece bump: m^power between its fixed points, identity elsewhere
PiecewiseMap bump_of(const ProjMatrix& m, long power) {
  auto fps = m.fixed_points();
  std::vector<Piece> pieces;
  pieces.push_back({fps[1].first, m, m.pow(power)});
  pieces.push_back({fps[0].first, m, ProjMatrix::identity(m.ring())});
  return PiecewiseMap::from_pieces(m.ring(), std::move(pieces));
}

PiecewiseMap bump_in_arcs(const Arc& rep, const Arc& att, long power) {
  return bump_of(hyperbolic_in_arcs(rep, att), power);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalError;
}

// ---- criterion 1: independent interval-arithmetic oracle ----------------

struct IV {
  mpq_class lo, hi;
};

IV iv_point(const mpq_class& q) { return {q, q}; }

IV iv_add(const IV& a, const IV& b) {
  return {mpq_class(a.lo + b.lo), mpq_class(a.hi + b.hi)};
}

IV iv_mul(const IV& a, const IV& b) {
  mpq_class c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  IV r{c[0], c[0]};
  for (int i = 1; i < 4; ++i) {
    if (c[i] < r.lo) r.lo = c[i];
    if (c[i] > r.hi) r.hi = c[i];
  }
  return r;
}

IV iv_scale(const IV& a, const mpq_class& q) {
  return iv_mul(a, iv_point(q));
}

// enclosure of sqrt(n) for a nonnegative integer n, via the integer square
// root of n * 4^prec
IV iv_sqrt_int(long n, unsigned prec) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, prec);
  mpz_class arg = mpz_class(n) * scale * scale, s;
  mpz_sqrt(s.get_mpz_t(), arg.get_mpz_t());
  mpq_class lo(s, scale), hi(s + 1, scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

// expression of degree <= 4: either r0 + r1*sqrt(d1) + r2*sqrt(d2) or
// (r0 + r1*sqrt(d1)) * (r2 + r3*sqrt(d2))
struct Expr {
  bool product;
  mpq_class r[4];
  long d1, d2;
};

Expr random_expr() {
  static const long rads[] = {2, 3, 5, 6, 7, 10};
  Expr e;
  e.product = rnd(0, 1) == 1;
  for (auto& c : e.r) c = rnd_rational();
  e.d1 = rads[rnd(0, 5)];
  e.d2 = rads[rnd(0, 5)];
  return e;
}

AlgebraicReal expr_value(const Expr& e, bool permuted) {
  auto rat = [](const mpq_class& q) { return AlgebraicReal::from_rational(q); };
  auto root = [](long n) {
    return AlgebraicReal::quadratic_root(RingElem(Z, 1), RingElem::zero(Z),
                                         RingElem(Z, -n),
                                         AlgebraicReal::Branch::Plus);
  };
  AlgebraicReal t1 = rat(e.r[1]) * root(e.d1);
  if (e.product) {
    AlgebraicReal f1 = permuted ? t1 + rat(e.r[0]) : rat(e.r[0]) + t1;
    AlgebraicReal f2 = rat(e.r[2]) + rat(e.r[3]) * root(e.d2);
    return permuted ? f2 * f1 : f1 * f2;
  }
  AlgebraicReal t2 = rat(e.r[2]) * root(e.d2);
  if (permuted) return t2 + rat(e.r[0]) + t1;
  return rat(e.r[0]) + t1 + t2;
}

IV expr_oracle(const Expr& e, unsigned prec) {
  IV s1 = iv_scale(iv_sqrt_int(e.d1, prec), e.r[1]);
  if (e.product) {
    IV f1 = iv_add(iv_point(e.r[0]), s1);
    IV f2 = iv_add(iv_point(e.r[2]), iv_scale(iv_sqrt_int(e.d2, prec), e.r[3]));
    return iv_mul(f1, f2);
  }
  IV s2 = iv_scale(iv_sqrt_int(e.d2, prec), e.r[2]);
  return iv_add(iv_add(iv_point(e.r[0]), s1), s2);
}

void criterion1() {
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    Expr ex = random_expr();
    bool force_equal = t % 5 == 0;
    Expr ey = force_equal ? ex : random_expr();
    AlgebraicReal x = expr_value(ex, false);
    AlgebraicReal y = expr_value(ey, force_equal);
    int expected = 0;
    bool decided = false;
    for (unsigned prec : {350u, 700u}) {  // 100 decimal digits and beyond
      IV ix = expr_oracle(ex, prec), iy = expr_oracle(ey, prec);
      if (ix.hi < iy.lo) {
        expected = -1;
        decided = true;
      } else if (iy.hi < ix.lo) {
        expected = 1;
        decided = true;
      }
      if (decided) break;
    }
    // enclosures still overlapping at 700 bits: the values are equal for
    // every pair this generator can produce
    if (AlgebraicReal::compare(x, y) != expected) ++mismatches;
    if (force_equal && decided) ++mismatches;
  }
  // quadratic_root outputs satisfy their defining quadratic exactly
  for (int t = 0; t < 100; ++t) {
    long a = rnd(1, 9), b = rnd(-9, 9);
    long c = rnd(-9, (b * b) / (4 * a));  // keep the discriminant positive
    if (b * b - 4 * a * c <= 0) continue;
    for (auto br : {AlgebraicReal::Branch::Plus, AlgebraicReal::Branch::Minus}) {
      AlgebraicReal x = AlgebraicReal::quadratic_root(
          RingElem(Z, a), RingElem(Z, b), RingElem(Z, c), br);
      AlgebraicReal lhs = AlgebraicReal::from_rational(a) * x * x +
                          AlgebraicReal::from_rational(b) * x +
                          AlgebraicReal::from_rational(c);
      if (lhs.sign() != 0) ++mismatches;
    }
  }
  report(1, "exact kernel vs 100-digit interval oracle", mismatches == 0,
         mismatches ? std::to_string(mismatches) + " mismatches" : "");
}

// ---- shared H(Z[sqrt2]) material ----------------------------------------

// bump over Z[sqrt2] that is the identity on a neighbourhood of infinity
PiecewiseMap s2_bump() {
  ProjMatrix m0(s2e(1, 1), RingElem::zero(S2), RingElem::zero(S2), s2e(-1, 1));
  ProjMatrix u(RingElem::one(S2), RingElem::zero(S2), RingElem::one(S2),
               RingElem::one(S2));
  return bump_of(u * m0 * u.inverse(), 1);
}

std::vector<PiecewiseMap> h_s2_generators() {
  PiecewiseMap s = s2_bump();
  PiecewiseMap hs = commuting_witness({s});
  ProjMatrix g(RingElem::zero(S2), RingElem(S2, -1), RingElem::one(S2),
               s2e(0, 1));
  PiecewiseMap om = orbit_match(g, ProjPoint::rational(1)).h;
  PiecewiseMap t1 = PiecewiseMap::global(
      ProjMatrix(RingElem::one(S2), RingElem::one(S2), RingElem::zero(S2),
                 RingElem::one(S2)));
  PiecewiseMap t2 = PiecewiseMap::global(
      ProjMatrix(RingElem::one(S2), s2e(0, 1), RingElem::zero(S2),
                 RingElem::one(S2)));
  return {s, hs, om, t1, t2};
}

std::vector<PiecewiseMap> random_word_pool(const std::vector<PiecewiseMap>& gens,
                                           int count, int max_len) {
  std::vector<PiecewiseMap> pool;
  for (int i = 0; i < count; ++i) {
    // mostly short words, with a tail reaching the maximum length
    int len = static_cast<int>(std::min(
        {rnd(1, max_len), rnd(1, max_len), rnd(1, max_len)}));
    if (i < 2) len = max_len;
    PiecewiseMap w = PiecewiseMap::identity(gens[0].ring());
    for (int j = 0; j < len; ++j) {
      const PiecewiseMap& g = gens[static_cast<std::size_t>(
          rnd(0, static_cast<long>(gens.size()) - 1))];
      w = w * (rnd(0, 1) ? g : g.inverse());
    }
    pool.push_back(std::move(w));
  }
  return pool;
}

// pool for the order and torsion checks: distinct upper-triangular globals
// fixing infinity mixed with short random words
std::vector<PiecewiseMap> mixed_pool(const std::vector<PiecewiseMap>& gens) {
  std::vector<PiecewiseMap> pool;
  RingElem lambda = s2e(1, 1);    // fundamental unit 1 + sqrt2
  RingElem lam_inv = s2e(-1, 1);  // its inverse
  for (int e = -1; e <= 1; ++e)
    for (long a = -3; a <= 3; ++a)
      for (long b = -2; b <= 2; ++b) {
        RingElem u = e == 0 ? RingElem::one(S2) : (e > 0 ? lambda : lam_inv);
        RingElem d = e == 0 ? RingElem::one(S2) : (e > 0 ? lam_inv : lambda);
        pool.push_back(PiecewiseMap::global(
            ProjMatrix(u, s2e(a, b), RingElem::zero(S2), d)));
      }
  for (int i = 0; i < 50; ++i) {
    int len = i < 10 ? 3 : 2;
    PiecewiseMap w = PiecewiseMap::identity(S2);
    for (int j = 0; j < len; ++j) {
      const PiecewiseMap& g = gens[static_cast<std::size_t>(
          rnd(0, static_cast<long>(gens.size()) - 1))];
      w = w * (rnd(0, 1) ? g : g.inverse());
    }
    pool.push_back(std::move(w));
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  return pool;
}

void criterion2(const std::vector<PiecewiseMap>& pool) {
  PiecewiseMap id = PiecewiseMap::identity(S2);
  std::vector<ProjPoint> pts;
  for (int i = -10; i < 10; ++i) pts.push_back(ProjPoint::rational(i));
  int bad = 0;
  std::vector<PiecewiseMap> invs;
  for (const PiecewiseMap& w : pool) invs.push_back(w.inverse());
  auto pick = [&]() -> std::size_t {
    return static_cast<std::size_t>(
        rnd(0, static_cast<long>(pool.size()) - 1));
  };
  for (int t = 0; t < 200; ++t) {
    std::size_t ia = pick();
    const PiecewiseMap &a = pool[ia], &b = pool[pick()], &c = pool[pick()];
    PiecewiseMap ab = a * b;
    if ((ab * c) != (a * (b * c))) ++bad;
    if (!(a * invs[ia]).is_identity() || !(invs[ia] * a).is_identity()) ++bad;
    if (a * id != a || id * a != a) ++bad;
    for (const ProjPoint& x : pts)
      if (ab.eval(x) != a.eval(b.eval(x))) ++bad;
  }
  report(2, "group axioms and eval homomorphism in H(Z[sqrt2])", bad == 0,
         bad ? std::to_string(bad) + " violations" : "");
}

void criterion3() {
  std::vector<ProjMatrix> gens{
      ProjMatrix(RingElem::one(S2), s2e(0, 1), RingElem::zero(S2),
                 RingElem::one(S2)),
      ProjMatrix(s2e(1, 1), RingElem::zero(S2), RingElem::zero(S2),
                 s2e(-1, 1)),
      ProjMatrix(RingElem::zero(S2), RingElem(S2, -1), RingElem::one(S2),
                 RingElem::zero(S2)),
      ProjMatrix(RingElem::one(S2), RingElem::one(S2), RingElem::zero(S2),
                 RingElem::one(S2))};
  int bad = 0, done = 0;
  while (done < 50) {
    ProjMatrix g = ProjMatrix::identity(S2);
    int len = static_cast<int>(rnd(1, 4));
    for (int i = 0; i < len; ++i)
      g = g * gens[static_cast<std::size_t>(rnd(0, 3))];
    ProjPoint p = ProjPoint::rational(rnd_rational());
    if (g.apply(p).is_infinity() || g.is_identity()) continue;
    OrbitMatchResult r = orbit_match(g, p);
    if (!r.h.fixes_infinity()) ++bad;
    if (r.h.eval(p) != g.apply(p)) ++bad;
    // re-run the validating constructor over the output pieces so every
    // breakpoint witness is checked again
    if (!r.h.is_global()) {
      std::vector<Piece> copy = r.h.pieces();
      if (PiecewiseMap::from_pieces(r.h.ring(), std::move(copy)) != r.h) ++bad;
    }
    ++done;
  }
  OrbitMatchResult w = orbit_match(M(0, -1, 1, 0), ProjPoint::rational(1));
  if (!w.r || *w.r != RingElem(Z, 3)) ++bad;
  AlgebraicReal xi_p = qroot(1, 3, 1, AlgebraicReal::Branch::Plus);
  AlgebraicReal xi_m = qroot(1, 3, 1, AlgebraicReal::Branch::Minus);
  auto fps = w.q0->fixed_points();
  bool match = fps.size() == 2 &&
               ((fps[0].first == ProjPoint::affine(xi_p) &&
                 fps[1].first == ProjPoint::affine(xi_m)) ||
                (fps[0].first == ProjPoint::affine(xi_m) &&
                 fps[1].first == ProjPoint::affine(xi_p)));
  if (!match) ++bad;
  report(3, "orbit matching, 50 randomized pairs + worked instance", bad == 0,
         bad ? std::to_string(bad) + " violations" : "");
}

void criterion4() {
  int bad = 0, done = 0;
  AlgebraicReal one = AlgebraicReal::from_rational(1);
  AlgebraicReal zero = AlgebraicReal::from_rational(0);
  while (done < 30) {
    ProjMatrix t = random_psl2z(static_cast<int>(rnd(1, 2)));
    ProjMatrix w = t * M(2, 1, 1, 1) * t.inverse();
    auto fps = w.fixed_points();
    ProjPoint p = fps[0].first;  // attracting, always finite for these words
    PiecewiseMap f = bump_of(w, 1);
    // conjugating partner supported in a rational window beyond p
    mpq_class pa = p.value().approx(10);
    long c = static_cast<long>(
                 mpz_class(pa.get_num() / pa.get_den()).get_si()) +
             2;
    PiecewiseMap v = bump_in_arcs(Arc::rational(c, c + mpq_class(1, 4)),
                                  Arc::rational(c + mpq_class(5, 4),
                                                c + mpq_class(3, 2)),
                                  1);
    PiecewiseMap g = v * f * v.inverse();
    if (g.eval(p) != p) ++bad;
    PiecewiseMap w2 = eval_word(FreeWord::second_derived(), {f, g});
    for (Side side : {Side::Left, Side::Right}) {
      Germ germ = w2.germ(p, side);
      if (germ.multiplier != one || germ.curvature != zero) ++bad;
    }
    SupportSet supp = w2.support();
    if (supp.full_circle) ++bad;
    for (const Arc& a : supp.arcs)
      if (a.contains(p) || a.start() == p || a.end() == p) ++bad;
    ++done;
  }
  report(4, "second-derived word trivial near a common fixed point",
         bad == 0, bad ? std::to_string(bad) + " violations" : "");
}

void criterion5() {
  int bad = 0;
  PiecewiseMap f = PiecewiseMap::global(M(1, 1, 0, 1));
  for (long k = 0; k < 10; ++k) {
    PiecewiseMap g = bump_in_arcs(Arc::rational(k, k + mpq_class(1, 4)),
                                  Arc::rational(k + mpq_class(5, 4),
                                                k + mpq_class(3, 2)),
                                  1);
    ClassifyOutcome out = classify_pair(f, g, 4000);
    if (out.kind != ClassifyOutcome::Kind::Witness) {
      ++bad;
      continue;
    }
    SupportSet s1 = out.w1->support(), sY = out.w2->support();
    if (s1.full_circle || sY.full_circle) ++bad;
    for (const Arc& a : s1.arcs)
      for (const Arc& b : sY.arcs)
        if (arcs_intersect(a, b)) ++bad;
    PiecewiseMap comm = *out.w1 * *out.w2 * out.w1->inverse() *
                        out.w2->inverse();
    if (!comm.is_identity()) ++bad;
    // w1^m w2^n = id iff w1^m = w2^-n, so precomputed powers settle all
    // mixed products without forming them
    auto powers = [](const PiecewiseMap& w) {
      std::vector<PiecewiseMap> ps{w, w * w};
      ps.push_back(ps[1] * w);
      for (int i = 0; i < 3; ++i) ps.push_back(ps[static_cast<std::size_t>(i)].inverse());
      return ps;
    };
    std::vector<PiecewiseMap> p1s = powers(*out.w1), p2s = powers(*out.w2);
    for (const PiecewiseMap& a : p1s) {
      if (a.is_identity()) ++bad;
      for (const PiecewiseMap& b : p2s)
        if (a == b) ++bad;
    }
    for (const PiecewiseMap& b : p2s)
      if (b.is_identity()) ++bad;
  }
  report(5, "classify_pair on 10 engineered pairs yields verified witnesses",
         bad == 0, bad ? std::to_string(bad) + " violations" : "");
}

void criterion6() {
  int bad = 0;
  for (int t = 0; t < 20; ++t) {
    mpq_class p = mpq_class(rnd(-15, 15), rnd(1, 3));
    mpq_class u1 = p - mpq_class(rnd(1, 6), rnd(1, 3));
    mpq_class u2 = p + mpq_class(rnd(1, 6), rnd(1, 3));
    mpq_class v2 = u2 + mpq_class(rnd(1, 9), rnd(1, 3));
    mpq_class v1 = u1 - mpq_class(rnd(1, 9), rnd(1, 3));
    Arc U = Arc::rational(u1, u2);
    Arc V = Arc::rational(v2, v1);  // through infinity
    PiecewiseMap g = contraction_map(ProjPoint::rational(p), U, V);
    std::vector<ProjPoint> samples{ProjPoint::rational(u1),
                                   ProjPoint::rational(u2)};
    for (int i = 1; i <= 5; ++i) {
      samples.push_back(ProjPoint::rational(u2 + i * (v2 - u2 + 1)));
      samples.push_back(ProjPoint::rational(u1 - i * (u1 - v1 + 1)));
    }
    samples.push_back(ProjPoint::infinity());
    samples.push_back(ProjPoint::rational(v2 + 100));
    for (const ProjPoint& x : samples)
      if (!V.contains(g.eval(x))) ++bad;
  }
  report(6, "contraction maps send the complement of U into V", bad == 0,
         bad ? std::to_string(bad) + " violations" : "");
}

void criterion7() {
  int bad = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<PiecewiseMap> S;
    int n = static_cast<int>(rnd(1, 3));
    for (int i = 0; i < n; ++i) {
      long c = rnd(-6, 6);
      S.push_back(bump_in_arcs(Arc::rational(c, c + mpq_class(1, 4)),
                               Arc::rational(c + mpq_class(5, 4),
                                             c + mpq_class(3, 2)),
                               1));
    }
    PiecewiseMap h = commuting_witness(S);
    if (h.is_identity()) ++bad;
    for (const PiecewiseMap& s : S)
      if (h * s != s * h) ++bad;
  }
  report(7, "commuting witnesses for 20 randomized families", bad == 0,
         bad ? std::to_string(bad) + " violations" : "");
}

void criterion8(const std::vector<PiecewiseMap>& raw_pool) {
  // distinct pool of 100 elements, deduplicated by exact equality behind a
  // cheap evaluation fingerprint
  std::vector<PiecewiseMap> pool;
  std::set<std::string> prints;
  std::vector<ProjPoint> probe{ProjPoint::rational(mpq_class(1, 3)),
                               ProjPoint::rational(mpq_class(7, 5)),
                               ProjPoint::rational(mpq_class(-9, 2))};
  for (const PiecewiseMap& w : raw_pool) {
    std::string fp;
    for (const ProjPoint& x : probe) {
      ProjPoint y = w.eval(x);
      fp += y.is_infinity() ? std::string("inf")
                            : y.value().approx(40).get_str();
      fp += '|';
    }
    if (!prints.insert(fp).second) continue;
    pool.push_back(w);
    if (pool.size() == 100) break;
  }
  int bad = pool.size() == 100 ? 0 : 1;

  auto pick = [&]() -> const PiecewiseMap& {
    return pool[static_cast<std::size_t>(
        rnd(0, static_cast<long>(pool.size()) - 1))];
  };
  for (int t = 0; t < 100; ++t) {
    const PiecewiseMap &f = pick(), &g = pick();
    OrderRel fg = biorder_compare(f, g), gf = biorder_compare(g, f);
    bool anti = (fg == OrderRel::Equal && gf == OrderRel::Equal) ||
                (fg == OrderRel::Less && gf == OrderRel::Greater) ||
                (fg == OrderRel::Greater && gf == OrderRel::Less);
    if (!anti) ++bad;
    if ((fg == OrderRel::Equal) != (f == g)) ++bad;
    if (biorder_compare(f, f) != OrderRel::Equal) ++bad;
  }
  auto positive_of = [&]() -> PiecewiseMap {
    while (true) {
      const PiecewiseMap& h = pick();
      if (h.is_identity()) continue;
      if (biorder_positive(h) == OrderSign::Positive) return h;
      return h.inverse();
    }
  };
  for (int t = 0; t < 100; ++t) {
    PiecewiseMap h = positive_of();
    const PiecewiseMap& u = pick();
    if (biorder_positive(u * h * u.inverse()) != OrderSign::Positive) ++bad;
  }
  for (int t = 0; t < 100; ++t) {
    PiecewiseMap prod = positive_of() * positive_of();
    if (prod.is_identity() ||
        biorder_positive(prod) != OrderSign::Positive)
      ++bad;
  }
  report(8, "bi-order trichotomy, antisymmetry, invariance on a 100-pool",
         bad == 0, bad ? std::to_string(bad) + " violations" : "");
}

void criterion9() {
  const mpq_class h = mpq_class(1, 1 << 20);
  const AlgebraicReal tol =
      AlgebraicReal::from_rational(mpq_class(1, 1 << 10));
  int bad = 0, done = 0;

  // exact evaluation in the chart at the fixed point; nullopt at a pole
  auto chart_eval = [](const PiecewiseMap& f, bool at_inf,
                       const mpq_class& y) -> std::optional<mpq_class> {
    ProjPoint x = at_inf ? (y == 0 ? ProjPoint::infinity()
                                   : ProjPoint::rational(mpq_class(-1) / y))
                         : ProjPoint::rational(y);
    ProjPoint img = f.eval(x);
    if (at_inf) {
      if (img.is_infinity()) return mpq_class(0);
      if (img.value().sign() == 0) return std::nullopt;
      if (!img.value().is_rational()) return std::nullopt;
      return mpq_class(-1) / img.value().rational_value();
    }
    if (img.is_infinity() || !img.value().is_rational()) return std::nullopt;
    return img.value().rational_value();
  };

  while (done < 50) {
    PiecewiseMap f = PiecewiseMap::identity(Z);
    if (done % 10 == 3) {
      // translation: fixed point at infinity, nonzero chart curvature
      f = PiecewiseMap::global(M(1, rnd(1, 5), 0, 1));
    } else if (done % 10 == 8) {
      // diagonal over Z[1/2]: zero curvature at both fixed points
      BaseRing z2 = BaseRing::localized(2);
      f = PiecewiseMap::global(ProjMatrix(RingElem(z2, 2), RingElem::zero(z2),
                                          RingElem::zero(z2),
                                          RingElem::localized(z2, 1, 1)));
    } else if (done % 5 == 4) {
      // bump with germ discontinuity across its breakpoints
      ProjMatrix t = random_psl2z(static_cast<int>(rnd(1, 3)));
      f = bump_of(t * M(2, 1, 1, 1) * t.inverse(), 1);
    } else {
      ProjMatrix t = random_psl2z(static_cast<int>(rnd(1, 4)));
      ProjMatrix w = t * M(2, 1, 1, 1) * t.inverse();
      f = PiecewiseMap::global(w);
    }
    // pick a fixed point of the underlying hyperbolic matrix
    const ProjMatrix& w = f.is_global() ? f.global_matrix()
                                        : f.pieces()[0].witness;
    auto fps = w.fixed_points();
    const ProjPoint& p =
        fps[static_cast<std::size_t>(
                rnd(0, static_cast<long>(fps.size()) - 1))]
            .first;
    if (f.eval(p) != p) continue;

    bool at_inf = p.is_infinity();
    mpq_class y0 = at_inf ? mpq_class(0) : p.value().approx(60);
    bool ok_pair = true;
    for (Side side : {Side::Left, Side::Right}) {
      mpq_class step = side == Side::Right ? h : mpq_class(-h);
      if (at_inf && side == Side::Left) step = -step;  // chart reverses sides
      auto f0 = chart_eval(f, at_inf, y0);
      auto f1 = chart_eval(f, at_inf, y0 + step);
      auto f2 = chart_eval(f, at_inf, y0 + 2 * step);
      if (!f0 || !f1 || !f2) {
        ok_pair = false;
        break;
      }
      mpq_class fd1 = (*f1 - *f0) / step;
      mpq_class fd2 = (*f2 - 2 * *f1 + *f0) / (step * step);
      Germ germ = f.germ(p, side);
      AlgebraicReal e1 = AlgebraicReal::from_rational(fd1) - germ.multiplier;
      if (e1.sign() < 0) e1 = -e1;
      AlgebraicReal m1 = germ.multiplier;
      if (m1.sign() < 0) m1 = -m1;
      if (e1 > tol * m1) ++bad;
      AlgebraicReal e2 = AlgebraicReal::from_rational(fd2) - germ.curvature;
      if (e2.sign() < 0) e2 = -e2;
      AlgebraicReal m2 = germ.curvature;
      if (m2.sign() < 0) m2 = -m2;
      if (m2.sign() == 0 ? e2 > tol : e2 > tol * m2) ++bad;
    }
    if (!ok_pair) continue;
    ++done;
  }
  report(9, "germ multipliers and curvatures vs 2^-20 finite differences",
         bad == 0, bad ? std::to_string(bad) + " violations" : "");
}

void criterion10() {
  PiecewiseMap q = [] {
    ProjMatrix w = M(0, -1, 1, 3);
    ProjPoint lo =
        ProjPoint::affine(qroot(1, 3, 1, AlgebraicReal::Branch::Minus));
    ProjPoint hi =
        ProjPoint::affine(qroot(1, 3, 1, AlgebraicReal::Branch::Plus));
    std::vector<Piece> ps{{lo, w, ProjMatrix::identity(Z)}, {hi, w, w}};
    return PiecewiseMap::from_pieces(Z, std::move(ps));
  }();
  Json base = map_to_json(q);
  Json phi = alg_to_json(qroot(1, -1, -1, AlgebraicReal::Branch::Plus));
  Json psi = alg_to_json(qroot(1, -1, -1, AlgebraicReal::Branch::Minus));

  std::vector<std::pair<std::function<void(Json&)>, ErrorCode>> cases;
  auto add = [&](std::function<void(Json&)> mut, ErrorCode ec) {
    cases.emplace_back(std::move(mut), ec);
  };
  // breakpoint not fixed by its witness
  add([&](Json& j) { j["pieces"][0]["breakpoint"] = phi; },
      ErrorCode::BadWitness);
  add([&](Json& j) { j["pieces"][1]["breakpoint"] = psi; },
      ErrorCode::BadWitness);
  // witness hyperbolic but fixing other points / elliptic / parabolic
  add([&](Json& j) { j["pieces"][0]["witness"] = matrix_to_json(M(2, 1, 1, 1)); },
      ErrorCode::BadWitness);
  add([&](Json& j) { j["pieces"][1]["witness"] = matrix_to_json(M(0, -1, 1, 0)); },
      ErrorCode::BadWitness);
  add([&](Json& j) { j["pieces"][0]["witness"] = matrix_to_json(M(1, 1, 0, 1)); },
      ErrorCode::BadWitness);
  // determinant corruption
  add([&](Json& j) { j["pieces"][0]["matrix"][0][0] = 5; },
      ErrorCode::ValidationError);
  add([&](Json& j) { j["pieces"][1]["matrix"][0][1] = 0; },
      ErrorCode::ValidationError);
  // continuity broken by a valid but wrong matrix
  add([&](Json& j) { j["pieces"][1]["matrix"] = matrix_to_json(M(1, 1, 0, 1)); },
      ErrorCode::Discontinuous);
  add([&](Json& j) { j["pieces"][0]["matrix"] = matrix_to_json(M(2, 3, 1, 2)); },
      ErrorCode::Discontinuous);
  add([&](Json& j) { j["pieces"][1]["matrix"] = matrix_to_json(M(0, -1, 1, 2)); },
      ErrorCode::Discontinuous);
  // duplicated breakpoints
  add([&](Json& j) { j["pieces"][0]["breakpoint"] = j["pieces"][1]["breakpoint"]; },
      ErrorCode::UnorderedBreakpoints);
  add([&](Json& j) { j["pieces"][1]["breakpoint"] = j["pieces"][0]["breakpoint"]; },
      ErrorCode::UnorderedBreakpoints);
  // malformed algebraic breakpoint payloads
  add([&](Json& j) { j["pieces"][0]["breakpoint"]["minpoly"] = Json::array(); },
      ErrorCode::ParseError);
  add([&](Json& j) { j["pieces"][0]["breakpoint"]["minpoly"] =
                         Json::array({1, 2, 1}); },
      ErrorCode::ValidationError);
  add([&](Json& j) { j["pieces"][0]["breakpoint"]["lo"] = "10"; },
      ErrorCode::ValidationError);
  add([&](Json& j) { j["pieces"][1]["breakpoint"].erase("hi"); },
      ErrorCode::ParseError);
  // structural field corruptions
  add([&](Json& j) { j["ring"]["type"] = "Q"; }, ErrorCode::ParseError);
  add([&](Json& j) { j.erase("ring"); }, ErrorCode::ParseError);
  add([&](Json& j) { j["pieces"] = Json::array(); }, ErrorCode::ParseError);
  add([&](Json& j) { j["pieces"][0].erase("witness"); }, ErrorCode::ParseError);

  int bad = 0;
  for (const auto& [mutate, expected] : cases) {
    Json j = base;
    mutate(j);
    if (code_of([&] { map_from_json(j); }) != expected) ++bad;
  }
  bool count_ok = cases.size() == 20;
  report(10, "20 single-field corruptions rejected with the right class",
         bad == 0 && count_ok,
         !count_ok ? "case count " + std::to_string(cases.size())
                   : (bad ? std::to_string(bad) + " wrong classes" : ""));
}

void criterion11() {
  int bad = 0;
  PingPongResult pp = pingpong_certificate(
      M(1, 2, 0, 1), M(1, 0, 2, 1),
      Arc(ProjPoint::rational(1), ProjPoint::infinity()),
      Arc(ProjPoint::infinity(), ProjPoint::rational(-1)),
      Arc::rational(0, 1), Arc::rational(-1, 0));
  if (!pp.verified) ++bad;

  ProjMatrix m = small_element(S2, mpq_class(1, 1000000));
  if (m.is_identity()) ++bad;
  // off-diagonal entry is (sqrt2 - 1)^16
  RingElem expect = RingElem::one(S2);
  for (int i = 0; i < 16; ++i) expect = expect * s2e(-1, 1);
  if (m.b() != expect && m.c() != expect) ++bad;
  AlgebraicReal eps = AlgebraicReal::from_rational(mpq_class(1, 1000000));
  AlgebraicReal one = AlgebraicReal::from_rational(1);
  auto close = [&](const RingElem& x, const AlgebraicReal& target) {
    AlgebraicReal d = AlgebraicReal::from_ring(x) - target;
    if (d.sign() < 0) d = -d;
    return d < eps;
  };
  if (!close(m.a(), one) || !close(m.d(), one) ||
      !close(m.b(), AlgebraicReal::from_rational(0)) ||
      !close(m.c(), AlgebraicReal::from_rational(0)))
    ++bad;
  report(11, "classical ping-pong verifies; small element at 10^-6 is (sqrt2-1)^16",
         bad == 0, bad ? std::to_string(bad) + " violations" : "");
}

void criterion12(const std::vector<PiecewiseMap>& pool) {
  int bad = 0, done = 0;
  std::size_t i = 0;
  while (done < 50 && i < pool.size()) {
    const PiecewiseMap& g = pool[i++];
    if (g.is_identity()) continue;
    PiecewiseMap p = g;
    for (int k = 1; k <= 6; ++k) {
      if (p.is_identity()) ++bad;
      if (k < 6) p = p * g;
    }
    ++done;
  }
  if (done < 50) ++bad;
  report(12, "50 nontrivial elements of H(Z[sqrt2]) are torsion-free to power 6",
         bad == 0, bad ? std::to_string(bad) + " violations" : "");
}

}  // namespace

int main() {
  try {
    criterion1();
    std::vector<PiecewiseMap> gens = h_s2_generators();
    criterion2(random_word_pool(gens, 40, 6));
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    std::vector<PiecewiseMap> pool8 = mixed_pool(gens);
    criterion8(pool8);
    criterion9();
    criterion10();
    criterion11();
    criterion12(pool8);
  } catch (const Error& e) {
    std::printf("FAIL unexpected exception: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
