#include "pph/constructions.hpp"

#include <algorithm>
#include <set>

#include "pph/errors.hpp"

namespace pph {

namespace {

mpz_class qfloor(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

// integer strictly above / below the algebraic value
mpq_class int_above(const AlgebraicReal& x) {
  return mpq_class(qfloor(x.refined(4).second) + 1);
}
mpq_class int_below(const AlgebraicReal& x) {
  return mpq_class(qfloor(x.refined(4).first) - 1);
}

// parabolic element of PSL2(Z) fixing the rational x = p/q
ProjMatrix parabolic_fixing(const mpq_class& x) {
  const BaseRing Z = BaseRing::integers();
  mpz_class p = x.get_num(), q = x.get_den();
  return ProjMatrix(RingElem(Z, 1 - p * q), RingElem(Z, p * p),
                    RingElem(Z, -q * q), RingElem(Z, 1 + p * q));
}

bool germ_trivial(const Germ& g) {
  return g.multiplier == AlgebraicReal::from_rational(1) &&
         g.curvature.sign() == 0;
}

}  // namespace

mpq_class rational_in_arc(const Arc& arc) {
  const ProjPoint &s = arc.start(), &e = arc.end();
  if (arc.is_punctured_circle())
    return s.is_infinity() ? mpq_class(0) : int_above(s.value());
  if (s.is_infinity()) return int_below(e.value());
  if (e.is_infinity()) return int_above(s.value());
  if (AlgebraicReal::compare(s.value(), e.value()) > 0)
    return int_above(s.value());  // the arc wraps through infinity
  unsigned k = 8;
  while (true) {
    mpq_class shi = s.value().refined(k).second;
    mpq_class elo = e.value().refined(k).first;
    if (shi < elo) return (shi + elo) / 2;
    k *= 2;
  }
}

// ---- orbit_match --------------------------------------------------------

OrbitMatchResult orbit_match(const ProjMatrix& g, const ProjPoint& p) {
  ProjPoint gp = g.apply(p);
  if (gp.is_infinity())
    fail(ErrorCode::PreconditionViolated, "g maps p to infinity");
  const ProjPoint inf = ProjPoint::infinity();
  if (g.apply(inf).is_infinity())
    return {PiecewiseMap::global(g), std::nullopt, std::nullopt};
  ProjPoint ginf = g.apply(inf);
  const BaseRing& A = g.ring();

  for (long mag = 1; mag <= 64; ++mag) {
    for (int sg : {+1, -1}) {
      RingElem r(A, mag * sg);
      ProjMatrix q0(g.a(), g.b() + r * g.a(), g.c(), g.d() + r * g.c());
      if (q0.classify() != MatClass::Hyperbolic) continue;
      auto fps = q0.fixed_points();
      ProjPoint x = fps[0].first, y = fps[1].first;
      if (ProjPoint::order(y, x) < 0) std::swap(x, y);
      Arc a1(x, y), a2(y, x);
      bool gp1 = a1.contains(gp) && a2.contains(inf) && a2.contains(ginf);
      bool gp2 = a2.contains(gp) && a1.contains(inf) && a1.contains(ginf);
      if (!gp1 && !gp2) continue;
      // q: identity on the component holding g p, q0 on the other
      ProjMatrix id = ProjMatrix::identity(A);
      std::vector<Piece> pcs{{x, q0, gp1 ? id : q0}, {y, q0, gp1 ? q0 : id}};
      PiecewiseMap q = PiecewiseMap::from_pieces(A, std::move(pcs));
      PiecewiseMap h = q.inverse() * PiecewiseMap::global(g);
      return {std::move(h), std::move(r), std::move(q0)};
    }
  }
  fail(ErrorCode::BudgetExceeded, "no admissible r up to |r| = 64");
}

// ---- hyperbolic_in_arcs -------------------------------------------------

ProjMatrix hyperbolic_in_arcs(const Arc& repelling, const Arc& attracting) {
  if (arcs_intersect(repelling, attracting))
    fail(ErrorCode::InvalidArcs, "the arcs overlap");
  const BaseRing Z = BaseRing::integers();
  const ProjMatrix S = ProjMatrix::from_ints(Z, 1, 1, 0, 1);
  const ProjMatrix Sinv = S.inverse();
  const ProjMatrix T = ProjMatrix::from_ints(Z, 0, -1, 1, 0);
  const ProjMatrix M = ProjMatrix::from_ints(Z, 2, 1, 1, 1);

  auto accept = [&](const ProjMatrix& m) {
    auto fps = m.fixed_points();  // attracting first
    return attracting.contains(fps[0].first) && repelling.contains(fps[1].first);
  };

  // conjugates t M t^-1, t breadth-first by word length in S, T
  std::vector<ProjMatrix> layer{ProjMatrix::identity(Z)};
  std::set<std::string> seen_t{layer[0].str()}, seen_m;
  std::size_t budget = 4000;
  for (int depth = 0; depth <= 9 && budget > 0; ++depth) {
    for (const ProjMatrix& t : layer) {
      ProjMatrix m = t * M * t.inverse();
      if (!seen_m.insert(m.str()).second) continue;
      if (budget == 0) break;
      --budget;
      if (accept(m)) return m;
    }
    std::vector<ProjMatrix> next;
    for (const ProjMatrix& t : layer)
      for (const ProjMatrix* gen : {&S, &Sinv, &T}) {
        ProjMatrix cand = t * *gen;
        if (seen_t.insert(cand.str()).second) next.push_back(std::move(cand));
      }
    layer = std::move(next);
  }

  // dense fallback: products of high parabolic powers pinching the two
  // chosen rational points
  ProjMatrix pa = parabolic_fixing(rational_in_arc(attracting));
  ProjMatrix pr = parabolic_fixing(rational_in_arc(repelling));
  for (long n = 1; n <= 60; ++n) {
    ProjMatrix m = pa.pow(n) * pr.pow(-n);
    if (m.classify() != MatClass::Hyperbolic) continue;
    if (accept(m)) return m;
  }
  fail(ErrorCode::BudgetExceeded, "hyperbolic element search exhausted");
}

// ---- contraction_map ----------------------------------------------------

PiecewiseMap contraction_map(const ProjPoint& p, const Arc& U, const Arc& V) {
  const ProjPoint inf = ProjPoint::infinity();
  if (!U.contains(p))
    fail(ErrorCode::PreconditionViolated, "p must lie in U");
  if (!V.contains(inf))
    fail(ErrorCode::PreconditionViolated, "infinity must lie in V");
  if (arcs_intersect(U, V))
    fail(ErrorCode::PreconditionViolated, "U and V must be disjoint");

  // cyclic layout: inf, a1, r1, p, r2, a2; h_i hyperbolic with repelling
  // fixed point r_i and attracting a_i
  ProjMatrix h1 = hyperbolic_in_arcs(Arc(U.start(), p), Arc(inf, V.end()));
  ProjMatrix h2 = hyperbolic_in_arcs(Arc(p, U.end()), Arc(V.start(), inf));
  auto f1 = h1.fixed_points(), f2 = h2.fixed_points();
  const ProjPoint &a1 = f1[0].first, &r1 = f1[1].first;
  const ProjPoint &a2 = f2[0].first, &r2 = f2[1].first;

  // smallest N with both boundary images of P^1 \ U inside V
  Arc left_target(a1, V.end()), right_target(V.start(), a2);
  for (long n = 1; n <= 64; ++n) {
    ProjMatrix h1n = h1.pow(n), h2n = h2.pow(n);
    if (!left_target.contains(h1n.apply(U.start()))) continue;
    if (!right_target.contains(h2n.apply(U.end()))) continue;
    std::vector<Piece> pcs{{a1, h1, h1n},
                           {r1, h1, ProjMatrix::identity(h1.ring())},
                           {r2, h2, h2n},
                           {a2, h2, ProjMatrix::identity(h2.ring())}};
    return PiecewiseMap::from_pieces(h1.ring(), std::move(pcs));
  }
  fail(ErrorCode::BudgetExceeded, "no contracting power up to N = 64");
}

// ---- commuting_witness --------------------------------------------------

PiecewiseMap commuting_witness(const std::vector<PiecewiseMap>& S) {
  BaseRing A = S.empty() ? BaseRing::integers() : S[0].ring();
  std::optional<AlgebraicReal> L, R;
  for (const PiecewiseMap& s : S) {
    if (s.ring() != A)
      fail(ErrorCode::RingMismatch, "elements over different rings");
    if (s.is_identity()) continue;
    if (s.is_global() || s.pieces().front().breakpoint.is_infinity() ||
        !s.pieces().back().matrix.is_identity())
      fail(ErrorCode::PreconditionViolated,
           "element is not the identity near infinity");
    // s is the identity on the arc (last breakpoint, first breakpoint)
    // through infinity
    const AlgebraicReal& l = s.pieces().back().breakpoint.value();
    const AlgebraicReal& r = s.pieces().front().breakpoint.value();
    if (!L || AlgebraicReal::compare(l, *L) > 0) L = l;
    if (!R || AlgebraicReal::compare(r, *R) < 0) R = r;
  }

  const ProjMatrix M = ProjMatrix::from_ints(A, 2, 1, 1, 1);
  for (long n = 1; n <= 256; ++n) {
    ProjMatrix t = ProjMatrix::from_ints(A, 1, n, 0, 1);
    ProjMatrix h0 = t * M * t.inverse();
    auto fps = h0.fixed_points();
    ProjPoint x = fps[0].first, y = fps[1].first;
    if (ProjPoint::order(y, x) < 0) std::swap(x, y);
    if (L) {
      // the whole support arc [x, y] must sit inside the common identity
      // neighborhood of infinity, not just its endpoints
      Arc neigh(ProjPoint::affine(*L), ProjPoint::affine(*R));
      if (!arc_subset(Arc(x, y), neigh)) continue;
    }
    std::vector<Piece> pcs{{x, h0, h0}, {y, h0, ProjMatrix::identity(A)}};
    return PiecewiseMap::from_pieces(A, std::move(pcs));
  }
  fail(ErrorCode::BudgetExceeded, "no admissible conjugating power");
}

// ---- classify_pair ------------------------------------------------------

namespace {

bool support_moved_off_itself(const PiecewiseMap& h, const SupportSet& sup) {
  for (const Arc& x : sup.arcs) {
    Arc img(h.eval(x.start()), h.eval(x.end()));
    for (const Arc& y : sup.arcs)
      if (arcs_intersect(img, y)) return false;
  }
  return true;
}

}  // namespace

ClassifyOutcome classify_pair(const PiecewiseMap& f, const PiecewiseMap& g,
                              unsigned budget) {
  if (f.ring() != g.ring())
    fail(ErrorCode::RingMismatch, "elements over different rings");
  if (!f.fixes_infinity() || !g.fixes_infinity())
    fail(ErrorCode::PreconditionViolated, "both elements must fix infinity");
  const BaseRing& A = f.ring();
  FreeWord w2t = FreeWord::second_derived();

  PiecewiseMap fg = f * g;
  std::vector<std::pair<const PiecewiseMap*, const PiecewiseMap*>> subs{
      {&f, &g}, {&g, &f}, {&f, &fg}, {&fg, &g}, {&g, &fg}, {&fg, &f}};
  std::optional<PiecewiseMap> w1;
  unsigned tried = 0;
  for (auto& [u, v] : subs) {
    if (tried++ >= budget) break;
    PiecewiseMap w = eval_word(w2t, {*u, *v});
    if (!w.is_identity()) {
      w1 = std::move(w);
      break;
    }
  }
  if (!w1)
    return {ClassifyOutcome::Kind::MetabelianEvidence, budget, std::nullopt,
            std::nullopt, std::nullopt};

  SupportSet sup = w1->support();
  if (!sup.full_circle && !sup.arcs.empty()) {
    // breadth-first search in <f, g> for h moving supp(w1) off itself
    std::vector<PiecewiseMap> gens{f, g, f.inverse(), g.inverse()};
    std::vector<PiecewiseMap> all{PiecewiseMap::identity(A)};
    std::size_t frontier_begin = 0, count = 0;
    while (frontier_begin < all.size() && count < budget) {
      std::size_t frontier_end = all.size();
      for (std::size_t i = frontier_begin; i < frontier_end && count < budget;
           ++i)
        for (const PiecewiseMap& gen : gens) {
          if (count >= budget) break;
          PiecewiseMap cand = gen * all[i];
          bool fresh = true;
          for (const PiecewiseMap& seen : all)
            if (seen == cand) {
              fresh = false;
              break;
            }
          if (!fresh) continue;
          ++count;
          if (!cand.is_identity() && support_moved_off_itself(cand, sup)) {
            PiecewiseMap w2 = cand * *w1 * cand.inverse();
            PiecewiseMap comm =
                *w1 * w2 * w1->inverse() * w2.inverse();
            if (comm.is_identity() && !w2.is_identity())
              return {ClassifyOutcome::Kind::Witness, budget, std::move(w1),
                      std::move(w2), std::move(cand)};
          }
          all.push_back(std::move(cand));
        }
      frontier_begin = frontier_end;
    }
  }
  return {ClassifyOutcome::Kind::Unknown, budget, std::nullopt, std::nullopt,
          std::nullopt};
}

// ---- bi-order -----------------------------------------------------------

OrderSign biorder_positive(const PiecewiseMap& h) {
  if (!h.fixes_infinity())
    fail(ErrorCode::NotInH, "element does not fix infinity");
  if (h.is_identity())
    fail(ErrorCode::IdentityHasNoSign, "the identity has no sign");
  auto decide = [](const Germ& g) -> std::optional<OrderSign> {
    int mc = AlgebraicReal::compare(g.multiplier,
                                    AlgebraicReal::from_rational(1));
    if (mc != 0) return mc > 0 ? OrderSign::Positive : OrderSign::Negative;
    int cc = g.curvature.sign();
    if (cc != 0) return cc > 0 ? OrderSign::Positive : OrderSign::Negative;
    return std::nullopt;  // trivial germ
  };
  if (auto s = decide(h.germ(ProjPoint::infinity(), Side::Right))) return *s;
  // advance to the first support boundary point after infinity
  SupportSet sup = h.support();
  std::optional<ProjPoint> first;
  for (const Arc& a : sup.arcs)
    for (const ProjPoint* pt : {&a.start(), &a.end()}) {
      if (pt->is_infinity()) continue;
      if (!first || ProjPoint::order(*pt, *first) < 0) first = *pt;
    }
  if (!first) fail(ErrorCode::InternalError, "no finite support boundary");
  if (auto s = decide(h.germ(*first, Side::Right))) return *s;
  fail(ErrorCode::InternalError, "trivial germ at a support boundary");
}

OrderRel biorder_compare(const PiecewiseMap& f, const PiecewiseMap& g) {
  if (!f.fixes_infinity() || !g.fixes_infinity())
    fail(ErrorCode::NotInH, "elements must fix infinity");
  PiecewiseMap d = f.inverse() * g;
  if (d.is_identity()) return OrderRel::Equal;
  return biorder_positive(d) == OrderSign::Positive ? OrderRel::Less
                                                    : OrderRel::Greater;
}

// ---- ping-pong ----------------------------------------------------------

PingPongResult pingpong_certificate(const ProjMatrix& m1, const ProjMatrix& m2,
                                    const Arc& x1p, const Arc& x1n,
                                    const Arc& x2p, const Arc& x2n) {
  const Arc* arcs[4] = {&x1p, &x1n, &x2p, &x2n};
  static const char* names[4] = {"X1+", "X1-", "X2+", "X2-"};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (arcs_intersect(*arcs[i], *arcs[j]))
        fail(ErrorCode::ArcsNotDisjoint, std::string(names[i]) +
                                             " intersects " + names[j]);

  struct Check {
    ProjMatrix m;
    const Arc* src;
    const Arc* dst;
    std::string label;
  };
  std::vector<Check> checks;
  auto push = [&](const ProjMatrix& m, const Arc* s, const Arc* d,
                  const std::string& label) {
    checks.push_back({m, s, d, label});
  };
  ProjMatrix m1i = m1.inverse(), m2i = m2.inverse();
  push(m1, &x2p, &x1p, "m1(X2+) not inside X1+");
  push(m1, &x2n, &x1p, "m1(X2-) not inside X1+");
  push(m1, &x1p, &x1p, "m1(X1+) not inside X1+");
  push(m1i, &x2p, &x1n, "m1^-1(X2+) not inside X1-");
  push(m1i, &x2n, &x1n, "m1^-1(X2-) not inside X1-");
  push(m1i, &x1n, &x1n, "m1^-1(X1-) not inside X1-");
  push(m2, &x1p, &x2p, "m2(X1+) not inside X2+");
  push(m2, &x1n, &x2p, "m2(X1-) not inside X2+");
  push(m2, &x2p, &x2p, "m2(X2+) not inside X2+");
  push(m2i, &x1p, &x2n, "m2^-1(X1+) not inside X2-");
  push(m2i, &x1n, &x2n, "m2^-1(X1-) not inside X2-");
  push(m2i, &x2n, &x2n, "m2^-1(X2-) not inside X2-");
  for (const Check& c : checks)
    if (!arc_subset(c.src->image(c.m), *c.dst)) return {false, c.label};
  return {true, ""};
}

// ---- small_element ------------------------------------------------------

ProjMatrix small_element(const BaseRing& ring, const mpq_class& eps) {
  if (!ring.dense())
    fail(ErrorCode::NotSupported, "PSL2(Z) is discrete");
  if (eps <= 0)
    fail(ErrorCode::PreconditionViolated, "eps must be positive");
  if (ring.kind() == BaseRing::Kind::QuadraticSqrt2) {
    RingElem t = RingElem::sqrt2(ring, -1, 1);  // sqrt(2) - 1, in (0, 1)
    RingElem pw = RingElem::one(ring);
    for (int n = 1; n <= 4096; ++n) {
      pw = pw * t;
      auto [u, v] = pw.field_pair();
      if (sqrt2_sign(u - eps, v) < 0)
        return ProjMatrix(RingElem::one(ring), pw, RingElem::zero(ring),
                          RingElem::one(ring));
    }
  } else {
    mpz_class den = 1;
    for (unsigned long k = 1; k <= 4096; ++k) {
      den *= ring.ell();
      if (mpq_class(1, den) < eps)
        return ProjMatrix(RingElem::one(ring),
                          RingElem::localized(ring, 1, k), RingElem::zero(ring),
                          RingElem::one(ring));
    }
  }
  fail(ErrorCode::BudgetExceeded, "eps is implausibly small");
}

}  // namespace pph
