#include "pph/piecewise.hpp"

#include <algorithm>
#include <sstream>

#include "pph/errors.hpp"

namespace pph {

namespace {

// Strict cyclic order test for a sequence of >= 1 points: all distinct and
// at most one descent in the cut linear order.
bool strictly_cyclic(const std::vector<ProjPoint>& pts) {
  std::size_t n = pts.size();
  if (n <= 1) return true;
  int descents = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int c = ProjPoint::order(pts[i], pts[(i + 1) % n]);
    if (c == 0) return false;
    if (c > 0) ++descents;
  }
  return descents == 1;
}

}  // namespace

PiecewiseMap PiecewiseMap::global(ProjMatrix m) {
  BaseRing ring = m.ring();
  return PiecewiseMap(ring, std::move(m));
}

PiecewiseMap PiecewiseMap::identity(const BaseRing& ring) {
  return global(ProjMatrix::identity(ring));
}

PiecewiseMap PiecewiseMap::canonicalize(const BaseRing& ring,
                                        std::vector<Piece> pieces) {
  std::size_t n = pieces.size();
  if (n == 0) fail(ErrorCode::ValidationError, "element has no pieces");
  bool all_equal = true;
  for (std::size_t i = 1; i < n && all_equal; ++i)
    all_equal = pieces[i].matrix == pieces[0].matrix;
  if (all_equal) return global(pieces[0].matrix);

  // merge runs of equal adjacent matrices, starting at a run boundary
  std::size_t start = 0;
  while (pieces[(start + n - 1) % n].matrix == pieces[start].matrix) ++start;
  std::vector<Piece> merged;
  for (std::size_t i = 0; i < n; ++i) {
    Piece& p = pieces[(start + i) % n];
    if (merged.empty() || !(merged.back().matrix == p.matrix))
      merged.push_back(std::move(p));
  }
  // rotate the canonically least breakpoint to the front
  std::size_t best = 0;
  for (std::size_t i = 1; i < merged.size(); ++i)
    if (ProjPoint::order(merged[i].breakpoint, merged[best].breakpoint) < 0)
      best = i;
  std::rotate(merged.begin(), merged.begin() + best, merged.end());
  return PiecewiseMap(ring, std::move(merged));
}

PiecewiseMap PiecewiseMap::from_pieces(const BaseRing& ring,
                                       std::vector<Piece> pieces) {
  std::size_t n = pieces.size();
  if (n == 0) fail(ErrorCode::ValidationError, "element has no pieces");
  for (const Piece& p : pieces)
    if (p.matrix.ring() != ring || p.witness.ring() != ring)
      fail(ErrorCode::RingMismatch, "piece data from a different ring");

  std::vector<ProjPoint> bps;
  bps.reserve(n);
  for (const Piece& p : pieces) bps.push_back(p.breakpoint);
  if (!strictly_cyclic(bps))
    fail(ErrorCode::UnorderedBreakpoints,
         "breakpoints are not strictly cyclically ordered");

  for (const Piece& p : pieces) {
    if (p.witness.classify() != MatClass::Hyperbolic)
      fail(ErrorCode::BadWitness, "witness is not hyperbolic");
    if (p.witness.apply(p.breakpoint) != p.breakpoint)
      fail(ErrorCode::BadWitness, "witness does not fix its breakpoint");
  }

  if (n >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const ProjPoint& nb = pieces[(i + 1) % n].breakpoint;
      if (pieces[i].matrix.apply(nb) != pieces[(i + 1) % n].matrix.apply(nb))
        fail(ErrorCode::Discontinuous,
             "adjacent pieces disagree at their shared breakpoint");
    }
    std::vector<ProjPoint> images;
    images.reserve(n);
    for (const Piece& p : pieces) images.push_back(p.matrix.apply(p.breakpoint));
    if (!strictly_cyclic(images))
      fail(ErrorCode::NotInjective,
           "breakpoint images are not strictly cyclically ordered");
  }

  return canonicalize(ring, std::move(pieces));
}

bool PiecewiseMap::is_identity() const {
  return is_global() && global_->is_identity();
}

std::size_t PiecewiseMap::piece_index(const ProjPoint& p) const {
  // pieces_ is sorted ascending in the cut order; piece i covers
  // [bp_i, bp_{i+1}) cyclically
  std::size_t n = pieces_.size();
  if (ProjPoint::order(p, pieces_[0].breakpoint) < 0) return n - 1;
  std::size_t i = 0;
  while (i + 1 < n && ProjPoint::order(pieces_[i + 1].breakpoint, p) <= 0) ++i;
  return i;
}

const ProjMatrix& PiecewiseMap::matrix_at(const ProjPoint& p) const {
  if (is_global()) return *global_;
  return pieces_[piece_index(p)].matrix;
}

ProjPoint PiecewiseMap::eval(const ProjPoint& p) const {
  return matrix_at(p).apply(p);
}

bool PiecewiseMap::fixes_infinity() const {
  return eval(ProjPoint::infinity()).is_infinity();
}

PiecewiseMap PiecewiseMap::inverse() const {
  if (is_global()) return global(global_->inverse());
  std::vector<Piece> out;
  out.reserve(pieces_.size());
  for (const Piece& p : pieces_) {
    ProjMatrix w = p.matrix * p.witness * p.matrix.inverse();
    out.push_back(
        {p.matrix.apply(p.breakpoint), std::move(w), p.matrix.inverse()});
  }
  return canonicalize(ring_, std::move(out));
}

PiecewiseMap PiecewiseMap::compose(const PiecewiseMap& g) const {
  if (ring_ != g.ring_)
    fail(ErrorCode::RingMismatch, "composing elements over different rings");
  if (is_global() && g.is_global())
    return global(*global_ * *g.global_);

  // breakpoints of the composite: those of g plus g-preimages of ours
  std::vector<std::pair<ProjPoint, ProjMatrix>> cand;
  if (!g.is_global())
    for (const Piece& p : g.pieces_) cand.emplace_back(p.breakpoint, p.witness);
  if (!is_global()) {
    PiecewiseMap ginv = g.inverse();
    for (const Piece& p : pieces_) {
      ProjPoint b = ginv.eval(p.breakpoint);
      const ProjMatrix& m = g.matrix_at(b);
      cand.emplace_back(std::move(b), m.inverse() * p.witness * m);
    }
  }
  std::sort(cand.begin(), cand.end(),
            [](const auto& x, const auto& y) {
              return ProjPoint::order(x.first, y.first) < 0;
            });
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](const auto& x, const auto& y) {
                           return x.first == y.first;
                         }),
             cand.end());

  std::vector<Piece> out;
  out.reserve(cand.size());
  for (auto& [b, w] : cand) {
    const ProjMatrix& mg = g.matrix_at(b);
    const ProjMatrix& mf = matrix_at(mg.apply(b));
    out.push_back({std::move(b), std::move(w), mf * mg});
  }
  return canonicalize(ring_, std::move(out));
}

PiecewiseMap PiecewiseMap::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  PiecewiseMap acc = identity(ring_);
  for (long i = 0; i < n; ++i) acc = acc.compose(*this);
  return acc;
}

bool PiecewiseMap::operator==(const PiecewiseMap& o) const {
  if (ring_ != o.ring_)
    fail(ErrorCode::RingMismatch, "comparing elements over different rings");
  if (is_global() != o.is_global()) return false;
  if (is_global()) return *global_ == *o.global_;
  if (pieces_.size() != o.pieces_.size()) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].breakpoint != o.pieces_[i].breakpoint) return false;
    if (!(pieces_[i].matrix == o.pieces_[i].matrix)) return false;
  }
  return true;
}

SupportSet PiecewiseMap::support() const {
  SupportSet out;
  if (is_global()) {
    if (global_->is_identity()) return out;
    auto fps = global_->fixed_points();
    if (fps.empty()) {
      out.full_circle = true;
      return out;
    }
    if (fps.size() == 1) {
      out.arcs.emplace_back(fps[0].first, fps[0].first);
      return out;
    }
    ProjPoint p = fps[0].first, q = fps[1].first;
    if (ProjPoint::order(q, p) < 0) std::swap(p, q);
    out.arcs.emplace_back(p, q);
    out.arcs.emplace_back(q, p);
    return out;
  }

  // Candidate boundary points: breakpoints plus fixed points of each piece
  // matrix interior to its arc. Between consecutive candidates the map is
  // pointwise fixed iff the active matrix is the identity.
  std::size_t n = pieces_.size();
  std::vector<ProjPoint> cand;
  for (std::size_t i = 0; i < n; ++i) {
    cand.push_back(pieces_[i].breakpoint);
    if (pieces_[i].matrix.is_identity()) continue;
    Arc arc(pieces_[i].breakpoint, pieces_[(i + 1) % n].breakpoint);
    for (const auto& [fp, mult] : pieces_[i].matrix.fixed_points())
      if (arc.contains(fp)) cand.push_back(fp);
  }
  std::sort(cand.begin(), cand.end(), [](const ProjPoint& x, const ProjPoint& y) {
    return ProjPoint::order(x, y) < 0;
  });

  std::size_t m = cand.size();
  std::vector<bool> pt_fixed(m), gap_fixed(m);
  std::vector<std::size_t> fixed_idx;
  for (std::size_t j = 0; j < m; ++j) {
    pt_fixed[j] = eval(cand[j]) == cand[j];
    gap_fixed[j] = matrix_at(cand[j]).is_identity();
    if (pt_fixed[j]) fixed_idx.push_back(j);
  }
  if (fixed_idx.empty()) {
    out.full_circle = true;
    return out;
  }
  if (fixed_idx.size() == 1) {
    const ProjPoint& c = cand[fixed_idx[0]];
    out.arcs.emplace_back(c, c);
    return out;
  }
  for (std::size_t t = 0; t < fixed_idx.size(); ++t) {
    std::size_t j1 = fixed_idx[t];
    std::size_t j2 = fixed_idx[(t + 1) % fixed_idx.size()];
    // a stretch of a single fixed gap contributes nothing; any longer
    // stretch is wholly moved (a fixed gap forces fixed endpoints)
    if ((j1 + 1) % m == j2 && gap_fixed[j1]) continue;
    out.arcs.emplace_back(cand[j1], cand[j2]);
  }
  return out;
}

Germ PiecewiseMap::germ(const ProjPoint& p, Side side) const {
  if (eval(p) != p) fail(ErrorCode::NotFixed, "point is not fixed");
  const ProjMatrix* m = &matrix_at(p);
  if (side == Side::Left && !is_global()) {
    std::size_t i = piece_index(p);
    if (pieces_[i].breakpoint == p)
      m = &pieces_[(i + pieces_.size() - 1) % pieces_.size()].matrix;
  }
  // in the chart at p the piece (a b; c d) has f'(p) = 1/(cp+d)^2 and
  // f''(p) = -2c/(cp+d)^3; at infinity use the chart y = -1/x, where the
  // conjugated matrix is (d -c; -b a) fixing 0
  AlgebraicReal denom = AlgebraicReal::from_rational(0);
  AlgebraicReal neg2c = AlgebraicReal::from_rational(0);
  if (p.is_infinity()) {
    denom = AlgebraicReal::from_ring(m->a());
    neg2c = AlgebraicReal::from_ring(m->b() + m->b());
  } else {
    denom = AlgebraicReal::from_ring(m->c()) * p.value() +
            AlgebraicReal::from_ring(m->d());
    neg2c = AlgebraicReal::from_ring(-(m->c() + m->c()));
  }
  AlgebraicReal d2 = denom * denom;
  return Germ{p, side, d2.inverse(), neg2c * (d2 * denom).inverse()};
}

std::string PiecewiseMap::str() const {
  std::ostringstream os;
  if (is_global()) {
    os << "global " << global_->str();
  } else {
    os << pieces_.size() << " pieces:";
    for (const Piece& p : pieces_)
      os << " [" << p.breakpoint.str() << " -> " << p.matrix.str() << "]";
  }
  return os.str();
}

}  // namespace pph
