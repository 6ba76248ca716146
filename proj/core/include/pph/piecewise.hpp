#pragma once

#include <optional>
#include <vector>

#include "pph/projective.hpp"

namespace pph {

/// One piece of a piecewise-Möbius map: `matrix` acts on the half-open arc
/// [breakpoint, next breakpoint). `witness` certifies breakpoint ∈ P_A: it
/// must be hyperbolic and fix the breakpoint.
struct Piece {
  ProjPoint breakpoint;
  ProjMatrix witness;
  ProjMatrix matrix;
};

enum class Side { Left, Right };

/// One-sided derivative data of a piecewise map at a fixed point.
struct Germ {
  ProjPoint location;
  Side side;
  AlgebraicReal multiplier;
  AlgebraicReal curvature;
};

/// Finite union of open arcs; `full_circle` marks the fixed-point-free case
/// that no arc list can express.
struct SupportSet {
  bool full_circle = false;
  std::vector<Arc> arcs;

  bool empty() const { return !full_circle && arcs.empty(); }
};

/// Element of G(A): a circle homeomorphism that is piecewise in PSL2(A)
/// with breakpoints in P_A. Either a single global matrix or a canonical
/// cyclic piece list (>= 2 pieces, adjacent matrices distinct, breakpoints
/// rotated to start at the canonically least one). Immutable.
class PiecewiseMap {
 public:
  /// Validating constructor: checks ring uniformity, cyclic breakpoint
  /// order, witnesses, continuity and winding one, then canonicalizes.
  static PiecewiseMap from_pieces(const BaseRing& ring,
                                  std::vector<Piece> pieces);
  static PiecewiseMap global(ProjMatrix m);
  static PiecewiseMap identity(const BaseRing& ring);

  const BaseRing& ring() const { return ring_; }
  bool is_global() const { return global_.has_value(); }
  const ProjMatrix& global_matrix() const { return *global_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_identity() const;
  bool fixes_infinity() const;

  ProjPoint eval(const ProjPoint& p) const;
  /// Matrix of the piece whose half-open arc contains p.
  const ProjMatrix& matrix_at(const ProjPoint& p) const;

  PiecewiseMap compose(const PiecewiseMap& g) const;  // this ∘ g
  PiecewiseMap operator*(const PiecewiseMap& g) const { return compose(g); }
  PiecewiseMap inverse() const;
  PiecewiseMap pow(long n) const;

  bool operator==(const PiecewiseMap& o) const;
  bool operator!=(const PiecewiseMap& o) const { return !(*this == o); }

  SupportSet support() const;
  Germ germ(const ProjPoint& p, Side side) const;

  std::string str() const;

 private:
  PiecewiseMap(BaseRing ring, ProjMatrix m)
      : ring_(std::move(ring)), global_(std::move(m)) {}
  PiecewiseMap(BaseRing ring, std::vector<Piece> pieces)
      : ring_(std::move(ring)), pieces_(std::move(pieces)) {}
  /// Merge adjacent equal matrices, collapse to Global, rotate canonical.
  static PiecewiseMap canonicalize(const BaseRing& ring,
                                   std::vector<Piece> pieces);
  std::size_t piece_index(const ProjPoint& p) const;

  BaseRing ring_;
  std::optional<ProjMatrix> global_;
  std::vector<Piece> pieces_;
};

}  // namespace pph
