#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pph/piecewise.hpp"
#include "pph/words.hpp"

namespace pph {

/// Result of orbit_match: h in H(A) with h(p) = g(p). When g already fixes
/// infinity, h is just Global(g) and r, q0 are absent.
struct OrbitMatchResult {
  PiecewiseMap h;
  std::optional<RingElem> r;
  std::optional<ProjMatrix> q0;
};

/// Find h in H(A) matching the PSL2(A) orbit: h(inf) = inf and
/// h(p) = g(p). Requires g(p) != inf.
OrbitMatchResult orbit_match(const ProjMatrix& g, const ProjPoint& p);

/// Hyperbolic element of PSL2(Z) with repelling fixed point in the first
/// arc and attracting fixed point in the second. Searches conjugates
/// t (2 1; 1 1) t^-1 with t enumerated breadth-first by word length in
/// (1 1; 0 1) and (0 -1; 1 0), then products of parabolics fixing rational
/// points of the arcs.
ProjMatrix hyperbolic_in_arcs(const Arc& repelling, const Arc& attracting);

/// Element g of H(Z) with g(P^1 \ U) contained in V; p in U, inf in V,
/// U and V disjoint.
PiecewiseMap contraction_map(const ProjPoint& p, const Arc& U, const Arc& V);

/// Nontrivial element of H(A) commuting with every element of S. Each
/// member of S must be the identity on a neighborhood of infinity.
PiecewiseMap commuting_witness(const std::vector<PiecewiseMap>& S);

/// Outcome of the free-abelian search for a pair in H(A).
struct ClassifyOutcome {
  enum class Kind { MetabelianEvidence, Witness, Unknown };
  Kind kind;
  unsigned budget;
  // present iff kind == Witness; w2 = h w1 h^-1, supports disjoint,
  // so <w1, w2> is free abelian of rank 2
  std::optional<PiecewiseMap> w1, w2, h;
};

ClassifyOutcome classify_pair(const PiecewiseMap& f, const PiecewiseMap& g,
                              unsigned budget);

enum class OrderSign { Positive, Negative };
enum class OrderRel { Less, Equal, Greater };

/// Sign of h != identity in the bi-invariant order on H(A): decided by the
/// first nontrivial one-sided germ along the orientation starting at inf.
OrderSign biorder_positive(const PiecewiseMap& h);
OrderRel biorder_compare(const PiecewiseMap& f, const PiecewiseMap& g);

struct PingPongResult {
  bool verified;
  std::string reason;  // empty iff verified
};

/// Check the strengthened ping-pong nesting for (m1, m2) on the four arcs;
/// Verified certifies that <m1, m2> is free of rank 2.
PingPongResult pingpong_certificate(const ProjMatrix& m1, const ProjMatrix& m2,
                                    const Arc& x1p, const Arc& x1n,
                                    const Arc& x2p, const Arc& x2n);

/// Nonidentity matrix with all entries within eps of the identity's;
/// requires a dense ring.
ProjMatrix small_element(const BaseRing& ring, const mpq_class& eps);

/// A rational point strictly inside the open arc.
mpq_class rational_in_arc(const Arc& arc);

}  // namespace pph
