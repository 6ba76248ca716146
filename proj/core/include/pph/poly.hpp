#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace pph {

// Univariate polynomials, coefficients in ascending order (constant first).
using QPoly = std::vector<mpq_class>;
using ZPoly = std::vector<mpz_class>;

namespace poly {

int degree(const QPoly& p);  // -1 for the zero polynomial
void trim(QPoly& p);
bool is_zero(const QPoly& p);

QPoly from_z(const ZPoly& p);
QPoly add(const QPoly& p, const QPoly& q);
QPoly sub(const QPoly& p, const QPoly& q);
QPoly mul(const QPoly& p, const QPoly& q);
QPoly scale(const QPoly& p, const mpq_class& c);
QPoly derivative(const QPoly& p);
mpq_class eval(const QPoly& p, const mpq_class& x);
mpq_class eval(const ZPoly& p, const mpq_class& x);
int sign_at(const ZPoly& p, const mpq_class& x);

/// Quotient and remainder over Q; q must be nonzero.
std::pair<QPoly, QPoly> divmod(const QPoly& p, const QPoly& q);

/// True iff q divides p exactly over Q.
bool divides(const QPoly& q, const QPoly& p);

/// Monic gcd over Q (monic, or zero polynomial if both inputs zero).
QPoly gcd(const QPoly& p, const QPoly& q);

/// Integer polynomial with content 1 and positive leading coefficient,
/// equal to p up to a positive rational factor.
ZPoly primitive(const QPoly& p);

/// p divided by gcd(p, p'), primitive with positive leading coefficient.
ZPoly square_free(const QPoly& p);

/// Sturm chain of p (p must be nonzero).
std::vector<QPoly> sturm_chain(const QPoly& p);

/// Number of distinct real roots of the chain's polynomial in (a, b], a < b.
int sturm_count(const std::vector<QPoly>& chain, const mpq_class& a,
                const mpq_class& b);

/// Resultant of p and q over Q via the Sylvester determinant.
mpq_class resultant(const QPoly& p, const QPoly& q);

/// Interpolating polynomial through (xs[i], ys[i]); the xs must be distinct.
QPoly interpolate(const std::vector<mpq_class>& xs,
                  const std::vector<mpq_class>& ys);

/// Cauchy bound: every real root of p lies in [-B, B].
mpq_class root_bound(const ZPoly& p);

/// Endpoint x nudged in direction dir (by step, then halving) until it is
/// not a root of p.
mpq_class off_root(const ZPoly& p, mpq_class x, const mpq_class& step, int dir);

/// Integer-relation search: a primitive square-free divisor of p whose
/// degree is one of `degrees` (tried in order, ascending for a minimal
/// result) having a root in (lo, hi), found via LLL on power-basis
/// approximations of the root and verified by exact division and a Sturm
/// count. approx(k) must return an interval of width <= 2^-k around the
/// root of p isolated by (lo, hi). The LLL precision ladder stops at
/// max_bits; factors whose coefficients need more precision are missed.
std::optional<ZPoly> minimal_divisor(
    const ZPoly& p, const std::vector<int>& degrees,
    const std::function<std::pair<mpq_class, mpq_class>(unsigned)>& approx,
    unsigned max_bits = 768);

}  // namespace poly
}  // namespace pph
