#include "pph/poly.hpp"

#include <algorithm>
#include <cassert>

#include "pph/errors.hpp"

namespace pph {
namespace poly {

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

bool is_zero(const QPoly& p) { return p.empty(); }

QPoly from_z(const ZPoly& p) {
  QPoly q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[i] = mpq_class(p[i]);
  trim(q);
  return q;
}

QPoly add(const QPoly& p, const QPoly& q) {
  QPoly r(std::max(p.size(), q.size()), mpq_class(0));
  for (size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (size_t i = 0; i < q.size(); ++i) r[i] += q[i];
  trim(r);
  return r;
}

QPoly sub(const QPoly& p, const QPoly& q) {
  QPoly r(std::max(p.size(), q.size()), mpq_class(0));
  for (size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (size_t i = 0; i < q.size(); ++i) r[i] -= q[i];
  trim(r);
  return r;
}

QPoly mul(const QPoly& p, const QPoly& q) {
  if (p.empty() || q.empty()) return {};
  QPoly r(p.size() + q.size() - 1, mpq_class(0));
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  trim(r);
  return r;
}

QPoly scale(const QPoly& p, const mpq_class& c) {
  if (c == 0) return {};
  QPoly r(p);
  for (auto& x : r) x *= c;
  return r;
}

QPoly derivative(const QPoly& p) {
  if (p.size() <= 1) return {};
  QPoly r(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * mpq_class(i);
  trim(r);
  return r;
}

mpq_class eval(const QPoly& p, const mpq_class& x) {
  mpq_class acc(0);
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

mpq_class eval(const ZPoly& p, const mpq_class& x) {
  mpq_class acc(0);
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + mpq_class(p[i]);
  return acc;
}

int sign_at(const ZPoly& p, const mpq_class& x) { return sgn(eval(p, x)); }

std::pair<QPoly, QPoly> divmod(const QPoly& p, const QPoly& q) {
  if (q.empty()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
  QPoly r(p), quo;
  int dq = degree(q);
  if (degree(r) >= dq) quo.assign(degree(r) - dq + 1, mpq_class(0));
  while (degree(r) >= dq) {
    int dr = degree(r);
    mpq_class c = r.back() / q.back();
    quo[dr - dq] = c;
    for (int i = 0; i <= dq; ++i) r[dr - dq + i] -= c * q[i];
    r.pop_back();
    trim(r);
  }
  trim(quo);
  return {quo, r};
}

bool divides(const QPoly& q, const QPoly& p) {
  if (q.empty()) return p.empty();
  return divmod(p, q).second.empty();
}

QPoly gcd(const QPoly& p, const QPoly& q) {
  QPoly a(p), b(q);
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    mpq_class inv = 1 / a.back();
    for (auto& c : a) c *= inv;
  }
  return a;
}

ZPoly primitive(const QPoly& p) {
  if (p.empty()) return {};
  mpz_class den(1);
  for (const auto& c : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
                                  c.get_den().get_mpz_t());
  ZPoly z(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    mpq_class v = p[i] * mpq_class(den);
    z[i] = v.get_num();
  }
  mpz_class content(0);
  for (const auto& c : z) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(),
                                  c.get_mpz_t());
  if (sgn(z.back()) < 0) content = -content;
  for (auto& c : z) c /= content;
  return z;
}

ZPoly square_free(const QPoly& p) {
  if (p.empty()) return {};
  QPoly g = gcd(p, derivative(p));
  if (degree(g) == 0) return primitive(p);
  return primitive(divmod(p, g).first);
}

// Chain elements are rescaled by positive constants to keep coefficients
// integral; sign variations are unaffected.
static QPoly pos_primitive(const QPoly& p) {
  if (p.empty()) return p;
  ZPoly z = primitive(p);
  QPoly r = from_z(z);
  if (sgn(p.back()) != sgn(r.back()))
    for (auto& c : r) c = -c;
  return r;
}

std::vector<QPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> chain;
  chain.push_back(pos_primitive(p));
  QPoly d = derivative(p);
  if (d.empty()) return chain;
  chain.push_back(pos_primitive(d));
  while (true) {
    QPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(pos_primitive(r));
  }
  return chain;
}

static int variations(const std::vector<QPoly>& chain, const mpq_class& x) {
  int v = 0, prev = 0;
  for (const auto& p : chain) {
    int s = sgn(eval(p, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

int sturm_count(const std::vector<QPoly>& chain, const mpq_class& a,
                const mpq_class& b) {
  return variations(chain, a) - variations(chain, b);
}

mpq_class resultant(const QPoly& p, const QPoly& q) {
  int m = degree(p), n = degree(q);
  if (m < 0 || n < 0) return 0;
  if (m == 0) {
    mpq_class r(1);
    for (int i = 0; i < n; ++i) r *= p[0];
    return r;
  }
  if (n == 0) {
    mpq_class r(1);
    for (int i = 0; i < m; ++i) r *= q[0];
    return r;
  }
  int sz = m + n;
  std::vector<std::vector<mpq_class>> s(sz, std::vector<mpq_class>(sz, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[i][i + j] = p[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[n + i][i + j] = q[n - j];
  // Gaussian elimination with partial pivoting
  mpq_class det(1);
  for (int col = 0; col < sz; ++col) {
    int piv = -1;
    for (int r = col; r < sz; ++r)
      if (s[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(s[piv], s[col]);
      det = -det;
    }
    det *= s[col][col];
    mpq_class inv = 1 / s[col][col];
    for (int r = col + 1; r < sz; ++r) {
      if (s[r][col] == 0) continue;
      mpq_class f = s[r][col] * inv;
      for (int c = col; c < sz; ++c) s[r][c] -= f * s[col][c];
    }
  }
  return det;
}

QPoly interpolate(const std::vector<mpq_class>& xs,
                  const std::vector<mpq_class>& ys) {
  assert(xs.size() == ys.size() && !xs.empty());
  size_t n = xs.size();
  // Newton divided differences
  std::vector<mpq_class> coef(ys);
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i)
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
  QPoly r{coef[n - 1]};
  for (size_t i = n - 1; i-- > 0;) {
    // r = r * (x - xs[i]) + coef[i]
    QPoly shifted(r.size() + 1, mpq_class(0));
    for (size_t j = 0; j < r.size(); ++j) {
      shifted[j + 1] += r[j];
      shifted[j] -= r[j] * xs[i];
    }
    shifted[0] += coef[i];
    r = std::move(shifted);
    trim(r);
  }
  return r;
}

mpq_class root_bound(const ZPoly& p) {
  assert(!p.empty());
  mpz_class m(0);
  for (const auto& c : p) {
    mpz_class a = abs(c);
    if (a > m) m = a;
  }
  mpq_class b = 1 + mpq_class(m) / mpq_class(abs(p.back()));
  return b;
}

// ---- LLL ----------------------------------------------------------------

namespace {

using Row = std::vector<mpz_class>;

mpz_class round_to_int(const mpq_class& q) {
  mpz_class n = q.get_num(), d = q.get_den(), r;
  // floor(q + 1/2)
  mpz_class num2 = 2 * n + d;
  mpz_fdiv_q(r.get_mpz_t(), num2.get_mpz_t(), mpz_class(2 * d).get_mpz_t());
  return r;
}

struct Gso {
  std::vector<std::vector<mpq_class>> mu;
  std::vector<mpq_class> B;
};

Gso gram_schmidt(const std::vector<Row>& b) {
  size_t n = b.size(), m = b[0].size();
  std::vector<std::vector<mpq_class>> star(n, std::vector<mpq_class>(m, 0));
  Gso g;
  g.mu.assign(n, std::vector<mpq_class>(n, 0));
  g.B.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < m; ++k) star[i][k] = mpq_class(b[i][k]);
    for (size_t j = 0; j < i; ++j) {
      mpq_class dot(0);
      for (size_t k = 0; k < m; ++k) dot += mpq_class(b[i][k]) * star[j][k];
      g.mu[i][j] = g.B[j] == 0 ? mpq_class(0) : dot / g.B[j];
      for (size_t k = 0; k < m; ++k) star[i][k] -= g.mu[i][j] * star[j][k];
    }
    for (size_t k = 0; k < m; ++k) g.B[i] += star[i][k] * star[i][k];
  }
  return g;
}

// Size-reduce b[k] against b[j] and update the affected mu entries in place.
void lll_size_reduce(std::vector<Row>& b, Gso& g, size_t k, size_t j) {
  mpz_class r = round_to_int(g.mu[k][j]);
  if (r == 0) return;
  mpq_class rq(r);
  for (size_t c = 0; c < b[k].size(); ++c) b[k][c] -= r * b[j][c];
  g.mu[k][j] -= rq;
  for (size_t i = 0; i < j; ++i) g.mu[k][i] -= rq * g.mu[j][i];
}

void lll_reduce(std::vector<Row>& b) {
  const mpq_class delta(3, 4);
  size_t n = b.size();
  Gso g = gram_schmidt(b);
  size_t k = 1;
  while (k < n) {
    lll_size_reduce(b, g, k, k - 1);
    if (g.B[k] >= (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.B[k - 1]) {
      for (size_t j = k - 1; j-- > 0;) lll_size_reduce(b, g, k, j);
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      // update the orthogonalization incrementally (Cohen, Alg. 2.6.3)
      mpq_class mu = g.mu[k][k - 1];
      mpq_class Bnew = g.B[k] + mu * mu * g.B[k - 1];
      g.mu[k][k - 1] = mu * g.B[k - 1] / Bnew;
      g.B[k] = g.B[k - 1] * g.B[k] / Bnew;
      g.B[k - 1] = Bnew;
      for (size_t j = 0; j + 1 < k; ++j) std::swap(g.mu[k][j], g.mu[k - 1][j]);
      for (size_t i = k + 1; i < n; ++i) {
        mpq_class t = g.mu[i][k];
        g.mu[i][k] = g.mu[i][k - 1] - mu * t;
        g.mu[i][k - 1] = t + g.mu[k][k - 1] * g.mu[i][k];
      }
      k = k > 1 ? k - 1 : 1;
    }
  }
}

}  // namespace

mpq_class off_root(const ZPoly& p, mpq_class x, const mpq_class& step,
                   int dir) {
  mpq_class d = step;
  while (sign_at(p, x) == 0) {
    x += dir * d;
    d /= 2;
  }
  return x;
}

std::optional<ZPoly> minimal_divisor(
    const ZPoly& p, const std::vector<int>& degrees,
    const std::function<std::pair<mpq_class, mpq_class>(unsigned)>& approx,
    unsigned max_bits) {
  QPoly pq = from_z(p);
  int dp = degree(pq);
  if (dp <= 1) return std::nullopt;
  auto chain_p = sturm_chain(pq);

  for (int d : degrees) {
    if (d < 1 || d >= dp) continue;
    for (unsigned bits : {96u, 192u, 384u, 768u}) {
      if (bits > max_bits) break;
      auto [lo, hi] = approx(bits + 16);
      mpq_class mid = (lo + hi) / 2;
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
      std::vector<Row> basis(d + 1, Row(d + 2, 0));
      mpq_class pw(1);
      for (int i = 0; i <= d; ++i) {
        basis[i][i] = 1;
        basis[i][d + 1] = round_to_int(pw * mpq_class(scale));
        pw *= mid;
      }
      lll_reduce(basis);
      for (const auto& row : basis) {
        QPoly cand;
        for (int i = 0; i <= d; ++i) cand.push_back(mpq_class(row[i]));
        trim(cand);
        if (degree(cand) < 1) continue;
        if (!divides(cand, pq)) continue;
        // cand divides the square-free p, so any root of cand inside an
        // interval isolating our root of p must be that root.
        ZPoly m = primitive(cand);
        unsigned k = 32;
        while (true) {
          auto [a, b] = approx(k);
          mpq_class w = b - a;
          if (w == 0) {
            if (eval(cand, a) == 0) return m;
            break;
          }
          mpq_class a2 = off_root(p, a, w / 16, -1);
          mpq_class b2 = off_root(p, b, w / 16, +1);
          if (sturm_count(chain_p, a2, b2) == 1) {
            auto chain_m = sturm_chain(from_z(m));
            if (sturm_count(chain_m, a2, b2) >= 1) return m;
            break;  // root of p isolated but cand does not vanish there
          }
          if (k > 4096) break;
          k *= 2;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace poly
}  // namespace pph
