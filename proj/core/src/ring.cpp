#include "pph/ring.hpp"

#include <sstream>

namespace pph {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::IdentityHasAllPoints: return "IdentityHasAllPoints";
    case ErrorCode::NotDistinct: return "NotDistinct";
    case ErrorCode::Discontinuous: return "Discontinuous";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::BadWitness: return "BadWitness";
    case ErrorCode::UnorderedBreakpoints: return "UnorderedBreakpoints";
    case ErrorCode::NotFixed: return "NotFixed";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InvalidArcs: return "InvalidArcs";
    case ErrorCode::ArcsNotDisjoint: return "ArcsNotDisjoint";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::IdentityHasNoSign: return "IdentityHasNoSign";
    case ErrorCode::NotInH: return "NotInH";
    case ErrorCode::NotSupported: return "NotSupported";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "UnknownError";
}

BaseRing BaseRing::localized(unsigned long ell) {
  mpz_class l(static_cast<unsigned long>(ell));
  if (ell < 2 || mpz_probab_prime_p(l.get_mpz_t(), 30) == 0)
    fail(ErrorCode::ValidationError, "localization prime expected, got " +
                                         std::to_string(ell));
  return BaseRing(Kind::LocalizedIntegers, ell);
}

std::string BaseRing::name() const {
  switch (kind_) {
    case Kind::Integers: return "Z";
    case Kind::LocalizedIntegers: return "Z[1/" + std::to_string(ell_) + "]";
    case Kind::QuadraticSqrt2: return "Z[sqrt2]";
  }
  return "?";
}

int sqrt2_sign(const mpz_class& u, const mpz_class& v) {
  int su = sgn(u), sv = sgn(v);
  if (sv == 0) return su;
  if (su == 0) return sv;
  if (su == sv) return su;
  // opposite signs: u + v*sqrt2 > 0 iff u^2 > 2 v^2 when u > 0,
  // iff u^2 < 2 v^2 when u < 0
  int c = cmp(u * u, 2 * v * v);
  return su > 0 ? (c > 0 ? 1 : (c < 0 ? -1 : 0)) * 1 : (c < 0 ? 1 : -1);
}

int sqrt2_sign(const mpq_class& u, const mpq_class& v) {
  int su = sgn(u), sv = sgn(v);
  if (sv == 0) return su;
  if (su == 0) return sv;
  if (su == sv) return su;
  int c = cmp(u * u, 2 * v * v);
  if (c == 0) return 0;  // cannot happen for rational u, v != 0
  return su > 0 ? (c > 0 ? 1 : -1) : (c < 0 ? 1 : -1);
}

RingElem::RingElem(BaseRing ring, mpz_class n)
    : ring_(ring), a_(std::move(n)), b_(0), k_(0) {}

RingElem RingElem::localized(BaseRing ring, mpz_class num, unsigned long k) {
  if (ring.kind() != BaseRing::Kind::LocalizedIntegers)
    fail(ErrorCode::RingMismatch, "localized payload requires Z[1/l]");
  RingElem e(ring, std::move(num), 0, k);
  e.canonicalize();
  return e;
}

RingElem RingElem::sqrt2(BaseRing ring, mpz_class u, mpz_class v) {
  if (ring.kind() != BaseRing::Kind::QuadraticSqrt2)
    fail(ErrorCode::RingMismatch, "sqrt2 payload requires Z[sqrt2]");
  return RingElem(ring, std::move(u), std::move(v), 0);
}

void RingElem::canonicalize() {
  if (ring_.kind() != BaseRing::Kind::LocalizedIntegers) return;
  if (a_ == 0) {
    k_ = 0;
    return;
  }
  mpz_class l(ring_.ell());
  while (k_ > 0 && mpz_divisible_p(a_.get_mpz_t(), l.get_mpz_t())) {
    a_ /= l;
    --k_;
  }
}

void RingElem::check_same(const RingElem& x, const RingElem& y) {
  if (x.ring_ != y.ring_)
    fail(ErrorCode::RingMismatch,
         x.ring_.name() + " vs " + y.ring_.name());
}

RingElem RingElem::operator+(const RingElem& o) const {
  check_same(*this, o);
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      return RingElem(ring_, a_ + o.a_);
    case BaseRing::Kind::QuadraticSqrt2:
      return RingElem(ring_, a_ + o.a_, b_ + o.b_, 0);
    case BaseRing::Kind::LocalizedIntegers: {
      mpz_class l(ring_.ell());
      unsigned long k = std::max(k_, o.k_);
      mpz_class lx, ly;
      mpz_pow_ui(lx.get_mpz_t(), l.get_mpz_t(), k - k_);
      mpz_pow_ui(ly.get_mpz_t(), l.get_mpz_t(), k - o.k_);
      RingElem r(ring_, a_ * lx + o.a_ * ly, 0, k);
      r.canonicalize();
      return r;
    }
  }
  fail(ErrorCode::InternalError, "bad ring kind");
}

RingElem RingElem::operator-() const {
  return RingElem(ring_, -a_, -b_, k_);
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator*(const RingElem& o) const {
  check_same(*this, o);
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      return RingElem(ring_, a_ * o.a_);
    case BaseRing::Kind::QuadraticSqrt2:
      return RingElem(ring_, a_ * o.a_ + 2 * b_ * o.b_,
                      a_ * o.b_ + b_ * o.a_, 0);
    case BaseRing::Kind::LocalizedIntegers: {
      RingElem r(ring_, a_ * o.a_, 0, k_ + o.k_);
      r.canonicalize();
      return r;
    }
  }
  fail(ErrorCode::InternalError, "bad ring kind");
}

int RingElem::sign() const {
  if (ring_.kind() == BaseRing::Kind::QuadraticSqrt2)
    return sqrt2_sign(a_, b_);
  return sgn(a_);
}

bool RingElem::operator==(const RingElem& o) const {
  check_same(*this, o);
  return a_ == o.a_ && b_ == o.b_ && k_ == o.k_;
}

std::pair<mpq_class, mpq_class> RingElem::field_pair() const {
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      return {mpq_class(a_), 0};
    case BaseRing::Kind::QuadraticSqrt2:
      return {mpq_class(a_), mpq_class(b_)};
    case BaseRing::Kind::LocalizedIntegers: {
      mpz_class l(ring_.ell()), d;
      mpz_pow_ui(d.get_mpz_t(), l.get_mpz_t(), k_);
      mpq_class q(a_, d);
      q.canonicalize();
      return {q, 0};
    }
  }
  fail(ErrorCode::InternalError, "bad ring kind");
}

std::string RingElem::str() const {
  std::ostringstream os;
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      os << a_;
      break;
    case BaseRing::Kind::LocalizedIntegers: {
      os << a_;
      if (k_ > 0) {
        mpz_class l(ring_.ell()), d;
        mpz_pow_ui(d.get_mpz_t(), l.get_mpz_t(), k_);
        os << "/" << d;
      }
      break;
    }
    case BaseRing::Kind::QuadraticSqrt2:
      os << "{u: " << a_ << ", v: " << b_ << "}";
      break;
  }
  return os.str();
}

}  // namespace pph
