#include "pph/json_io.hpp"

#include <sstream>

#include "pph/errors.hpp"

namespace pph {

namespace {

Json mpz_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

mpz_class mpz_from_json(const Json& j) {
  if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (mpz_set_str(z.get_mpz_t(), j.get<std::string>().c_str(), 10) != 0)
      fail(ErrorCode::ParseError, "bad integer literal: " + j.dump());
    return z;
  }
  fail(ErrorCode::ParseError, "expected an integer, got " + j.dump());
}

mpq_class mpq_from_string(const std::string& s) {
  mpq_class q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0 || sgn(q.get_den()) <= 0)
    fail(ErrorCode::ParseError, "bad rational literal: " + s);
  q.canonicalize();
  return q;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

Json parse_json(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::ParseError, "malformed JSON");
  return j;
}

// ---- rings --------------------------------------------------------------

Json ring_to_json(const BaseRing& ring) {
  Json j;
  switch (ring.kind()) {
    case BaseRing::Kind::Integers:
      j["type"] = "Z";
      break;
    case BaseRing::Kind::LocalizedIntegers:
      j["type"] = "Z[1/l]";
      j["ell"] = ring.ell();
      break;
    case BaseRing::Kind::QuadraticSqrt2:
      j["type"] = "Z[sqrt2]";
      break;
  }
  return j;
}

BaseRing ring_from_json(const Json& j) {
  std::string type = field(j, "type").is_string()
                         ? field(j, "type").get<std::string>()
                         : "";
  if (type == "Z") return BaseRing::integers();
  if (type == "Z[sqrt2]") return BaseRing::sqrt2();
  if (type == "Z[1/l]") {
    const Json& e = field(j, "ell");
    if (!e.is_number_unsigned())
      fail(ErrorCode::ParseError, "ell must be a positive integer");
    return BaseRing::localized(e.get<unsigned long>());
  }
  fail(ErrorCode::ParseError, "unknown ring type: " + field(j, "type").dump());
}

BaseRing ring_from_name(const std::string& name) {
  if (name == "Z") return BaseRing::integers();
  if (name == "Z[sqrt2]") return BaseRing::sqrt2();
  if (name.rfind("Z[1/", 0) == 0 && name.back() == ']') {
    std::string num = name.substr(4, name.size() - 5);
    try {
      return BaseRing::localized(std::stoul(num));
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad localization prime in: " + name);
    }
  }
  fail(ErrorCode::ParseError, "unknown ring name: " + name);
}

// ---- ring elements ------------------------------------------------------

Json ring_elem_to_json(const RingElem& x) {
  switch (x.ring().kind()) {
    case BaseRing::Kind::Integers:
      return mpz_to_json(x.a());
    case BaseRing::Kind::LocalizedIntegers:
      if (x.k() == 0) return mpz_to_json(x.a());
      return Json(x.str());
    case BaseRing::Kind::QuadraticSqrt2:
      if (x.b() == 0) return mpz_to_json(x.a());
      return Json(x.str());
  }
  fail(ErrorCode::InternalError, "unreachable ring kind");
}

RingElem ring_elem_from_text(const BaseRing& ring, const std::string& text) {
  auto strip = [](std::string s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string s = strip(text);
  if (s.empty()) fail(ErrorCode::ParseError, "empty ring element literal");

  auto parse_int = [&](const std::string& t) {
    mpz_class z;
    if (t.empty() || mpz_set_str(z.get_mpz_t(), t.c_str(), 10) != 0)
      fail(ErrorCode::ParseError, "bad integer literal: " + t);
    return z;
  };

  if (s.front() == '{') {
    if (ring.kind() != BaseRing::Kind::QuadraticSqrt2)
      fail(ErrorCode::ParseError, "braced literal only valid over Z[sqrt2]");
    std::size_t u = s.find("u:"), v = s.find("v:"), comma = s.find(',');
    if (u == std::string::npos || v == std::string::npos ||
        comma == std::string::npos || s.back() != '}')
      fail(ErrorCode::ParseError, "expected {u: ..., v: ...}: " + s);
    mpz_class uz = parse_int(strip(s.substr(u + 2, comma - u - 2)));
    mpz_class vz = parse_int(strip(s.substr(v + 2, s.size() - v - 3)));
    return RingElem::sqrt2(ring, uz, vz);
  }
  std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    if (ring.kind() != BaseRing::Kind::LocalizedIntegers)
      fail(ErrorCode::ParseError,
           "fractional literal only valid over a localized ring");
    mpz_class num = parse_int(s.substr(0, slash));
    mpz_class den = parse_int(s.substr(slash + 1));
    if (den <= 0) fail(ErrorCode::ParseError, "denominator must be positive");
    // the denominator must be a power of ell
    mpz_class l(ring.ell());
    unsigned long k = 0;
    while (den > 1) {
      if (!mpz_divisible_p(den.get_mpz_t(), l.get_mpz_t()))
        fail(ErrorCode::ParseError,
             "denominator is not a power of " + std::to_string(ring.ell()));
      den /= l;
      ++k;
    }
    return RingElem::localized(ring, num, k);
  }
  return RingElem(ring, parse_int(s));
}

RingElem ring_elem_from_json(const BaseRing& ring, const Json& j) {
  if (j.is_number_integer())
    return RingElem(ring, mpz_class(static_cast<long>(j.get<long long>())));
  if (j.is_string()) return ring_elem_from_text(ring, j.get<std::string>());
  fail(ErrorCode::ParseError, "expected a ring element, got " + j.dump());
}

// ---- algebraic reals and points -----------------------------------------

Json alg_to_json(const AlgebraicReal& x) {
  Json j;
  Json coeffs = Json::array();
  for (const mpz_class& c : x.minpoly()) coeffs.push_back(mpz_to_json(c));
  j["minpoly"] = std::move(coeffs);
  j["lo"] = x.lo().get_str();
  j["hi"] = x.hi().get_str();
  return j;
}

AlgebraicReal alg_from_json(const Json& j) {
  const Json& mp = field(j, "minpoly");
  if (!mp.is_array() || mp.empty())
    fail(ErrorCode::ParseError, "minpoly must be a nonempty array");
  ZPoly poly;
  for (const Json& c : mp) poly.push_back(mpz_from_json(c));
  const Json &lo = field(j, "lo"), &hi = field(j, "hi");
  if (!lo.is_string() || !hi.is_string())
    fail(ErrorCode::ParseError, "lo and hi must be rational strings");
  return AlgebraicReal::from_parts(std::move(poly),
                                   mpq_from_string(lo.get<std::string>()),
                                   mpq_from_string(hi.get<std::string>()));
}

Json point_to_json(const ProjPoint& p) {
  if (p.is_infinity()) return Json("inf");
  return alg_to_json(p.value());
}

ProjPoint point_from_json(const Json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf") return ProjPoint::infinity();
    return ProjPoint::rational(mpq_from_string(s));
  }
  if (j.is_number_integer())
    return ProjPoint::rational(mpq_class(mpz_from_json(j)));
  if (j.is_object()) return ProjPoint::affine(alg_from_json(j));
  fail(ErrorCode::ParseError, "expected \"inf\" or an algebraic object");
}

ProjPoint point_from_text(const std::string& text) {
  std::string s = text;
  if (s == "inf") return ProjPoint::infinity();
  if (!s.empty() && (s.front() == '{' || s.front() == '['))
    return point_from_json(parse_json(s));
  return ProjPoint::rational(mpq_from_string(s));
}

// ---- matrices and elements ----------------------------------------------

Json matrix_to_json(const ProjMatrix& m) {
  return Json::array({Json::array({ring_elem_to_json(m.a()),
                                   ring_elem_to_json(m.b())}),
                      Json::array({ring_elem_to_json(m.c()),
                                   ring_elem_to_json(m.d())})});
}

ProjMatrix matrix_from_json(const BaseRing& ring, const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() ||
      !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2)
    fail(ErrorCode::ParseError, "matrix must be [[a, b], [c, d]]");
  return ProjMatrix(ring_elem_from_json(ring, j[0][0]),
                    ring_elem_from_json(ring, j[0][1]),
                    ring_elem_from_json(ring, j[1][0]),
                    ring_elem_from_json(ring, j[1][1]));
}

Json map_to_json(const PiecewiseMap& f) {
  Json j;
  j["ring"] = ring_to_json(f.ring());
  if (f.is_global()) {
    j["global"] = matrix_to_json(f.global_matrix());
    return j;
  }
  Json pieces = Json::array();
  for (const Piece& p : f.pieces()) {
    Json pj;
    pj["breakpoint"] = point_to_json(p.breakpoint);
    pj["witness"] = matrix_to_json(p.witness);
    pj["matrix"] = matrix_to_json(p.matrix);
    pieces.push_back(std::move(pj));
  }
  j["pieces"] = std::move(pieces);
  return j;
}

PiecewiseMap map_from_json(const Json& j) {
  BaseRing ring = ring_from_json(field(j, "ring"));
  if (j.contains("global"))
    return PiecewiseMap::global(matrix_from_json(ring, j.at("global")));
  const Json& pieces = field(j, "pieces");
  if (!pieces.is_array() || pieces.empty())
    fail(ErrorCode::ParseError, "pieces must be a nonempty array");
  std::vector<Piece> out;
  for (const Json& pj : pieces) {
    ProjPoint bp = point_from_json(field(pj, "breakpoint"));
    ProjMatrix w = matrix_from_json(ring, field(pj, "witness"));
    ProjMatrix m = matrix_from_json(ring, field(pj, "matrix"));
    out.push_back({std::move(bp), std::move(w), std::move(m)});
  }
  return PiecewiseMap::from_pieces(ring, std::move(out));
}

// ---- arcs, supports, germs ----------------------------------------------

Json arc_to_json(const Arc& a) {
  Json j;
  j["start"] = point_to_json(a.start());
  j["end"] = point_to_json(a.end());
  return j;
}

Arc arc_from_json(const Json& j) {
  return Arc(point_from_json(field(j, "start")),
             point_from_json(field(j, "end")));
}

Json support_to_json(const SupportSet& s) {
  Json j;
  j["full_circle"] = s.full_circle;
  Json arcs = Json::array();
  for (const Arc& a : s.arcs) arcs.push_back(arc_to_json(a));
  j["arcs"] = std::move(arcs);
  return j;
}

Json germ_to_json(const Germ& g) {
  Json j;
  j["location"] = point_to_json(g.location);
  j["side"] = g.side == Side::Left ? "left" : "right";
  j["multiplier"] = alg_to_json(g.multiplier);
  j["curvature"] = alg_to_json(g.curvature);
  return j;
}

}  // namespace pph
