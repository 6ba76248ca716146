#include "cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "pph/constructions.hpp"
#include "pph/json_io.hpp"

namespace pph {

namespace {

// ---- input plumbing -------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Arguments holding elements/matrices accept either inline JSON or a path.
Json arg_json(const std::string& arg) {
  std::string s = arg;
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b != std::string::npos && (s[b] == '{' || s[b] == '['))
    return parse_json(s);
  return parse_json(slurp(arg));
}

PiecewiseMap load_map(const std::string& arg) {
  return map_from_json(arg_json(arg));
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// ---- exact decimal output --------------------------------------------------

// Exact decimal expansion of a rational whose denominator divides 2^a * 5^b.
std::string decimal_string(const mpq_class& q) {
  mpz_class num = q.get_num(), den = q.get_den();
  bool neg = num < 0;
  if (neg) num = -num;
  unsigned digits = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    num *= 5;
    ++digits;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    num *= 2;
    ++digits;
  }
  if (den != 1)
    fail(ErrorCode::InternalError, "non-terminating decimal requested");
  std::string s = num.get_str();
  if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
  std::string head = s.substr(0, s.size() - digits);
  std::string tail = digits ? s.substr(s.size() - digits) : std::string();
  while (!tail.empty() && tail.back() == '0') tail.pop_back();
  std::string r = head;
  if (!tail.empty()) r += "." + tail;
  if (neg && r != "0") r.insert(r.begin(), '-');
  return r;
}

// Dyadic with exactly <= k fractional bits, |result - v| <= 2^-k.
mpq_class round_dyadic(const mpq_class& v, unsigned k) {
  mpz_class scale = 1;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, k);
  mpq_class scaled = v * mpq_class(scale);
  // round to nearest integer (ties toward +inf; any rounding is fine)
  mpz_class fl = scaled.get_num() / scaled.get_den();
  if (scaled < 0 && mpq_class(fl) != scaled) fl -= 1;
  if (scaled - mpq_class(fl) >= mpq_class(1, 2)) fl += 1;
  mpq_class r(fl, scale);
  r.canonicalize();
  return r;
}

std::string point_decimal(const ProjPoint& p, unsigned k) {
  if (p.is_infinity()) return "inf";
  const AlgebraicReal& v = p.value();
  if (v.is_rational()) {
    mpq_class r = v.rational_value();
    mpz_class den = r.get_den(), scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, k);
    if (mpz_divisible_p(scale.get_mpz_t(), den.get_mpz_t()))
      return decimal_string(r);  // already a k-bit dyadic: print exactly
  }
  return decimal_string(v.approx(k));
}

// ---- exact chart coordinate: x = tan(pi (t - 1/2)) -------------------------
//
// Fixed-point arithmetic at scale S = 2^W with W = k + 48 guard bits. All
// divisions round toward zero; each step loses at most one ulp and the
// series are alternating with decreasing terms, so the accumulated error
// stays far below the 2^-k output resolution.

mpz_class fp_atan_inv(unsigned long x, const mpz_class& S) {
  mpz_class acc = 0, power = x;  // power = x^(2j+1)
  mpz_class xx = mpz_class(x) * x;
  for (unsigned long j = 0;; ++j) {
    mpz_class term = S / (power * (2 * j + 1));
    if (term == 0) break;
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
    power *= xx;
  }
  return acc;
}

mpz_class fp_pi(const mpz_class& S) {
  return 16 * fp_atan_inv(5, S) - 4 * fp_atan_inv(239, S);
}

// sin and cos of a = A/S for |a| < pi/2 + 1/1000, by the Taylor series.
std::pair<mpz_class, mpz_class> fp_sincos(const mpz_class& A,
                                          const mpz_class& S) {
  mpz_class s = 0, c = 0;
  mpz_class term = A;  // sin terms: A^(2j+1)/(2j+1)! at scale S
  for (unsigned long j = 0; term != 0 && j < 64; ++j) {
    if (j % 2 == 0)
      s += term;
    else
      s -= term;
    term = (term * A) / S;
    term = (term * A) / S / mpz_class((2 * j + 2) * (2 * j + 3));
  }
  term = S;  // cos terms: A^(2j)/(2j)! at scale S
  for (unsigned long j = 0; term != 0 && j < 64; ++j) {
    if (j % 2 == 0)
      c += term;
    else
      c -= term;
    term = (term * A) / S;
    term = (term * A) / S / mpz_class((2 * j + 1) * (2 * j + 2));
  }
  return {s, c};
}

// Chart coordinate for t = i/N; nullopt marks the pole at t = 0.
std::optional<mpq_class> chart_coordinate(unsigned long i, unsigned long N,
                                          unsigned k) {
  if (i == 0) return std::nullopt;
  mpq_class y(static_cast<long>(2 * i) - static_cast<long>(N), 2 * N);
  y.canonicalize();
  if (y == 0) return mpq_class(0);
  unsigned W = k + 48;
  mpz_class S = 1;
  mpz_ui_pow_ui(S.get_mpz_t(), 2, W);
  mpz_class A = fp_pi(S) * y.get_num() / y.get_den();
  auto [s, c] = fp_sincos(A, S);
  if (c == 0) c = 1;  // unreachable for i != 0; guard the division anyway
  mpq_class x(s, c);
  x.canonicalize();
  return round_dyadic(x, k);
}

// ---- shared verification helpers -------------------------------------------

PiecewiseMap roundtrip(const PiecewiseMap& f) {
  return map_from_json(parse_json(map_to_json(f).dump()));
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InternalError, "verification failed: " + what);
}

// Nontrivial "bump" in H(Z): acts by a power of a hyperbolic matrix between
// its two fixed points (repelling in `rep`, attracting in `att`) and is the
// identity elsewhere.
PiecewiseMap bump_in_arcs(const Arc& rep, const Arc& att, long power) {
  ProjMatrix m = hyperbolic_in_arcs(rep, att);
  auto fps = m.fixed_points();  // attracting first
  BaseRing ring = m.ring();
  std::vector<Piece> pieces;
  pieces.push_back({fps[1].first, m, m.pow(power)});
  pieces.push_back({fps[0].first, m, ProjMatrix::identity(ring)});
  return PiecewiseMap::from_pieces(ring, std::move(pieces));
}

// ---- subcommands ------------------------------------------------------------

void cmd_plot(const PiecewiseMap& f, unsigned long N, unsigned k,
              std::ostream& out) {
  if (N < 2) fail(ErrorCode::PreconditionViolated, "plot needs N >= 2");
  out << "t,x,fx\n";
  for (unsigned long i = 0; i < N; ++i) {
    mpq_class t(i, N);
    t.canonicalize();
    std::optional<mpq_class> x = chart_coordinate(i, N, k);
    ProjPoint p = x ? ProjPoint::rational(*x) : ProjPoint::infinity();
    ProjPoint image = f.eval(p);
    out << t.get_str() << "," << (x ? decimal_string(*x) : "inf") << ","
        << point_decimal(image, k) << "\n";
  }
}

void cmd_demo(std::ostream& out) {
  BaseRing Z = BaseRing::integers();

  out << "== orbit-match ==\n";
  ProjMatrix g = ProjMatrix::from_ints(Z, 0, -1, 1, 0);
  OrbitMatchResult om = orbit_match(g, ProjPoint::rational(1));
  Json omj;
  omj["h"] = map_to_json(om.h);
  if (om.r) omj["r"] = ring_elem_to_json(*om.r);
  if (om.q0) omj["q0"] = matrix_to_json(*om.q0);
  emit(out, omj);
  PiecewiseMap om_rt = roundtrip(om.h);
  require(om_rt == om.h, "orbit-match round trip");
  require(om_rt.eval(ProjPoint::infinity()).is_infinity(),
          "orbit-match fixes infinity");
  require(om_rt.eval(ProjPoint::rational(1)) ==
              g.apply(ProjPoint::rational(1)),
          "orbit-match matches the orbit");

  out << "== contraction ==\n";
  PiecewiseMap contr =
      contraction_map(ProjPoint::rational(0), Arc::rational(-1, 1),
                      Arc(ProjPoint::rational(10), ProjPoint::rational(-10)));
  emit(out, map_to_json(contr));
  PiecewiseMap contr_rt = roundtrip(contr);
  require(contr_rt == contr, "contraction round trip");
  Arc V(ProjPoint::rational(10), ProjPoint::rational(-10));
  require(V.contains(contr_rt.eval(ProjPoint::rational(-1))) &&
              V.contains(contr_rt.eval(ProjPoint::rational(1))),
          "contraction maps the boundary of U into V");

  out << "== commuting-witness ==\n";
  PiecewiseMap s = bump_in_arcs(Arc::rational(0, mpq_class(1, 2)),
                                Arc::rational(mpq_class(1, 2), 1), 1);
  PiecewiseMap hs = commuting_witness({s});
  emit(out, map_to_json(hs));
  PiecewiseMap hs_rt = roundtrip(hs);
  require(hs_rt == hs, "commuting-witness round trip");
  require(!hs_rt.is_identity(), "commuting witness is nontrivial");
  require(hs_rt * s == s * hs_rt, "commuting witness commutes");

  out << "== classify-pair ==\n";
  PiecewiseMap cf =
      PiecewiseMap::global(ProjMatrix::from_ints(Z, 1, 1, 0, 1));
  PiecewiseMap cg = bump_in_arcs(Arc::rational(0, mpq_class(1, 4)),
                                 Arc::rational(mpq_class(5, 4), mpq_class(3, 2)),
                                 1);
  ClassifyOutcome co = classify_pair(cf, cg, 4000);
  require(co.kind == ClassifyOutcome::Kind::Witness,
          "classify-pair finds a witness");
  Json coj;
  coj["kind"] = "Witness";
  coj["budget"] = co.budget;
  coj["w1"] = map_to_json(*co.w1);
  coj["w2"] = map_to_json(*co.w2);
  coj["h"] = map_to_json(*co.h);
  emit(out, coj);
  PiecewiseMap w1 = roundtrip(*co.w1), w2 = roundtrip(*co.w2);
  require(w1 * w2 == w2 * w1, "witness pair commutes");
  SupportSet s1 = w1.support(), s2 = w2.support();
  bool disjoint = !s1.full_circle && !s2.full_circle;
  for (const Arc& x : s1.arcs)
    for (const Arc& y : s2.arcs)
      if (arcs_intersect(x, y)) disjoint = false;
  require(disjoint, "witness supports are disjoint");
  // with disjoint supports, w1^m w2^n = id forces w1^m = w2^n = id
  require(!(w1 * w2).is_identity(), "w1 w2 is nontrivial");
  PiecewiseMap p1 = w1, p2 = w2;
  for (int n = 1; n <= 3; ++n) {
    require(!p1.is_identity() && !p2.is_identity(),
            "witness powers are nontrivial");
    if (n < 3) {
      p1 = p1 * w1;
      p2 = p2 * w2;
    }
  }

  out << "== pingpong-verify ==\n";
  PingPongResult pp = pingpong_certificate(
      ProjMatrix::from_ints(Z, 1, 2, 0, 1), ProjMatrix::from_ints(Z, 1, 0, 2, 1),
      Arc(ProjPoint::rational(1), ProjPoint::infinity()),
      Arc(ProjPoint::infinity(), ProjPoint::rational(-1)),
      Arc::rational(0, 1), Arc::rational(-1, 0));
  require(pp.verified, "classical ping-pong pair verifies");
  out << "Verified\n";

  out << "== small-element ==\n";
  ProjMatrix small = small_element(BaseRing::sqrt2(), mpq_class(1, 1000000));
  emit(out, matrix_to_json(small));
  require(!small.is_identity(), "small element is nontrivial");
  AlgebraicReal eps = AlgebraicReal::from_rational(mpq_class(1, 1000000));
  auto near = [&](const RingElem& x, long target) {
    AlgebraicReal d = AlgebraicReal::from_ring(x) -
                      AlgebraicReal::from_rational(mpq_class(target));
    return d < eps && -d < eps;
  };
  require(near(small.a(), 1) && near(small.b(), 0) && near(small.c(), 0) &&
              near(small.d(), 1),
          "small element entries are within eps of the identity");

  out << "demo: all constructions verified\n";
}

void cmd_selftest(std::ostream& out) {
  BaseRing Z = BaseRing::integers();
  AlgebraicReal s2 = AlgebraicReal::quadratic_root(
      RingElem(Z, 1), RingElem::zero(Z), RingElem(Z, -2),
      AlgebraicReal::Branch::Plus);
  require(s2 * s2 == AlgebraicReal::from_rational(2), "sqrt(2)^2 = 2");

  ProjMatrix m = ProjMatrix::from_ints(Z, 2, 1, 1, 1);
  require(m.classify() == MatClass::Hyperbolic, "(2 1; 1 1) is hyperbolic");
  require((m * m.inverse()).is_identity(), "matrix inverse");

  OrbitMatchResult om =
      orbit_match(ProjMatrix::from_ints(Z, 0, -1, 1, 0), ProjPoint::rational(1));
  require(om.r && *om.r == RingElem(Z, 3), "worked instance r = 3");
  require(om.h.eval(ProjPoint::rational(1)) == ProjPoint::rational(-1),
          "worked instance value");

  PiecewiseMap rt = roundtrip(om.h);
  require(rt == om.h, "serialization round trip");
  out << "selftest: all checks passed\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"piecewise projective homeomorphisms toolkit"};
  app.require_subcommand(1);

  std::string lhs, rhs, element, point_text, side_text = "right";
  std::string ring_name = "Z", matrix_text, m1_text, m2_text, arcs_arg;
  std::string p_text, u_start, u_end, v_start, v_end, eps_text, output_path;
  std::vector<std::string> elements;
  unsigned long samples = 64;
  unsigned precision = 16;
  unsigned budget = 4000;
  int approx_bits = -1;

  CLI::App* c_eval = app.add_subcommand("eval", "apply an element to a point");
  c_eval->add_option("--element", element)->required();
  c_eval->add_option("--point", point_text)->required();
  c_eval->add_option("--approx", approx_bits,
                     "print a decimal approximation to 2^-k instead of JSON");

  CLI::App* c_compose = app.add_subcommand("compose", "compose two elements");
  c_compose->add_option("--lhs", lhs)->required();
  c_compose->add_option("--rhs", rhs)->required();

  CLI::App* c_inverse = app.add_subcommand("inverse", "invert an element");
  c_inverse->add_option("--element", element)->required();

  CLI::App* c_support = app.add_subcommand("support", "support of an element");
  c_support->add_option("--element", element)->required();

  CLI::App* c_germ =
      app.add_subcommand("germ", "one-sided germ at a fixed point");
  c_germ->add_option("--element", element)->required();
  c_germ->add_option("--point", point_text)->required();
  c_germ->add_option("--side", side_text)
      ->check(CLI::IsMember({"left", "right"}));

  CLI::App* c_orbit =
      app.add_subcommand("orbit-match", "match a PSL2 orbit inside H(A)");
  c_orbit->add_option("--ring", ring_name);
  c_orbit->add_option("--matrix", matrix_text)->required();
  c_orbit->add_option("--point", point_text)->required();

  CLI::App* c_contract =
      app.add_subcommand("contract", "element of H(Z) contracting P^1\\U into V");
  c_contract->add_option("--p", p_text)->required();
  c_contract->add_option("--u-start", u_start)->required();
  c_contract->add_option("--u-end", u_end)->required();
  c_contract->add_option("--v-start", v_start)->required();
  c_contract->add_option("--v-end", v_end)->required();

  CLI::App* c_commute = app.add_subcommand(
      "commuting-witness", "nontrivial element commuting with a finite set");
  c_commute->add_option("--element", elements)->required();

  CLI::App* c_classify =
      app.add_subcommand("classify-pair", "free-abelian witness search");
  c_classify->add_option("--lhs", lhs)->required();
  c_classify->add_option("--rhs", rhs)->required();
  c_classify->add_option("--budget", budget);

  CLI::App* c_order =
      app.add_subcommand("order-compare", "bi-invariant order comparison");
  c_order->add_option("--lhs", lhs)->required();
  c_order->add_option("--rhs", rhs)->required();

  CLI::App* c_pp = app.add_subcommand("pingpong-verify",
                                      "check a ping-pong freeness certificate");
  c_pp->add_option("--ring", ring_name);
  c_pp->add_option("--m1", m1_text)->required();
  c_pp->add_option("--m2", m2_text)->required();
  c_pp->add_option("--arcs", arcs_arg)->required();

  CLI::App* c_small = app.add_subcommand(
      "small-element", "nonidentity matrix with entries eps-close to 1,0,0,1");
  c_small->add_option("--ring", ring_name);
  c_small->add_option("--eps", eps_text)->required();

  CLI::App* c_plot = app.add_subcommand("plot", "CSV samples of the circle map");
  c_plot->add_option("--element", element)->required();
  c_plot->add_option("--samples", samples);
  c_plot->add_option("--precision", precision);
  c_plot->add_option("--output", output_path);

  CLI::App* c_demo =
      app.add_subcommand("demo", "reproduce and verify each construction");
  CLI::App* c_selftest = app.add_subcommand("selftest", "quick sanity battery");

  std::vector<const char*> argv;
  argv.push_back("pph");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_eval) {
      ProjPoint image = load_map(element).eval(point_from_text(point_text));
      if (approx_bits >= 0)
        out << point_decimal(image, static_cast<unsigned>(approx_bits)) << "\n";
      else
        emit(out, point_to_json(image));
    } else if (*c_compose) {
      emit(out, map_to_json(load_map(lhs) * load_map(rhs)));
    } else if (*c_inverse) {
      emit(out, map_to_json(load_map(element).inverse()));
    } else if (*c_support) {
      emit(out, support_to_json(load_map(element).support()));
    } else if (*c_germ) {
      Side side = side_text == "left" ? Side::Left : Side::Right;
      emit(out, germ_to_json(
                    load_map(element).germ(point_from_text(point_text), side)));
    } else if (*c_orbit) {
      BaseRing ring = ring_from_name(ring_name);
      OrbitMatchResult r = orbit_match(
          matrix_from_json(ring, arg_json(matrix_text)),
          point_from_text(point_text));
      Json j;
      j["h"] = map_to_json(r.h);
      if (r.r) j["r"] = ring_elem_to_json(*r.r);
      if (r.q0) j["q0"] = matrix_to_json(*r.q0);
      emit(out, j);
    } else if (*c_contract) {
      PiecewiseMap g = contraction_map(
          point_from_text(p_text),
          Arc(point_from_text(u_start), point_from_text(u_end)),
          Arc(point_from_text(v_start), point_from_text(v_end)));
      emit(out, map_to_json(g));
    } else if (*c_commute) {
      std::vector<PiecewiseMap> S;
      for (const std::string& e : elements) S.push_back(load_map(e));
      emit(out, map_to_json(commuting_witness(S)));
    } else if (*c_classify) {
      ClassifyOutcome o = classify_pair(load_map(lhs), load_map(rhs), budget);
      Json j;
      switch (o.kind) {
        case ClassifyOutcome::Kind::MetabelianEvidence:
          j["kind"] = "MetabelianEvidence";
          break;
        case ClassifyOutcome::Kind::Witness:
          j["kind"] = "Witness";
          break;
        case ClassifyOutcome::Kind::Unknown:
          j["kind"] = "Unknown";
          break;
      }
      j["budget"] = o.budget;
      if (o.w1) j["w1"] = map_to_json(*o.w1);
      if (o.w2) j["w2"] = map_to_json(*o.w2);
      if (o.h) j["h"] = map_to_json(*o.h);
      emit(out, j);
    } else if (*c_order) {
      switch (biorder_compare(load_map(lhs), load_map(rhs))) {
        case OrderRel::Less: out << "less\n"; break;
        case OrderRel::Equal: out << "equal\n"; break;
        case OrderRel::Greater: out << "greater\n"; break;
      }
    } else if (*c_pp) {
      BaseRing ring = ring_from_name(ring_name);
      Json arcs = arg_json(arcs_arg);
      auto arc_at = [&](const char* key) {
        if (!arcs.contains(key))
          fail(ErrorCode::ParseError,
               std::string("arcs JSON is missing \"") + key + "\"");
        return arc_from_json(arcs.at(key));
      };
      PingPongResult r = pingpong_certificate(
          matrix_from_json(ring, arg_json(m1_text)),
          matrix_from_json(ring, arg_json(m2_text)), arc_at("X1p"),
          arc_at("X1n"), arc_at("X2p"), arc_at("X2n"));
      if (r.verified)
        out << "Verified\n";
      else
        out << "Rejected: " << r.reason << "\n";
    } else if (*c_small) {
      mpq_class eps;
      if (mpq_set_str(eps.get_mpq_t(), eps_text.c_str(), 10) != 0 || eps <= 0)
        fail(ErrorCode::ParseError, "bad eps: " + eps_text);
      eps.canonicalize();
      emit(out, matrix_to_json(small_element(ring_from_name(ring_name), eps)));
    } else if (*c_plot) {
      PiecewiseMap f = load_map(element);
      if (!output_path.empty()) {
        std::ofstream fout(output_path, std::ios::binary);
        if (!fout)
          fail(ErrorCode::ParseError, "cannot write file: " + output_path);
        cmd_plot(f, samples, precision, fout);
      } else {
        cmd_plot(f, samples, precision, out);
      }
    } else if (*c_demo) {
      cmd_demo(out);
    } else if (*c_selftest) {
      cmd_selftest(out);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace pph
