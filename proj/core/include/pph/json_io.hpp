#pragma once

#include <string>

#include <json.hpp>

#include "pph/constructions.hpp"
#include "pph/piecewise.hpp"

namespace pph {

using Json = nlohmann::ordered_json;

/// Parse text to JSON, reporting failures as ParseError.
Json parse_json(const std::string& text);

Json ring_to_json(const BaseRing& ring);
BaseRing ring_from_json(const Json& j);
/// Ring by display name: "Z", "Z[1/7]", "Z[sqrt2]".
BaseRing ring_from_name(const std::string& name);

Json ring_elem_to_json(const RingElem& x);
RingElem ring_elem_from_json(const BaseRing& ring, const Json& j);
RingElem ring_elem_from_text(const BaseRing& ring, const std::string& text);

Json alg_to_json(const AlgebraicReal& x);
AlgebraicReal alg_from_json(const Json& j);

Json point_to_json(const ProjPoint& p);
ProjPoint point_from_json(const Json& j);
/// "inf", a rational "p/q", or an AlgebraicReal JSON object.
ProjPoint point_from_text(const std::string& text);

Json matrix_to_json(const ProjMatrix& m);
ProjMatrix matrix_from_json(const BaseRing& ring, const Json& j);

Json map_to_json(const PiecewiseMap& f);
PiecewiseMap map_from_json(const Json& j);

Json arc_to_json(const Arc& a);
Arc arc_from_json(const Json& j);

Json support_to_json(const SupportSet& s);
Json germ_to_json(const Germ& g);

}  // namespace pph
