#pragma once

// JSON views of results. Rationals are always strings ("p/q" or "p"); key
// order is insertion order so output is byte-stable.

#include "coh/coherence.hpp"
#include "coh/fp.hpp"
#include "coh/polytope.hpp"

#include <json.hpp>

namespace coh {

using Json = nlohmann::ordered_json;

Json to_json(const ExactRational& q);
Json to_json(std::span<const ExactRational> point);
Json to_json(const Halfspace& h);
Json to_json(const Polytope& p);
Json to_json(const StateWitness& w);
Json to_json(const DutchBook& d);
Json to_json(const CoherenceVerdict& v);
Json to_json(const Interval& i);
// {"event": "price", ...} keyed by canonical event text.
Json to_json(const Countermodel& m);
Json to_json(const ConsequenceResult& r);

// Strict: only strings of the form accepted by parse_rational.
ExactRational rational_from_json(const Json& j);
Point point_from_json(const Json& j);

}  // namespace coh
