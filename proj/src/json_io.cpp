#include "coh/json_io.hpp"

namespace coh {

Json to_json(const ExactRational& q) { return to_string(q); }

Json to_json(std::span<const ExactRational> point) {
  Json a = Json::array();
  for (const auto& x : point) a.push_back(to_string(x));
  return a;
}

Json to_json(const Halfspace& h) {
  Json n = Json::array();
  for (const auto& c : h.normal) n.push_back(c.get_str());
  return Json{{"normal", std::move(n)}, {"offset", h.offset.get_str()}};
}

Json to_json(const Polytope& p) {
  Json j;
  j["ambient_dimension"] = p.ambient_dim();
  j["dimension"] = p.dimension();
  Json verts = Json::array();
  for (const auto& v : p.vertices()) verts.push_back(to_json(v));
  j["vertices"] = std::move(verts);
  Json facets = Json::array();
  for (const auto& h : p.facets()) facets.push_back(to_json(h));
  j["facets"] = std::move(facets);
  Json eqs = Json::array();
  for (const auto& h : p.equations()) eqs.push_back(to_json(h));
  j["equations"] = std::move(eqs);
  return j;
}

Json to_json(const StateWitness& w) {
  Json pts = Json::array();
  for (const auto& p : w.points) pts.push_back(to_json(p));
  return Json{{"points", std::move(pts)}, {"weights", to_json(w.weights)}};
}

Json to_json(const DutchBook& d) {
  return Json{{"stakes", to_json(d.stakes)}, {"guaranteed_loss", to_json(d.guaranteed_loss)}};
}

Json to_json(const CoherenceVerdict& v) {
  Json j;
  j["coherent"] = v.coherent;
  if (v.witness) j["witness"] = to_json(*v.witness);
  if (v.dutch_book) j["dutch_book"] = to_json(*v.dutch_book);
  return j;
}

Json to_json(const Interval& i) { return Json{{"lo", to_json(i.lo)}, {"hi", to_json(i.hi)}}; }

Json to_json(const Countermodel& m) {
  Json j = Json::object();
  for (std::size_t i = 0; i < m.events.size(); ++i)
    j[canonical_serialize(m.events[i])] = to_json(m.book.prices[i]);
  return j;
}

Json to_json(const ConsequenceResult& r) {
  Json j;
  j["holds"] = r.holds;
  if (r.countermodel) j["countermodel"] = to_json(*r.countermodel);
  return j;
}

ExactRational rational_from_json(const Json& j) {
  if (!j.is_string()) throw InputError("rationals must be JSON strings, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

Point point_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("points must be JSON arrays, got " + j.dump());
  Point p;
  for (const auto& x : j) p.push_back(rational_from_json(x));
  return p;
}

}  // namespace coh
