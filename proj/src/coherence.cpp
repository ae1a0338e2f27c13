#include "coh/coherence.hpp"

#include "coh/lp.hpp"

#include <algorithm>
#include <map>

namespace coh {

EventList::EventList(std::vector<EventFormula> events)
    : events_(std::move(events)), ctx_(variables(events_)) {}

EventList::EventList(std::vector<EventFormula> events, VarContext ctx)
    : events_(std::move(events)), ctx_(std::move(ctx)) {
  for (const auto& e : events_)
    for (const auto& v : atoms(e, [](const Var& v) { return v.name; }))
      if (!ctx_.contains(v.name)) throw InputError("unknown variable '" + v.name + "'");
}

namespace {

void check_book_shape(const EventList& events, const Book& book) {
  if (book.prices.size() != events.size())
    throw InputError("book has " + std::to_string(book.prices.size()) + " prices for " +
                     std::to_string(events.size()) + " events");
  for (const auto& p : book.prices)
    if (!in_unit_interval(p)) throw InputError("price " + to_string(p) + " is outside [0,1]");
}

Point image_of(const EventList& events, const Point& v) {
  Point img;
  img.reserve(events.size());
  for (const auto& e : events.events()) img.push_back(evaluate(e, events.context(), v));
  return img;
}

}  // namespace

CoherentSet coherent_set(const EventList& events, RefinementStrategy strategy) {
  if (events.size() == 0) throw InputError("the coherent set of an empty event list is undefined");
  if (events.size() > max_dimension())
    throw DimensionError(std::to_string(events.size()) + " events exceed the dimension cap of " +
                         std::to_string(max_dimension()));
  std::vector<PwlFunction> fs;
  fs.reserve(events.size());
  for (const auto& e : events.events()) fs.push_back(mcnaughton(e, events.context()));
  const Refinement r = common_refinement(fs, strategy);

  // Vertex images through each cell's forms; continuity makes the choice of
  // cell irrelevant.
  std::map<Point, Point> image;
  for (std::size_t c = 0; c < r.cells.size(); ++c)
    for (const auto& v : r.cells[c].vertices()) {
      if (image.contains(v)) continue;
      Point img;
      for (const auto& f : r.forms[c]) img.push_back(f(v));
      image.emplace(v, std::move(img));
    }

  std::vector<Point> pts;
  std::vector<Point> valuations;
  for (const auto& [v, img] : image) {
    valuations.push_back(v);
    pts.push_back(img);
  }
  Polytope poly = Polytope::hull(events.size(), pts);

  std::vector<Point> preimages;
  for (const auto& hv : poly.vertices())
    for (const auto& [v, img] : image)
      if (img == hv) {
        preimages.push_back(v);
        break;
      }
  return CoherentSet{events, std::move(poly), std::move(preimages), std::move(valuations)};
}

CoherenceVerdict check_book(const EventList& events, const Book& book) {
  check_book_shape(events, book);
  return check_book(coherent_set(events), book);
}

CoherenceVerdict check_book(const CoherentSet& set, const Book& book) {
  check_book_shape(set.events, book);
  CoherenceVerdict out;
  const auto cert = membership(book.prices, set.polytope);
  if (const auto* w = std::get_if<ConvexWeights>(&cert)) {
    StateWitness sw;
    for (std::size_t j = 0; j < w->weights.size(); ++j) {
      if (w->weights[j] == 0) continue;
      sw.points.push_back(set.preimages[j]);
      sw.weights.push_back(w->weights[j]);
    }
    out.coherent = true;
    out.witness = std::move(sw);
  } else {
    // normal·x <= threshold on C_E and normal·β >= threshold + margin: the
    // opposite stakes lose at least `margin` against every valuation.
    const auto& s = std::get<Separator>(cert);
    DutchBook d;
    for (const auto& a : s.normal) d.stakes.push_back(-a);
    d.guaranteed_loss = s.margin;
    out.coherent = false;
    out.dutch_book = std::move(d);
  }
  if (!verify(set, book, out)) throw Error("internal: coherence certificate failed to verify");
  return out;
}

bool verify_witness(const EventList& events, const Book& book, const StateWitness& w) {
  if (w.points.size() != w.weights.size() || w.points.empty()) return false;
  ExactRational total = 0;
  Point acc(events.size(), 0);
  for (std::size_t j = 0; j < w.points.size(); ++j) {
    if (w.weights[j] < 0) return false;
    const auto& v = w.points[j];
    if (v.size() != events.context().size()) return false;
    for (const auto& x : v)
      if (!in_unit_interval(x)) return false;
    total += w.weights[j];
    const Point img = image_of(events, v);
    for (std::size_t i = 0; i < img.size(); ++i) acc[i] += w.weights[j] * img[i];
  }
  return total == 1 && acc == book.prices;
}

bool verify_dutch_book(const CoherentSet& set, const Book& book, const DutchBook& d) {
  if (d.stakes.size() != set.events.size() || d.guaranteed_loss <= 0) return false;
  for (const auto& v : set.valuations) {
    const Point img = image_of(set.events, v);
    ExactRational payoff = 0;
    for (std::size_t i = 0; i < img.size(); ++i) payoff += d.stakes[i] * (book.prices[i] - img[i]);
    if (payoff > -d.guaranteed_loss) return false;
  }
  return true;
}

bool verify(const CoherentSet& set, const Book& book, const CoherenceVerdict& verdict) {
  if (verdict.witness.has_value() == verdict.dutch_book.has_value()) return false;
  if (verdict.coherent != verdict.witness.has_value()) return false;
  if (verdict.witness) return verify_witness(set.events, book, *verdict.witness);
  return verify_dutch_book(set, book, *verdict.dutch_book);
}

std::variant<Interval, DutchBook> extension_interval(const EventList& events, const Book& book,
                                                     const EventFormula& extra) {
  check_book_shape(events, book);
  const CoherenceVerdict v = check_book(events, book);
  if (!v.coherent) return *v.dutch_book;

  VarContext ctx = events.context();
  ctx.merge(variables(extra));
  std::vector<EventFormula> all = events.events();
  all.push_back(extra);
  const CoherentSet ext = coherent_set(EventList(std::move(all), std::move(ctx)));

  // Convex weights λ over the vertices of C_{E ∪ {ψ}} with the first k
  // coordinates pinned to the book; optimise the last coordinate.
  const auto& verts = ext.polytope.vertices();
  const std::size_t k = events.size();
  lp::Matrix a;
  lp::Row b;
  for (std::size_t i = 0; i < k; ++i) {
    lp::Row r;
    for (const auto& vert : verts) r.push_back(vert[i]);
    a.push_back(std::move(r));
    b.push_back(book.prices[i]);
  }
  a.emplace_back(verts.size(), ExactRational(1));
  b.push_back(1);
  lp::Row obj;
  for (const auto& vert : verts) obj.push_back(vert[k]);
  const auto lo = lp::minimize(a, b, obj);
  const auto hi = lp::maximize(a, b, obj);
  if (lo.status != lp::Status::Optimal || hi.status != lp::Status::Optimal)
    throw Error("internal: coherent book has no coherent extension");
  return Interval{lo.objective, hi.objective};
}

}  // namespace coh
