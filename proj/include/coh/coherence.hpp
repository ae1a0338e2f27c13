#pragma once

// de Finetti coherence of books on Łukasiewicz events.
//
// The coherent set of events φ_1..φ_k is the convex hull of the points
// (f_1(v), ..., f_k(v)) where v ranges over the vertices of any complex
// linearizing the McNaughton functions f_i. A book is coherent iff it lies
// in that polytope.

#include "coh/formula.hpp"
#include "coh/polytope.hpp"
#include "coh/pwl.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace coh {

// Ordered event list over a shared variable context. Order fixes the axes of
// [0,1]^k; duplicates are separate coordinates.
class EventList {
 public:
  // Context built from first occurrences.
  explicit EventList(std::vector<EventFormula> events);
  // `ctx` must cover every variable of every event.
  EventList(std::vector<EventFormula> events, VarContext ctx);

  std::size_t size() const { return events_.size(); }
  const std::vector<EventFormula>& events() const { return events_; }
  const EventFormula& operator[](std::size_t i) const { return events_[i]; }
  const VarContext& context() const { return ctx_; }

 private:
  std::vector<EventFormula> events_;
  VarContext ctx_;
};

struct Book {
  std::vector<ExactRational> prices;  // one per event, in list order
};

struct CoherentSet {
  EventList events;
  Polytope polytope;
  // preimages[j] is a refinement vertex mapped onto polytope.vertices()[j].
  std::vector<Point> preimages;
  // Every vertex of the linearizing complex; the Dutch-book payoff is affine
  // per cell, so checking it here checks it everywhere.
  std::vector<Point> valuations;
};

struct StateWitness {
  std::vector<Point> points;  // valuations in [0,1]^n
  std::vector<ExactRational> weights;
};

struct DutchBook {
  std::vector<ExactRational> stakes;  // integer, content 1
  ExactRational guaranteed_loss;
};

struct CoherenceVerdict {
  bool coherent = false;
  std::optional<StateWitness> witness;
  std::optional<DutchBook> dutch_book;
};

struct Interval {
  ExactRational lo;
  ExactRational hi;
};

CoherentSet coherent_set(const EventList& events,
                         RefinementStrategy strategy = RefinementStrategy::Overlay);

CoherenceVerdict check_book(const EventList& events, const Book& book);
CoherenceVerdict check_book(const CoherentSet& set, const Book& book);

// Exact re-verification of a verdict, independent of how it was produced:
// witnesses are evaluated pointwise, Dutch books at every valuation of `set`.
bool verify_witness(const EventList& events, const Book& book, const StateWitness& w);
bool verify_dutch_book(const CoherentSet& set, const Book& book, const DutchBook& d);
bool verify(const CoherentSet& set, const Book& book, const CoherenceVerdict& verdict);

// Coherent prices for `extra` given a coherent book on `events`; a Dutch
// book when the book itself is incoherent.
std::variant<Interval, DutchBook> extension_interval(const EventList& events, const Book& book,
                                                     const EventFormula& extra);

}  // namespace coh
