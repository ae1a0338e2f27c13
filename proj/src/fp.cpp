#include "coh/fp.hpp"

#include "coh/detail/term_parser.hpp"
#include "coh/pwl.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace coh {

namespace {

constexpr unsigned kMaxExponent = 64;

struct ModalLeaf {
  ModalFormula operator()(detail::TokenStream& ts) const {
    const detail::Token& t = ts.next();
    if (t.kind == detail::Tok::Ident)
      throw ParseError("variable '" + std::string(t.text) +
                           "' must appear inside P(...) in a modal formula",
                       t.offset);
    ts.expect(detail::Tok::LParen, "'(' after P");
    auto inner = detail::make_parser<Var>(
        ts, detail::EventLeaf{"nested modality: P is not allowed inside P(...)"});
    EventFormula e = inner.formula();
    ts.expect(detail::Tok::RParen, "')' closing P(");
    return ModalFormula::atom(std::move(e));
  }
};

std::string atom_key(const EventFormula& e) { return canonical_serialize(e); }

ModalFormula top() { return ModalFormula::top(); }

}  // namespace

ModalFormula parse_modal(std::string_view text) {
  detail::TokenStream ts(text);
  auto parser = detail::make_parser<EventFormula>(ts, ModalLeaf{});
  return parser.whole();
}

std::string modal_atom_text(const EventFormula& event) {
  const std::string c = canonical_serialize(event);
  return is_binary(event.op()) ? "P" + c : "P(" + c + ")";
}

std::string canonical_serialize(const ModalFormula& phi) {
  return serialize(phi, modal_atom_text);
}

std::vector<EventFormula> events(const ModalFormula& phi) { return atoms(phi, atom_key); }

std::vector<EventFormula> events(const std::vector<ModalFormula>& phis) {
  std::vector<EventFormula> out;
  std::set<std::string> seen;
  for (const auto& phi : phis)
    for (auto& e : events(phi))
      if (seen.insert(atom_key(e)).second) out.push_back(std::move(e));
  return out;
}

const std::string& TranslationContext::variable_for(const EventFormula& event) {
  std::string key = atom_key(event);
  if (auto it = index_.find(key); it != index_.end()) return names_[it->second];
  index_.emplace(std::move(key), names_.size());
  events_.push_back(event);
  names_.push_back("p" + std::to_string(names_.size() + 1));
  return names_.back();
}

EventFormula translate(const ModalFormula& phi, TranslationContext& ctx) {
  return substitute(phi, [&](const EventFormula& e) {
    return EventFormula::atom(Var{ctx.variable_for(e)});
  });
}

// ---------------------------------------------------------------------------
// Consequence.

namespace {

// Every vertex of q lies strictly outside some facet of c.
bool separated(const Polytope& q, const Polytope& c) {
  for (const auto& h : c.facets())
    if (std::all_of(q.vertices().begin(), q.vertices().end(),
                    [&](const Point& v) { return h.slack(v) < 0; }))
      return true;
  return false;
}

ExactRational ground_value(const EventFormula& phi) { return evaluate(phi, VarContext{}, Point{}); }

}  // namespace

ConsequenceResult decide_consequence(const ModalFormula& premise, const ModalFormula& conclusion) {
  TranslationContext tc;
  const EventFormula phi = translate(premise, tc);
  const EventFormula psi = translate(conclusion, tc);
  const std::vector<EventFormula>& evs = tc.events();

  if (evs.empty()) {
    ConsequenceResult r;
    r.holds = ground_value(phi) < 1 || ground_value(psi) == 1;
    return r;
  }

  const EventList list(evs);
  const CoherentSet cs = coherent_set(list);
  const VarContext pctx = tc.variables();
  const PwlFunction fphi = mcnaughton(phi, pctx);
  const PwlFunction fpsi = mcnaughton(psi, pctx);

  std::optional<Point> counter;
  for (const auto& piece : oneset(fphi)) {
    if (separated(piece, cs.polytope) || separated(cs.polytope, piece)) continue;
    const Polytope q = piece.intersect(cs.polytope);
    if (q.is_empty()) continue;
    for (const auto& cell : fpsi.cells()) {
      if (separated(q, cell.polytope)) continue;
      const Polytope r = q.intersect(cell.polytope);
      for (const auto& v : r.vertices())
        if (cell.form(v) < 1) {
          counter = v;
          break;
        }
      if (counter) break;
    }
    if (counter) break;
  }

  ConsequenceResult out;
  out.holds = !counter;
  if (counter) {
    Book book{*counter};
    if (!check_book(cs, book).coherent || evaluate(phi, pctx, *counter) != 1 ||
        evaluate(psi, pctx, *counter) >= 1)
      throw Error("internal: countermodel failed to verify");
    out.countermodel = Countermodel{list, std::move(book)};
  }
  return out;
}

ConsequenceResult decide_theorem(const ModalFormula& phi) { return decide_consequence(top(), phi); }

// ---------------------------------------------------------------------------
// χ synthesis.

namespace {

// Terms for min(1, max(0, c + a·x)) over [0,1]^n, memoised so equal
// subterms are shared.
class TruncatedAffine {
 public:
  explicit TruncatedAffine(const VarContext& ctx) : ctx_(ctx) {}

  EventFormula operator()(const BigInt& c, const IntVector& a) {
    const auto key = std::make_pair(c, a);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    EventFormula t = build(c, a);
    memo_.emplace(key, t);
    return t;
  }

 private:
  static EventFormula oplus(const EventFormula& l, const EventFormula& r) {
    if (l.op() == Connective::Bot) return r;
    if (r.op() == Connective::Bot) return l;
    if (l.op() == Connective::Top || r.op() == Connective::Top) return EventFormula::top();
    return EventFormula::oplus(l, r);
  }
  static EventFormula otimes(const EventFormula& l, const EventFormula& r) {
    if (l.op() == Connective::Top) return r;
    if (r.op() == Connective::Top) return l;
    if (l.op() == Connective::Bot || r.op() == Connective::Bot) return EventFormula::bot();
    return EventFormula::otimes(l, r);
  }

  EventFormula build(const BigInt& c, const IntVector& a) {
    BigInt lo = c, hi = c;
    std::optional<std::size_t> j;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < 0) lo += a[i];
      if (a[i] > 0) hi += a[i];
      if (a[i] != 0) j = i;
    }
    if (lo >= 1) return EventFormula::top();
    if (hi <= 0) return EventFormula::bot();
    // trunc(g + y) = (trunc(g) ⊕ y) ⊙ trunc(g + 1) for y ∈ [0,1]. Peel one
    // unit of the last nonzero coefficient: y = x_j, or y = ¬x_j with the
    // constant shifted down by one.
    IntVector rest = a;
    const EventFormula x = EventFormula::atom(Var{ctx_.name(*j)});
    if (a[*j] > 0) {
      rest[*j] -= 1;
      return otimes(oplus((*this)(c, rest), x), (*this)(c + 1, rest));
    }
    rest[*j] += 1;
    return otimes(oplus((*this)(c - 1, rest), EventFormula::neg(x)), (*this)(c, rest));
  }

  const VarContext& ctx_;
  std::map<std::pair<BigInt, IntVector>, EventFormula> memo_;
};

}  // namespace

EventFormula chi_synthesis(const Polytope& p, const VarContext& ctx) {
  if (p.ambient_dim() != ctx.size())
    throw InputError("polytope lives in dimension " + std::to_string(p.ambient_dim()) +
                     " but the context has " + std::to_string(ctx.size()) + " variables");
  for (const auto& v : p.vertices())
    for (const auto& x : v)
      if (!in_unit_interval(x)) throw InputError("polytope is not contained in the unit cube");

  EventFormula chi = EventFormula::bot();
  if (!p.is_empty()) {
    std::vector<Halfspace> hs = p.halfspaces();
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    TruncatedAffine trunc(ctx);
    std::optional<EventFormula> acc;
    for (const auto& h : hs) {
      BigInt cube_max = 0;
      for (const auto& a : h.normal)
        if (a > 0) cube_max += a;
      if (cube_max <= h.offset) continue;  // valid on the whole cube
      // a·x ≤ b  ⇔  1 + b − a·x ≥ 1
      IntVector neg = h.normal;
      for (auto& a : neg) a = -a;
      EventFormula term = trunc(h.offset + 1, neg);
      acc = acc ? EventFormula::land(*acc, term) : term;
    }
    chi = acc ? *acc : EventFormula::top();
  }
  if (!oneset_equals(mcnaughton(chi, ctx), p))
    throw Error("internal: synthesized formula does not have the requested oneset");
  return chi;
}

// ---------------------------------------------------------------------------
// Local deduction.

std::optional<unsigned> local_deduction_exponent(const ModalFormula& premise,
                                                 const ModalFormula& conclusion) {
  if (!decide_consequence(premise, conclusion).holds) return std::nullopt;
  for (unsigned n = 1; n <= kMaxExponent; ++n) {
    const ModalFormula lhs = n == 1 ? premise : ModalFormula::power(premise, n);
    if (decide_theorem(ModalFormula::imp(lhs, conclusion)).holds) return n;
  }
  throw Error("local deduction exponent exceeds " + std::to_string(kMaxExponent));
}

// ---------------------------------------------------------------------------
// Substitutions.

ProbSubstitution ProbSubstitution::identity(const std::vector<EventFormula>& atoms) {
  ProbSubstitution s;
  for (const auto& a : atoms) s.set(a, ModalFormula::atom(a));
  return s;
}

void ProbSubstitution::set(const EventFormula& atom, ModalFormula image) {
  std::string key = atom_key(atom);
  if (auto it = index_.find(key); it != index_.end()) {
    entries_[it->second].second = std::move(image);
    return;
  }
  index_.emplace(std::move(key), entries_.size());
  entries_.emplace_back(atom, std::move(image));
}

const ModalFormula* ProbSubstitution::find(const EventFormula& atom) const {
  auto it = index_.find(atom_key(atom));
  return it == index_.end() ? nullptr : &entries_[it->second].second;
}

const ModalFormula& ProbSubstitution::at(const EventFormula& atom) const {
  if (const auto* m = find(atom)) return *m;
  throw InputError("substitution is not defined on P(" + canonical_serialize(atom) + ")");
}

ModalFormula apply(const ProbSubstitution& sigma, const ModalFormula& phi) {
  return substitute(phi, [&](const EventFormula& e) { return sigma.at(e); });
}

SubstitutionCheck is_prob_substitution(const ProbSubstitution& sigma,
                                       const std::vector<EventFormula>& atoms_in) {
  std::vector<EventFormula> atoms;
  {
    std::set<std::string> seen;
    for (const auto& a : atoms_in)
      if (seen.insert(atom_key(a)).second) atoms.push_back(a);
  }
  if (atoms.empty()) return {true, std::nullopt};

  std::vector<ModalFormula> images;
  for (const auto& a : atoms) images.push_back(sigma.at(a));
  const CoherentSet source = coherent_set(EventList(atoms));

  TranslationContext tc;
  std::vector<EventFormula> translated;
  for (const auto& r : images) translated.push_back(translate(r, tc));

  const auto check = [&](Point img) -> SubstitutionCheck {
    if (source.polytope.contains(img)) return {true, std::nullopt};
    return {false, std::move(img)};
  };

  if (tc.events().empty()) {
    Point img;
    for (const auto& t : translated) img.push_back(ground_value(t));
    return check(std::move(img));
  }

  const CoherentSet target = coherent_set(EventList(tc.events()));
  const VarContext pctx = tc.variables();
  std::vector<PwlFunction> fs;
  for (const auto& t : translated) fs.push_back(mcnaughton(t, pctx));
  const Refinement r = common_refinement(fs);
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    if (separated(target.polytope, r.cells[c])) continue;
    const Polytope q = r.cells[c].intersect(target.polytope);
    for (const auto& v : q.vertices()) {
      Point img;
      for (const auto& f : r.forms[c]) img.push_back(f(v));
      if (auto res = check(std::move(img)); !res.holds) return res;
    }
  }
  return {true, std::nullopt};
}

UnificationProblem make_unification_problem(
    std::vector<std::pair<ModalFormula, ModalFormula>> identities,
    const std::vector<EventFormula>& declared) {
  UnificationProblem p;
  std::set<std::string> seen;
  const auto add = [&](const EventFormula& e) {
    if (seen.insert(atom_key(e)).second) p.atoms.push_back(e);
  };
  for (const auto& e : declared) add(e);
  for (const auto& [l, r] : identities) {
    for (const auto& e : events(l)) add(e);
    for (const auto& e : events(r)) add(e);
  }
  p.identities = std::move(identities);
  return p;
}

bool verify_unifier(const UnificationProblem& problem, const ProbSubstitution& sigma) {
  const UnificationProblem padded = make_unification_problem(problem.identities, problem.atoms);
  if (!is_prob_substitution(sigma, padded.atoms).holds) return false;
  for (const auto& [l, r] : padded.identities)
    if (!decide_theorem(ModalFormula::iff(apply(sigma, l), apply(sigma, r))).holds) return false;
  return true;
}

bool verify_generality(const ProbSubstitution& sigma, const ProbSubstitution& tau,
                       const ProbSubstitution& delta, const UnificationProblem& problem) {
  const UnificationProblem padded = make_unification_problem(problem.identities, problem.atoms);
  // Resolve every domain first so a mismatch is reported regardless of the
  // verdict on earlier atoms.
  std::vector<std::pair<ModalFormula, ModalFormula>> pairs;
  for (const auto& a : padded.atoms)
    pairs.emplace_back(sigma.at(a), apply(delta, tau.at(a)));
  for (const auto& [s, dt] : pairs)
    if (!decide_theorem(ModalFormula::iff(s, dt)).holds) return false;
  return true;
}

}  // namespace coh
