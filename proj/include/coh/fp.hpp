#pragma once

// FP(Ł,Ł): Łukasiewicz combinations of atoms P(φ), φ an event formula.
//
// Consequence Φ ⊢ Ψ reduces to propositional geometry: translate P(φ_i) to a
// fresh variable p_i, and check that every coherent book β ∈ C_E with
// Φ•(β) = 1 also has Ψ•(β) = 1.

#include "coh/coherence.hpp"
#include "coh/formula.hpp"
#include "coh/polytope.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coh {

using ModalFormula = Term<EventFormula>;

// Event grammar plus the atom "P(" event ")". Variables outside P and P
// nested inside P are rejected.
ModalFormula parse_modal(std::string_view text);
std::string canonical_serialize(const ModalFormula& phi);
// "P(x)", "P(x + y)": the event's own outer parentheses are reused.
std::string modal_atom_text(const EventFormula& event);

// The event formulas under P, in order of first occurrence, deduplicated by
// canonical form.
std::vector<EventFormula> events(const ModalFormula& phi);
std::vector<EventFormula> events(const std::vector<ModalFormula>& phis);

// Canonical event -> p1, p2, ... in insertion order.
class TranslationContext {
 public:
  const std::string& variable_for(const EventFormula& event);
  const std::vector<EventFormula>& events() const { return events_; }
  VarContext variables() const { return VarContext(names_); }

 private:
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<EventFormula> events_;
  std::vector<std::string> names_;
};

EventFormula translate(const ModalFormula& phi, TranslationContext& ctx);

struct Countermodel {
  EventList events;
  Book book;
};

struct ConsequenceResult {
  bool holds = false;
  std::optional<Countermodel> countermodel;
};

ConsequenceResult decide_consequence(const ModalFormula& premise, const ModalFormula& conclusion);
ConsequenceResult decide_theorem(const ModalFormula& phi);

// A formula over `ctx` whose oneset is exactly `p` (p ⊆ [0,1]^n).
EventFormula chi_synthesis(const Polytope& p, const VarContext& ctx);

// Least n with ⊢ Φ^n → Ψ, or nothing when Φ ⊬ Ψ.
std::optional<unsigned> local_deduction_exponent(const ModalFormula& premise,
                                                 const ModalFormula& conclusion);

class ProbSubstitution {
 public:
  using Entry = std::pair<EventFormula, ModalFormula>;

  static ProbSubstitution identity(const std::vector<EventFormula>& atoms);

  void set(const EventFormula& atom, ModalFormula image);
  const ModalFormula* find(const EventFormula& atom) const;
  // Throws InputError when `atom` is outside the domain.
  const ModalFormula& at(const EventFormula& atom) const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<Entry> entries_;
};

ModalFormula apply(const ProbSubstitution& sigma, const ModalFormula& phi);

struct SubstitutionCheck {
  bool holds = false;
  std::optional<Point> witness;  // image point outside C_E
};

SubstitutionCheck is_prob_substitution(const ProbSubstitution& sigma,
                                       const std::vector<EventFormula>& atoms);

struct UnificationProblem {
  std::vector<EventFormula> atoms;
  std::vector<std::pair<ModalFormula, ModalFormula>> identities;
};

// Atoms = `declared` followed by any further atoms of the identities.
UnificationProblem make_unification_problem(
    std::vector<std::pair<ModalFormula, ModalFormula>> identities,
    const std::vector<EventFormula>& declared = {});

bool verify_unifier(const UnificationProblem& problem, const ProbSubstitution& sigma);

// σ ≡ δ∘τ atomwise on the problem's atoms. Throws InputError when a domain
// does not compose.
bool verify_generality(const ProbSubstitution& sigma, const ProbSubstitution& tau,
                       const ProbSubstitution& delta, const UnificationProblem& problem);

}  // namespace coh
