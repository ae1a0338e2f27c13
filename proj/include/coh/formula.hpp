#pragma once

// Łukasiewicz terms. One AST template serves both layers of the language:
// event formulas have propositional variables at the leaves, modal formulas
// have P(event) atoms at the leaves.

#include "coh/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coh {

enum class Connective {
  Atom,
  Bot,
  Top,
  Neg,
  OPlus,
  OTimes,
  Imp,
  Or,
  And,
  Iff,
  Power,     // lhs ^ n
  Multiple,  // n . lhs
};

bool is_binary(Connective c);
// Symbol used by the concrete syntax ("+", "->", ...); empty for non-binary.
std::string_view symbol(Connective c);

template <class A>
class Term {
 public:
  using Atom = A;

  static Term atom(A a) { return Term(make(Connective::Atom, std::optional<A>(std::move(a)))); }
  static Term bot() { return Term(make(Connective::Bot)); }
  static Term top() { return Term(make(Connective::Top)); }
  static Term neg(Term t) { return Term(make(Connective::Neg, {}, std::move(t))); }
  static Term binary(Connective c, Term l, Term r) {
    return Term(make(c, {}, std::move(l), std::move(r)));
  }
  static Term oplus(Term l, Term r) { return binary(Connective::OPlus, std::move(l), std::move(r)); }
  static Term otimes(Term l, Term r) { return binary(Connective::OTimes, std::move(l), std::move(r)); }
  static Term imp(Term l, Term r) { return binary(Connective::Imp, std::move(l), std::move(r)); }
  static Term lor(Term l, Term r) { return binary(Connective::Or, std::move(l), std::move(r)); }
  static Term land(Term l, Term r) { return binary(Connective::And, std::move(l), std::move(r)); }
  static Term iff(Term l, Term r) { return binary(Connective::Iff, std::move(l), std::move(r)); }
  // n >= 1 is enforced here, not only by the parser.
  static Term power(Term t, unsigned n) {
    if (n < 1) throw InputError("power exponent must be >= 1");
    return Term(make(Connective::Power, {}, std::move(t), {}, n));
  }
  static Term multiple(unsigned n, Term t) {
    if (n < 1) throw InputError("multiple factor must be >= 1");
    return Term(make(Connective::Multiple, {}, std::move(t), {}, n));
  }

  Connective op() const { return node_->op; }
  const A& atom_value() const { return *node_->atom; }
  // Operand of unary nodes (Neg, Power, Multiple) and left side of binary ones.
  const Term& lhs() const { return *node_->lhs; }
  const Term& rhs() const { return *node_->rhs; }
  unsigned count() const { return node_->n; }

  // Identity of the shared node; stable while any copy is alive.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.op != y.op || x.n != y.n) return false;
    switch (x.op) {
      case Connective::Atom: return *x.atom == *y.atom;
      case Connective::Bot:
      case Connective::Top: return true;
      case Connective::Neg:
      case Connective::Power:
      case Connective::Multiple: return *x.lhs == *y.lhs;
      default: return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
    }
  }

 private:
  struct Node;

  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Connective op,
                                          std::optional<A> atom = std::nullopt,
                                          std::optional<Term> l = {},
                                          std::optional<Term> r = {},
                                          unsigned n = 0) {
    return std::make_shared<const Node>(
        Node{op, std::move(atom), std::move(l), std::move(r), n});
  }

  std::shared_ptr<const Node> node_;
};

template <class A>
struct Term<A>::Node {
  Connective op;
  std::optional<A> atom;
  std::optional<Term> lhs;
  std::optional<Term> rhs;
  unsigned n = 0;
};

// Standard MV-algebra operations on [0,1].
inline ExactRational mv_oplus(const ExactRational& a, const ExactRational& b) {
  ExactRational s = a + b;
  return s > 1 ? ExactRational(1) : s;
}
inline ExactRational mv_otimes(const ExactRational& a, const ExactRational& b) {
  ExactRational s = a + b - 1;
  return s < 0 ? ExactRational(0) : s;
}
inline ExactRational mv_neg(const ExactRational& a) { return 1 - a; }

struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};

using EventFormula = Term<Var>;

// ---------------------------------------------------------------------------
// Generic algorithms over terms.

namespace detail {

template <class A>
bool atomic_for_print(const Term<A>& t) {
  const auto c = t.op();
  return c == Connective::Atom || c == Connective::Bot || c == Connective::Top ||
         is_binary(c);
}

template <class A, class Printer>
void serialize_into(const Term<A>& t, const Printer& atom, std::string& out) {
  switch (t.op()) {
    case Connective::Atom: out += atom(t.atom_value()); return;
    case Connective::Bot: out += '0'; return;
    case Connective::Top: out += '1'; return;
    case Connective::Neg:
      out += '~';
      if (atomic_for_print(t.lhs()) || t.lhs().op() == Connective::Neg) {
        serialize_into(t.lhs(), atom, out);
      } else {
        out += '(';
        serialize_into(t.lhs(), atom, out);
        out += ')';
      }
      return;
    case Connective::Power:
    case Connective::Multiple: {
      const bool mult = t.op() == Connective::Multiple;
      if (mult) out += std::to_string(t.count()) + ".";
      if (atomic_for_print(t.lhs())) {
        serialize_into(t.lhs(), atom, out);
      } else {
        out += '(';
        serialize_into(t.lhs(), atom, out);
        out += ')';
      }
      if (!mult) out += "^" + std::to_string(t.count());
      return;
    }
    default:
      out += '(';
      serialize_into(t.lhs(), atom, out);
      out += ' ';
      out += symbol(t.op());
      out += ' ';
      serialize_into(t.rhs(), atom, out);
      out += ')';
  }
}

}  // namespace detail

// Fully parenthesised text; `atom` renders a leaf.
template <class A, class Printer>
std::string serialize(const Term<A>& t, const Printer& atom) {
  std::string out;
  detail::serialize_into(t, atom, out);
  return out;
}

// Rebuilds the term bottom-up, replacing each leaf by f(leaf), which may be
// an arbitrary term over another atom type. Shared subterms stay shared.
template <class A, class F>
auto substitute(const Term<A>& t, F&& f) -> decltype(f(t.atom_value())) {
  using Out = decltype(f(t.atom_value()));
  std::unordered_map<const void*, Out> memo;
  std::function<Out(const Term<A>&)> go = [&](const Term<A>& s) -> Out {
    if (auto it = memo.find(s.id()); it != memo.end()) return it->second;
    Out r = [&]() -> Out {
      switch (s.op()) {
        case Connective::Atom: return f(s.atom_value());
        case Connective::Bot: return Out::bot();
        case Connective::Top: return Out::top();
        case Connective::Neg: return Out::neg(go(s.lhs()));
        case Connective::Power: return Out::power(go(s.lhs()), s.count());
        case Connective::Multiple: return Out::multiple(s.count(), go(s.lhs()));
        default: return Out::binary(s.op(), go(s.lhs()), go(s.rhs()));
      }
    }();
    memo.emplace(s.id(), r);
    return r;
  };
  return go(t);
}

// Rewrites Power and Multiple into left-associated ⊙ / ⊕ chains; every other
// connective is kept.
template <class A>
Term<A> expand_powers(const Term<A>& t) {
  std::unordered_map<const void*, Term<A>> memo;
  std::function<Term<A>(const Term<A>&)> go = [&](const Term<A>& s) -> Term<A> {
    if (auto it = memo.find(s.id()); it != memo.end()) return it->second;
    Term<A> r = [&]() -> Term<A> {
      switch (s.op()) {
        case Connective::Atom:
        case Connective::Bot:
        case Connective::Top: return s;
        case Connective::Neg: return Term<A>::neg(go(s.lhs()));
        case Connective::Power:
        case Connective::Multiple: {
          const auto c = s.op() == Connective::Power ? Connective::OTimes
                                                     : Connective::OPlus;
          Term<A> base = go(s.lhs());
          Term<A> acc = base;
          for (unsigned i = 1; i < s.count(); ++i)
            acc = Term<A>::binary(c, acc, base);
          return acc;
        }
        default: return Term<A>::binary(s.op(), go(s.lhs()), go(s.rhs()));
      }
    }();
    memo.emplace(s.id(), r);
    return r;
  };
  return go(t);
}

// Rewrites into the primitive basis {atom, ⊥, ¬, ⊕} using
//   ⊤ = ¬⊥, a→b = ¬a⊕b, a∨b = (a→b)→b, a∧b = ¬(¬a∨¬b),
//   a⊙b = ¬(¬a⊕¬b), a↔b = (a→b)∧(b→a), powers and multiples unfolded.
// Total and idempotent.
template <class A>
Term<A> normalize(const Term<A>& t) {
  using T = Term<A>;
  std::unordered_map<const void*, T> memo;
  const auto imp = [](const T& a, const T& b) { return T::oplus(T::neg(a), b); };
  const auto lor = [&](const T& a, const T& b) { return imp(imp(a, b), b); };
  const auto land = [&](const T& a, const T& b) { return T::neg(lor(T::neg(a), T::neg(b))); };
  const auto otimes = [](const T& a, const T& b) { return T::neg(T::oplus(T::neg(a), T::neg(b))); };
  std::function<T(const T&)> go = [&](const T& s) -> T {
    if (auto it = memo.find(s.id()); it != memo.end()) return it->second;
    T r = [&]() -> T {
      switch (s.op()) {
        case Connective::Atom:
        case Connective::Bot: return s;
        case Connective::Top: return T::neg(T::bot());
        case Connective::Neg: return T::neg(go(s.lhs()));
        case Connective::OPlus: return T::oplus(go(s.lhs()), go(s.rhs()));
        case Connective::OTimes: return otimes(go(s.lhs()), go(s.rhs()));
        case Connective::Imp: return imp(go(s.lhs()), go(s.rhs()));
        case Connective::Or: return lor(go(s.lhs()), go(s.rhs()));
        case Connective::And: return land(go(s.lhs()), go(s.rhs()));
        case Connective::Iff: {
          const T a = go(s.lhs());
          const T b = go(s.rhs());
          return land(imp(a, b), imp(b, a));
        }
        case Connective::Power:
        case Connective::Multiple: {
          const T base = go(s.lhs());
          T acc = base;
          for (unsigned i = 1; i < s.count(); ++i)
            acc = s.op() == Connective::Power ? otimes(acc, base) : T::oplus(acc, base);
          return acc;
        }
      }
      return s;
    }();
    memo.emplace(s.id(), r);
    return r;
  };
  return go(t);
}

// Standard-MV-algebra value of the term under a leaf valuation.
template <class A, class Valuation>
ExactRational evaluate(const Term<A>& t, const Valuation& value) {
  std::unordered_map<const void*, ExactRational> memo;
  std::function<ExactRational(const Term<A>&)> go =
      [&](const Term<A>& s) -> ExactRational {
    if (auto it = memo.find(s.id()); it != memo.end()) return it->second;
    ExactRational r;
    switch (s.op()) {
      case Connective::Atom: r = value(s.atom_value()); break;
      case Connective::Bot: r = 0; break;
      case Connective::Top: r = 1; break;
      case Connective::Neg: r = 1 - go(s.lhs()); break;
      case Connective::Power: {
        const ExactRational a = go(s.lhs());
        r = a;
        for (unsigned i = 1; i < s.count(); ++i) r = mv_otimes(r, a);
        break;
      }
      case Connective::Multiple: {
        const ExactRational a = go(s.lhs());
        r = a;
        for (unsigned i = 1; i < s.count(); ++i) r = mv_oplus(r, a);
        break;
      }
      default: {
        const ExactRational a = go(s.lhs());
        const ExactRational b = go(s.rhs());
        switch (s.op()) {
          case Connective::OPlus: r = mv_oplus(a, b); break;
          case Connective::OTimes: r = mv_otimes(a, b); break;
          case Connective::Imp: r = mv_oplus(mv_neg(a), b); break;
          case Connective::Or: r = a < b ? b : a; break;
          case Connective::And: r = a < b ? a : b; break;
          case Connective::Iff: r = a < b ? mv_oplus(mv_neg(b), a) : mv_oplus(mv_neg(a), b); break;
          default: break;
        }
      }
    }
    memo.emplace(s.id(), r);
    return r;
  };
  return go(t);
}

// Depth of the formula after unfolding powers and multiples; leaves have
// depth 0.
template <class A>
std::size_t depth(const Term<A>& t) {
  std::unordered_map<const void*, std::size_t> memo;
  std::function<std::size_t(const Term<A>&)> go = [&](const Term<A>& s) -> std::size_t {
    if (auto it = memo.find(s.id()); it != memo.end()) return it->second;
    std::size_t d = 0;
    switch (s.op()) {
      case Connective::Atom:
      case Connective::Bot:
      case Connective::Top: d = 0; break;
      case Connective::Neg: d = 1 + go(s.lhs()); break;
      case Connective::Power:
      case Connective::Multiple: d = go(s.lhs()) + (s.count() - 1); break;
      default: d = 1 + std::max(go(s.lhs()), go(s.rhs()));
    }
    memo.emplace(s.id(), d);
    return d;
  };
  return go(t);
}

// Leaves in order of first occurrence (left to right), deduplicated by
// `key(atom)`.
template <class A, class Key>
std::vector<A> atoms(const Term<A>& t, const Key& key) {
  std::vector<A> out;
  std::map<std::string, bool> seen;
  std::unordered_map<const void*, bool> visited;
  std::function<void(const Term<A>&)> go = [&](const Term<A>& s) {
    if (!visited.emplace(s.id(), true).second) return;
    switch (s.op()) {
      case Connective::Atom:
        if (seen.emplace(key(s.atom_value()), true).second) out.push_back(s.atom_value());
        return;
      case Connective::Bot:
      case Connective::Top: return;
      case Connective::Neg:
      case Connective::Power:
      case Connective::Multiple: go(s.lhs()); return;
      default: go(s.lhs()); go(s.rhs());
    }
  };
  go(t);
  return out;
}

// ---------------------------------------------------------------------------
// Event formulas.

// Ordered list of distinct variable names; positions are 0-based.
class VarContext {
 public:
  VarContext() = default;
  explicit VarContext(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  // Appends `name` if absent; returns its position. Existing positions never
  // move.
  std::size_t add(const std::string& name);
  // Appends the names of `other` that are not yet present.
  void merge(const VarContext& other);

  friend bool operator==(const VarContext& a, const VarContext& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

EventFormula parse_event(std::string_view text);
std::string canonical_serialize(const EventFormula& phi);

// Variables in order of first occurrence.
VarContext variables(const EventFormula& phi);
VarContext variables(const std::vector<EventFormula>& phis);

// Value at a point of [0,1]^n whose coordinates follow `ctx`.
ExactRational evaluate(const EventFormula& phi, const VarContext& ctx,
                       std::span<const ExactRational> point);

}  // namespace coh
