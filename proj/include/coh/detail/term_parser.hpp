#pragma once

// Recursive-descent parser shared by the event and modal grammars. The leaf
// rule is a hook, everything else is common:
//
//   formula := iff
//   iff     := imp ( "<->" imp )*            left-assoc
//   imp     := disj ( "->" imp )?            right-assoc
//   disj    := conj ( "|" conj )*
//   conj    := sum ( "&" sum )*
//   sum     := prod ( "+" prod )*            ⊕
//   prod    := unary ( "*" unary )*          ⊙
//   unary   := "~" unary | atom postfix*
//   postfix := "^" INT
//   atom    := LEAF | "0" | "1" | "(" formula ")" | INT "." atom

#include "coh/formula.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace coh::detail {

enum class Tok {
  Ident,
  Int,
  Prob,  // "P"
  LParen,
  RParen,
  Tilde,
  Caret,
  Dot,
  Plus,
  Star,
  Amp,
  Bar,
  Arrow,
  DArrow,
  End,
};

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view text);
std::string describe(const Token& t);

class TokenStream {
 public:
  explicit TokenStream(std::string_view text) : tokens_(tokenize(text)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, std::string_view what) {
    if (peek().kind != k)
      throw ParseError("expected " + std::string(what) + ", found " + describe(peek()),
                       peek().offset);
    return next();
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Positive decimal integer; throws on 0 or overflow of `unsigned`.
unsigned positive_count(const Token& t, std::string_view what);

template <class A, class Leaf>
class TermParser {
 public:
  using T = Term<A>;

  TermParser(TokenStream& ts, Leaf leaf) : ts_(ts), leaf_(std::move(leaf)) {}

  T formula() { return iff(); }

  // Parses a complete input; trailing tokens are an error.
  T whole() {
    T t = formula();
    if (ts_.peek().kind != Tok::End)
      throw ParseError("unexpected " + describe(ts_.peek()), ts_.peek().offset);
    return t;
  }

 private:
  T iff() {
    T t = imp();
    while (ts_.accept(Tok::DArrow)) t = T::iff(t, imp());
    return t;
  }
  T imp() {
    T t = disj();
    if (ts_.accept(Tok::Arrow)) return T::imp(t, imp());
    return t;
  }
  T disj() {
    T t = conj();
    while (ts_.accept(Tok::Bar)) t = T::lor(t, conj());
    return t;
  }
  T conj() {
    T t = sum();
    while (ts_.accept(Tok::Amp)) t = T::land(t, sum());
    return t;
  }
  T sum() {
    T t = prod();
    while (ts_.accept(Tok::Plus)) t = T::oplus(t, prod());
    return t;
  }
  T prod() {
    T t = unary();
    while (ts_.accept(Tok::Star)) t = T::otimes(t, unary());
    return t;
  }
  T unary() {
    if (ts_.accept(Tok::Tilde)) return T::neg(unary());
    T t = atom();
    while (ts_.accept(Tok::Caret)) {
      const Token& n = ts_.expect(Tok::Int, "exponent");
      t = T::power(t, positive_count(n, "exponent"));
    }
    return t;
  }
  T atom() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Tok::Ident:
      case Tok::Prob: return leaf_(ts_);
      case Tok::LParen: {
        ts_.next();
        T inner = formula();
        ts_.expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Int: {
        ts_.next();
        if (ts_.accept(Tok::Dot)) return T::multiple(positive_count(t, "multiple"), atom());
        if (t.text == "0") return T::bot();
        if (t.text == "1") return T::top();
        throw ParseError("integer " + std::string(t.text) +
                             " is not a constant (only 0 and 1) and is not followed by '.'",
                         t.offset);
      }
      default:
        throw ParseError("expected a formula, found " + describe(t), t.offset);
    }
  }

  TokenStream& ts_;
  Leaf leaf_;
};

template <class A, class Leaf>
TermParser<A, Leaf> make_parser(TokenStream& ts, Leaf leaf) {
  return TermParser<A, Leaf>(ts, std::move(leaf));
}

// Leaf rule of the event grammar. `modal_message` is the error used when a
// "P" appears where only events are allowed.
struct EventLeaf {
  std::string modal_message;
  EventFormula operator()(TokenStream& ts) const;
};

}  // namespace coh::detail
