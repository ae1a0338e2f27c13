#include "oracles.hpp"

#include "coh/formula.hpp"

#include <doctest.h>

using namespace coh;

namespace {

EventFormula x() { return EventFormula::atom(Var{"x"}); }
EventFormula y() { return EventFormula::atom(Var{"y"}); }

Point pt(std::initializer_list<ExactRational> xs) { return Point(xs); }

}  // namespace

TEST_CASE("rationals parse exactly and print in lowest terms") {
  CHECK(parse_rational("3/6") == ExactRational(1, 2));
  CHECK(parse_rational("-2") == -2);
  CHECK(parse_rational("0") == 0);
  CHECK(to_string(parse_rational("4/2")) == "2");
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK_THROWS_AS(parse_rational("0.5"), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational(""), InputError);
  CHECK_THROWS_AS(parse_rational("1/2/3"), InputError);
  CHECK_THROWS_AS(parse_rational("1e3"), InputError);
}

TEST_CASE("disjunction parses to Or and normalizes to the primitive basis") {
  const EventFormula f = parse_event("x | y");
  CHECK(f.op() == Connective::Or);
  CHECK(f == EventFormula::lor(x(), y()));
  // (x→y)→y with φ→ψ = ¬φ⊕ψ
  const EventFormula expected = EventFormula::oplus(
      EventFormula::neg(EventFormula::oplus(EventFormula::neg(x()), y())), y());
  CHECK(normalize(f) == expected);
}

TEST_CASE("top is the negation of bottom") {
  const EventFormula f = parse_event("~0");
  CHECK(f == EventFormula::neg(EventFormula::bot()));
  CHECK(evaluate(f, VarContext{}, Point{}) == 1);
  CHECK(normalize(parse_event("1")) == f);
}

TEST_CASE("powers expand to repeated strong conjunction") {
  CHECK(expand_powers(parse_event("x^2")) == EventFormula::otimes(x(), x()));
  CHECK(expand_powers(parse_event("3.x")) ==
        EventFormula::oplus(EventFormula::oplus(x(), x()), x()));
  CHECK(parse_event("x^2^3") == EventFormula::power(EventFormula::power(x(), 2), 3));
}

TEST_CASE("canonical text is fully parenthesized and parenthesis-insensitive") {
  CHECK(canonical_serialize(EventFormula::lor(x(), y())) == "(x | y)");
  CHECK(canonical_serialize(parse_event("x|y")) == canonical_serialize(parse_event("(x)|(y)")));
  CHECK(canonical_serialize(parse_event("x + y * z")) == "(x + (y * z))");
  CHECK(canonical_serialize(parse_event("~(x+y)^2")) == "~((x + y)^2)");
  CHECK(canonical_serialize(parse_event("2.(~x)")) == "2.(~x)");
  CHECK_THROWS_AS(parse_event("2.~x"), ParseError);
  CHECK(canonical_serialize(parse_event("0 -> 1")) == "(0 -> 1)");
}

TEST_CASE("double negation is kept syntactically but is semantically the identity") {
  const EventFormula nn = parse_event("~~x");
  CHECK(canonical_serialize(nn) == "~~x");
  CHECK(canonical_serialize(nn) != canonical_serialize(x()));
  const VarContext ctx({"x"});
  for (const auto& p : oracle::grid(1, 7))
    CHECK(oracle::value(nn, ctx, p) == oracle::value(x(), ctx, p));
}

TEST_CASE("precedence and associativity follow the grammar") {
  CHECK(parse_event("a -> b -> c") ==
        parse_event("a -> (b -> c)"));
  CHECK(parse_event("a <-> b <-> c") == parse_event("(a <-> b) <-> c"));
  CHECK(parse_event("a | b & c") == parse_event("a | (b & c)"));
  CHECK(parse_event("a & b + c") == parse_event("a & (b + c)"));
  CHECK(parse_event("a + b * c") == parse_event("a + (b * c)"));
  CHECK(parse_event("~a * b") == parse_event("(~a) * b"));
  CHECK(parse_event("~a^2") == parse_event("~(a^2)"));
  CHECK(parse_event("a | b -> c") == parse_event("(a | b) -> c"));
  CHECK(parse_event("x_1 + y2") == EventFormula::oplus(EventFormula::atom(Var{"x_1"}),
                                                       EventFormula::atom(Var{"y2"})));
}

TEST_CASE("syntax errors carry byte offsets") {
  const auto offset_of = [](std::string_view text) -> long {
    try {
      (void)parse_event(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("x +") == 3);
  CHECK(offset_of("x $ y") == 2);
  CHECK(offset_of("(x") == 2);
  CHECK(offset_of("x y") == 2);
  CHECK(offset_of("x^0") == 2);
  CHECK(offset_of("0.x") == 0);
  CHECK(offset_of("2") == 0);
  CHECK(offset_of("P(x)") == 0);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("X") == 0);
  CHECK_THROWS_AS(EventFormula::power(x(), 0), InputError);
  CHECK_THROWS_AS(EventFormula::multiple(0, x()), InputError);
}

TEST_CASE("variable contexts follow first occurrence and only grow") {
  const VarContext ctx = variables(parse_event("(z + x) & ~z | y"));
  CHECK(ctx.names() == std::vector<std::string>{"z", "x", "y"});
  VarContext merged = ctx;
  merged.merge(variables(parse_event("w + x")));
  CHECK(merged.names() == std::vector<std::string>{"z", "x", "y", "w"});
  CHECK(*merged.index_of("y") == 2);
  CHECK(merged.add("x") == 1);
  CHECK(variables(std::vector{parse_event("b"), parse_event("a + b")}).names() ==
        std::vector<std::string>{"b", "a"});
}

TEST_CASE("pointwise evaluation of small formulas") {
  const VarContext ctx({"x", "y"});
  const Point half = pt({ExactRational(1, 2), ExactRational(1, 2)});
  CHECK(evaluate(parse_event("x | y"), ctx, half) == ExactRational(1, 2));
  CHECK(evaluate(parse_event("x + y"), ctx, half) == 1);
  CHECK(evaluate(parse_event("x <-> y"), ctx, pt({ExactRational(1, 4), 1})) ==
        ExactRational(1, 4));
  CHECK_THROWS_AS(evaluate(parse_event("x"), ctx, pt({2, 0})), InputError);
  CHECK_THROWS_AS(evaluate(parse_event("x"), ctx, pt({0})), InputError);
  CHECK_THROWS_AS(evaluate(parse_event("z"), ctx, half), InputError);
}

TEST_CASE("property: canonical text round-trips through the parser") {
  oracle::Generator gen(0x5eed01);
  const auto vars = gen.names(3);
  for (int i = 0; i < 400; ++i) {
    const EventFormula f = gen.event(vars, gen.uniform(0, 5));
    const std::string text = canonical_serialize(f);
    INFO(text);
    const EventFormula g = parse_event(text);
    CHECK(g == f);
    CHECK(canonical_serialize(g) == text);
  }
}

TEST_CASE("property: derived connectives agree with their expansions") {
  oracle::Generator gen(0x5eed02);
  const auto vars = gen.names(3);
  const VarContext ctx(vars);
  const auto points = oracle::grid(3, 3);
  for (int i = 0; i < 120; ++i) {
    const EventFormula f = gen.event(vars, gen.uniform(1, 4));
    const EventFormula n = normalize(f);
    INFO(canonical_serialize(f));
    for (std::size_t k = 0; k < points.size(); k += 5) {
      const ExactRational expected = oracle::value(f, ctx, points[k]);
      CHECK(evaluate(f, ctx, points[k]) == expected);
      CHECK(evaluate(n, ctx, points[k]) == expected);
    }
  }
}

TEST_CASE("property: normalization is idempotent and lands in the basis") {
  oracle::Generator gen(0x5eed03);
  const auto vars = gen.names(2);
  for (int i = 0; i < 200; ++i) {
    const EventFormula n = normalize(gen.event(vars, gen.uniform(0, 5)));
    CHECK(normalize(n) == n);
    std::function<bool(const EventFormula&)> basic = [&](const EventFormula& t) {
      switch (t.op()) {
        case Connective::Atom:
        case Connective::Bot: return true;
        case Connective::Neg: return basic(t.lhs());
        case Connective::OPlus: return basic(t.lhs()) && basic(t.rhs());
        default: return false;
      }
    };
    CHECK(basic(n));
  }
}

TEST_CASE("property: every string parses or fails with a positioned error") {
  oracle::Generator gen(0x5eed04);
  const std::string alphabet = "xy01~|&+*^.()-<> 2P$";
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    const int len = gen.uniform(0, 12);
    for (int k = 0; k < len; ++k) s += alphabet[gen.uniform(0, static_cast<int>(alphabet.size()) - 1)];
    INFO(s);
    try {
      const EventFormula f = parse_event(s);
      CHECK(parse_event(canonical_serialize(f)) == f);
    } catch (const ParseError& e) {
      CHECK(e.offset() <= s.size());
    }
  }
}
