#include "coh/formula.hpp"

#include "coh/detail/term_parser.hpp"

#include <cctype>
#include <limits>

namespace coh {

bool is_binary(Connective c) {
  switch (c) {
    case Connective::OPlus:
    case Connective::OTimes:
    case Connective::Imp:
    case Connective::Or:
    case Connective::And:
    case Connective::Iff: return true;
    default: return false;
  }
}

std::string_view symbol(Connective c) {
  switch (c) {
    case Connective::OPlus: return "+";
    case Connective::OTimes: return "*";
    case Connective::Imp: return "->";
    case Connective::Or: return "|";
    case Connective::And: return "&";
    case Connective::Iff: return "<->";
    default: return "";
  }
}

ParseError::ParseError(const std::string& what, std::size_t offset)
    : InputError("syntax error at byte " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

namespace detail {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto emit = [&](Tok k, std::size_t len) {
    out.push_back(Token{k, text.substr(i, len), i});
    i += len;
  };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t j = i + 1;
      while (j < text.size()) {
        const unsigned char d = static_cast<unsigned char>(text[j]);
        if (!((d >= 'a' && d <= 'z') || std::isdigit(d) || d == '_')) break;
        ++j;
      }
      emit(Tok::Ident, j - i);
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      emit(Tok::Int, j - i);
      continue;
    }
    if (text.substr(i, 3) == "<->") {
      emit(Tok::DArrow, 3);
      continue;
    }
    if (text.substr(i, 2) == "->") {
      emit(Tok::Arrow, 2);
      continue;
    }
    switch (c) {
      case 'P': emit(Tok::Prob, 1); continue;
      case '(': emit(Tok::LParen, 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case '~': emit(Tok::Tilde, 1); continue;
      case '^': emit(Tok::Caret, 1); continue;
      case '.': emit(Tok::Dot, 1); continue;
      case '+': emit(Tok::Plus, 1); continue;
      case '*': emit(Tok::Star, 1); continue;
      case '&': emit(Tok::Amp, 1); continue;
      case '|': emit(Tok::Bar, 1); continue;
      default:
        throw ParseError("unknown token '" + std::string(1, text[i]) + "'", i);
    }
  }
  out.push_back(Token{Tok::End, {}, text.size()});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + std::string(t.text) + "'";
}

unsigned positive_count(const Token& t, std::string_view what) {
  unsigned long long v = 0;
  for (char c : t.text) {
    v = v * 10 + static_cast<unsigned>(c - '0');
    if (v > std::numeric_limits<unsigned>::max())
      throw ParseError(std::string(what) + " too large", t.offset);
  }
  if (v < 1) throw ParseError(std::string(what) + " must be a positive integer", t.offset);
  return static_cast<unsigned>(v);
}

EventFormula EventLeaf::operator()(TokenStream& ts) const {
  const Token& t = ts.next();
  if (t.kind == Tok::Prob) throw ParseError(modal_message, t.offset);
  return EventFormula::atom(Var{std::string(t.text)});
}

}  // namespace detail

EventFormula parse_event(std::string_view text) {
  detail::TokenStream ts(text);
  auto parser = detail::make_parser<Var>(
      ts, detail::EventLeaf{"modal operator P is not allowed in an event formula"});
  return parser.whole();
}

std::string canonical_serialize(const EventFormula& phi) {
  return serialize(phi, [](const Var& v) -> const std::string& { return v.name; });
}

VarContext::VarContext(std::vector<std::string> names) {
  for (auto& n : names)
    if (!index_.contains(n)) add(n);
}

std::optional<std::size_t> VarContext::index_of(std::string_view name) const {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t VarContext::add(const std::string& name) {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  index_.emplace(name, names_.size());
  names_.push_back(name);
  return names_.size() - 1;
}

void VarContext::merge(const VarContext& other) {
  for (const auto& n : other.names()) add(n);
}

VarContext variables(const EventFormula& phi) {
  VarContext ctx;
  for (const Var& v : atoms(phi, [](const Var& v) { return v.name; })) ctx.add(v.name);
  return ctx;
}

VarContext variables(const std::vector<EventFormula>& phis) {
  VarContext ctx;
  for (const auto& phi : phis) ctx.merge(variables(phi));
  return ctx;
}

ExactRational evaluate(const EventFormula& phi, const VarContext& ctx,
                       std::span<const ExactRational> point) {
  if (point.size() != ctx.size())
    throw InputError("point has " + std::to_string(point.size()) +
                     " coordinates, context has " + std::to_string(ctx.size()));
  for (const auto& x : point)
    if (x < 0 || x > 1) throw InputError("point outside the unit cube: " + x.get_str());
  return evaluate(phi, [&](const Var& v) -> const ExactRational& {
    const auto i = ctx.index_of(v.name);
    if (!i) throw InputError("unknown variable '" + v.name + "'");
    return point[*i];
  });
}

}  // namespace coh
