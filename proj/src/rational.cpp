#include "coh/rational.hpp"

#include <cctype>

namespace coh {

std::string to_string(const ExactRational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

ExactRational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den =
      slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  if (!is_integer_literal(num) ||
      (slash != std::string_view::npos &&
       (!is_integer_literal(den) || den.front() == '-')))
    throw InputError("not an exact rational: '" + std::string(text) +
                     "' (expected p or p/q)");
  ExactRational r;
  r.get_num() = BigInt(std::string(num));
  r.get_den() = slash == std::string_view::npos ? BigInt(1) : BigInt(std::string(den));
  if (r.get_den() == 0)
    throw InputError("zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

bool in_unit_interval(const ExactRational& r) { return r >= 0 && r <= 1; }

IntVector primitive(IntVector v) {
  BigInt g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return v;
}

IntVector primitive_integer_multiple(std::span<const ExactRational> v) {
  BigInt l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  IntVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x.get_num() * (l / x.get_den()));
  return primitive(std::move(out));
}

ExactRational dot(std::span<const BigInt> a, std::span<const ExactRational> x) {
  ExactRational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += a[i] * x[i];
  return s;
}

ExactRational dot(std::span<const ExactRational> a,
                  std::span<const ExactRational> x) {
  ExactRational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += a[i] * x[i];
  return s;
}

std::string to_string(std::span<const ExactRational> point) {
  std::string s = "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) s += ", ";
    s += to_string(point[i]);
  }
  return s + ")";
}

}  // namespace coh
