#pragma once

#include <gmpxx.h>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coh {

// Arbitrary-precision rational, always canonical (lowest terms, q > 0) once
// it leaves any function of this library.
using ExactRational = mpq_class;
using BigInt = mpz_class;

using Point = std::vector<ExactRational>;
using IntVector = std::vector<BigInt>;

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed rational, out-of-range price, arity mismatch, ...
class InputError : public Error {
 public:
  using Error::Error;
};

// A polytope or query exceeded the configured dimension cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// "p/q", or "p" when q == 1.
std::string to_string(const ExactRational& r);
std::string to_string(const BigInt& z);

// Accepts "p", "-p", "p/q". Decimal notation is rejected.
ExactRational parse_rational(std::string_view text);

bool in_unit_interval(const ExactRational& r);

// Divides out the gcd of all entries; the zero vector is returned unchanged.
IntVector primitive(IntVector v);

// Scales a rational vector to the primitive integer vector with the same
// direction (positive multiple).
IntVector primitive_integer_multiple(std::span<const ExactRational> v);

ExactRational dot(std::span<const BigInt> a, std::span<const ExactRational> x);
ExactRational dot(std::span<const ExactRational> a,
                  std::span<const ExactRational> x);

std::string to_string(std::span<const ExactRational> point);

}  // namespace coh
