#pragma once

#include "coh/rational.hpp"

#include <span>

namespace coh {

// constant + Σ coefficients[i]·x_i with integer data.
struct AffineForm {
  BigInt constant = 0;
  IntVector coefficients;

  AffineForm() = default;
  AffineForm(BigInt c, IntVector coeffs) : constant(std::move(c)), coefficients(std::move(coeffs)) {}

  static AffineForm constant_form(std::size_t arity, BigInt c) {
    return AffineForm(std::move(c), IntVector(arity, 0));
  }
  static AffineForm projection(std::size_t arity, std::size_t i) {
    IntVector v(arity, 0);
    v.at(i) = 1;
    return AffineForm(0, std::move(v));
  }

  std::size_t arity() const { return coefficients.size(); }

  ExactRational operator()(std::span<const ExactRational> x) const {
    ExactRational s = constant;
    for (std::size_t i = 0; i < coefficients.size(); ++i)
      if (coefficients[i] != 0) s += coefficients[i] * x[i];
    return s;
  }

  friend AffineForm operator+(const AffineForm& a, const AffineForm& b) {
    AffineForm r = a;
    r.constant += b.constant;
    for (std::size_t i = 0; i < r.coefficients.size(); ++i) r.coefficients[i] += b.coefficients[i];
    return r;
  }
  friend AffineForm operator-(const AffineForm& a, const AffineForm& b) {
    AffineForm r = a;
    r.constant -= b.constant;
    for (std::size_t i = 0; i < r.coefficients.size(); ++i) r.coefficients[i] -= b.coefficients[i];
    return r;
  }
  // 1 - a
  friend AffineForm complement(const AffineForm& a) {
    AffineForm r = a;
    r.constant = 1 - a.constant;
    for (auto& c : r.coefficients) c = -c;
    return r;
  }

  bool is_constant() const {
    for (const auto& c : coefficients)
      if (c != 0) return false;
    return true;
  }

  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

}  // namespace coh
