#pragma once

// Exact two-phase simplex over the rationals, standard form
//
//   minimize c·x  subject to  A x = b,  x >= 0.
//
// Pivoting uses Bland's rule throughout, so the method terminates on
// degenerate problems.

#include "coh/rational.hpp"

#include <optional>
#include <vector>

namespace coh::lp {

using Row = std::vector<ExactRational>;
using Matrix = std::vector<Row>;

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  std::vector<ExactRational> x;  // primal solution when Optimal
  ExactRational objective;
};

Result minimize(const Matrix& a, const Row& b, const Row& c);
Result maximize(const Matrix& a, const Row& b, const Row& c);

// A feasible point of {A x = b, x >= 0}, if any.
std::optional<std::vector<ExactRational>> feasible_point(const Matrix& a, const Row& b);

}  // namespace coh::lp
