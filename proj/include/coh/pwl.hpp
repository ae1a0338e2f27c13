#pragma once

// McNaughton functions as polyhedral complexes over [0,1]^n with one integer
// affine form per cell.

#include "coh/affine.hpp"
#include "coh/formula.hpp"
#include "coh/polytope.hpp"

#include <span>
#include <vector>

namespace coh {

struct LinearCell {
  Polytope polytope;
  AffineForm form;
};

class PwlFunction {
 public:
  PwlFunction(VarContext ctx, std::vector<LinearCell> cells)
      : ctx_(std::move(ctx)), cells_(std::move(cells)) {}

  const VarContext& context() const { return ctx_; }
  std::size_t arity() const { return ctx_.size(); }
  const std::vector<LinearCell>& cells() const { return cells_; }

 private:
  VarContext ctx_;
  std::vector<LinearCell> cells_;
};

// f_φ over the coordinates of `ctx`. Throws InputError when φ mentions a
// variable outside `ctx`.
PwlFunction mcnaughton(const EventFormula& phi, const VarContext& ctx);

// Value at a point of [0,1]^n. Points on cell boundaries may resolve to any
// incident cell; the forms agree there.
ExactRational evaluate(const PwlFunction& f, std::span<const ExactRational> point);

// The pieces {x in C : form_C(x) = 1}, empty and duplicate pieces dropped.
std::vector<Polytope> oneset(const PwlFunction& f);

// Exact test of oneset(f) = p: every piece lies in p, and f is 1 at every
// vertex of every cell ∩ p.
bool oneset_equals(const PwlFunction& f, const Polytope& p);

enum class RefinementStrategy {
  // Successive pairwise overlay of the input complexes, in the given order.
  Overlay,
  // Arrangement of every cell-boundary hyperplane plus the midpoint
  // hyperplanes x_i = 1/2, forms located afterwards.
  Arrangement,
};

struct Refinement {
  std::vector<Polytope> cells;
  // forms[c][i]: affine form of input function i on cell c.
  std::vector<std::vector<AffineForm>> forms;

  // Distinct vertices of all cells, sorted.
  std::vector<Point> vertices() const;
};

// A complex covering [0,1]^n on whose cells every input function is affine.
Refinement common_refinement(std::span<const PwlFunction> fs,
                             RefinementStrategy strategy = RefinementStrategy::Overlay);

}  // namespace coh
