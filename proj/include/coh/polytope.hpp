#pragma once

// Exact rational convex polytopes, kept in both V- and H-representation.
//
// Every Polytope value is canonical: the vertex list is irredundant and
// sorted, equations are in reduced echelon form, facet normals are reduced
// modulo the equations and scaled to primitive integer vectors. Two
// polytopes describe the same set iff they compare equal.

#include "coh/affine.hpp"
#include "coh/rational.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace coh {

// normal·x <= offset (or == offset when used as an equation).
struct Halfspace {
  IntVector normal;
  BigInt offset;

  // Scales rational data to a primitive integer constraint.
  static Halfspace from_rational(std::span<const ExactRational> normal,
                                 const ExactRational& offset);

  ExactRational slack(std::span<const ExactRational> x) const {
    return ExactRational(offset) - dot(normal, x);
  }
  bool satisfied_by(std::span<const ExactRational> x) const { return slack(x) >= 0; }
  bool tight_at(std::span<const ExactRational> x) const { return slack(x) == 0; }

  friend bool operator==(const Halfspace&, const Halfspace&) = default;
  friend bool operator<(const Halfspace& a, const Halfspace& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  }
};

// Largest ambient dimension the kernel accepts: 6, or $COH_MAX_DIM.
std::size_t max_dimension();

class Polytope {
 public:
  // Convex hull. Throws InputError on an empty or ragged list.
  static Polytope hull(std::vector<Point> points);
  static Polytope hull(std::size_t dim, std::vector<Point> points);
  // { x : inequalities, equations }. The set must be bounded; it may be empty.
  static Polytope from_constraints(std::size_t dim, std::vector<Halfspace> inequalities,
                                   std::vector<Halfspace> equations = {});
  static Polytope unit_cube(std::size_t dim);
  static Polytope empty(std::size_t dim);

  std::size_t ambient_dim() const { return dim_; }
  // Affine dimension; -1 when empty.
  int dimension() const { return affine_dim_; }
  bool is_empty() const { return vertices_.empty(); }
  bool is_full_dimensional() const { return affine_dim_ == static_cast<int>(dim_); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::vector<Halfspace>& equations() const { return equations_; }
  // Facets followed by both orientations of every equation.
  std::vector<Halfspace> halfspaces() const;

  bool contains(std::span<const ExactRational> x) const;
  // Every vertex of `other` lies in this polytope.
  bool contains(const Polytope& other) const;

  Polytope intersect(const Polytope& other) const;
  Polytope intersect(std::span<const Halfspace> inequalities,
                     std::span<const Halfspace> equations = {}) const;

  friend bool operator==(const Polytope& a, const Polytope& b) {
    return a.dim_ == b.dim_ && a.vertices_ == b.vertices_;
  }

 private:
  Polytope() = default;
  // Sets vertices (already deduplicated and irredundant) and derives the
  // canonical H-representation from them and the candidate inequalities.
  void finish(std::vector<Point> vertices, const std::vector<Halfspace>& candidates);

  std::size_t dim_ = 0;
  int affine_dim_ = -1;
  std::vector<Point> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<Halfspace> equations_;
};

// Convex weights over P.vertices() reproducing the query point.
struct ConvexWeights {
  std::vector<ExactRational> weights;
};

// normal·v <= threshold for every v in P, normal·p >= threshold + margin.
struct Separator {
  Point normal;
  ExactRational threshold;
  ExactRational margin;
};

using MembershipCertificate = std::variant<ConvexWeights, Separator>;

// Inside: canonical weights (maximise the smallest weight, then take the
// lexicographically least weight vector). Outside: the most violated
// constraint of the H-representation. Both are re-verified before return.
MembershipCertificate membership(std::span<const ExactRational> p, const Polytope& poly);

bool verify(const MembershipCertificate& cert, std::span<const ExactRational> p,
            const Polytope& poly);

// Hull of the projected vertices; `coords` are 0-based and kept in order.
Polytope project(const Polytope& poly, std::span<const std::size_t> coords);

// Hull of the vertex images under x ↦ (form_1(x), ..., form_m(x)).
Polytope affine_image(const Polytope& poly, std::span<const AffineForm> forms);

// Exact min and max of a linear functional over a nonempty polytope.
std::pair<ExactRational, ExactRational> linear_range(const Polytope& poly,
                                                     std::span<const ExactRational> objective);

// Affine dimension of a finite point set (-1 for the empty set).
int affine_dimension(std::span<const Point> points);

}  // namespace coh
