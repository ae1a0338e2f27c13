#include "oracles.hpp"

#include "coh/affine.hpp"
#include "coh/lp.hpp"
#include "coh/polytope.hpp"

#include <doctest.h>

using namespace coh;
using Q = ExactRational;

namespace {

Polytope hull(std::vector<Point> pts) { return Polytope::hull(std::move(pts)); }

std::vector<Point> random_points(oracle::Generator& gen, std::size_t n, std::size_t count,
                                 int den) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < count; ++i) {
    Point p;
    for (std::size_t j = 0; j < n; ++j) p.push_back(gen.rational(den));
    out.push_back(std::move(p));
  }
  return out;
}

// Facets are valid, tight on an affinely spanning vertex subset, primitive.
void check_hv_agreement(const Polytope& p) {
  for (const auto& h : p.facets()) {
    std::vector<Point> tight;
    for (const auto& v : p.vertices()) {
      CHECK(h.satisfied_by(v));
      if (h.tight_at(v)) tight.push_back(v);
    }
    CHECK(affine_dimension(tight) == p.dimension() - 1);
    BigInt g = h.offset;
    for (const auto& c : h.normal) g = gcd(g, c);
    CHECK(abs(g) == 1);
  }
  for (const auto& e : p.equations())
    for (const auto& v : p.vertices()) CHECK(e.tight_at(v));
}

}  // namespace

TEST_CASE("simplex: optimal, infeasible, unbounded") {
  // min x + 2y  s.t. x + y = 1
  auto r = lp::minimize({{1, 1}}, {1}, {1, 2});
  CHECK(r.status == lp::Status::Optimal);
  CHECK(r.objective == 1);
  CHECK(r.x == std::vector<Q>{1, 0});
  CHECK(lp::maximize({{1, 1}}, {1}, {1, 2}).objective == 2);
  CHECK(lp::minimize({{1, 1}}, {-1}, {1, 1}).status == lp::Status::Infeasible);
  CHECK(lp::maximize({{1, -1}}, {0}, {1, 1}).status == lp::Status::Unbounded);
  CHECK_FALSE(lp::feasible_point({{1, 0}, {1, 0}}, {1, 2}).has_value());
  // redundant equality rows are tolerated
  CHECK(lp::feasible_point({{1, 1}, {2, 2}}, {1, 2}).has_value());
}

TEST_CASE("simplex: Bland's rule terminates on a classically cycling instance") {
  // Beale's example in equality form with slacks s1..s3.
  const lp::Matrix a = {
      {Q(1, 4), -8, -1, 9, 1, 0, 0},
      {Q(1, 2), -12, Q(-1, 2), 3, 0, 1, 0},
      {0, 0, 1, 0, 0, 0, 1},
  };
  const auto r = lp::minimize(a, {0, 0, 1}, {Q(-3, 4), 20, Q(-1, 2), 6, 0, 0, 0});
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.objective == Q(-5, 4));
}

TEST_CASE("hull drops points interior to an edge") {
  const Polytope p = hull({{0, 0}, {1, 1}, {Q(1, 2), 1}, {Q(3, 4), 1}});
  CHECK(p.vertices() == std::vector<Point>{{0, 0}, {Q(1, 2), 1}, {1, 1}});
  CHECK(oracle::extreme_points({{0, 0}, {1, 1}, {Q(1, 2), 1}, {Q(3, 4), 1}}) == p.vertices());
}

TEST_CASE("hull of one point and of the Boolean square") {
  const Polytope pt = hull({{Q(1, 3), Q(2, 3)}});
  CHECK(pt.dimension() == 0);
  CHECK(pt.vertices() == std::vector<Point>{{Q(1, 3), Q(2, 3)}});
  CHECK(pt.equations().size() == 2);
  const Polytope sq = hull({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(sq == Polytope::unit_cube(2));
  CHECK(sq.facets().size() == 4);
  CHECK_THROWS_AS(Polytope::hull(std::vector<Point>{}), InputError);
  CHECK_THROWS_AS(hull({{0, 0}, {1}}), InputError);
}

TEST_CASE("the triangle's canonical facets") {
  const Polytope t = hull({{0, 0}, {1, 1}, {Q(1, 2), 1}});
  REQUIRE(t.facets().size() == 3);
  CHECK(t.facets()[0] == Halfspace{{-2, 1}, 0});
  CHECK(t.facets()[1] == Halfspace{{0, 1}, 1});
  CHECK(t.facets()[2] == Halfspace{{1, -1}, 0});
  check_hv_agreement(t);
}

TEST_CASE("membership: symmetric weights in the square") {
  const auto cert = membership(Point{Q(1, 2), Q(1, 2)}, Polytope::unit_cube(2));
  REQUIRE(std::holds_alternative<ConvexWeights>(cert));
  CHECK(std::get<ConvexWeights>(cert).weights == std::vector<Q>(4, Q(1, 4)));
}

TEST_CASE("membership: separator for a point outside the triangle") {
  const Polytope t = hull({{0, 0}, {1, 1}, {Q(1, 2), 1}});
  const Point p{1, 0};
  const auto cert = membership(p, t);
  REQUIRE(std::holds_alternative<Separator>(cert));
  const auto& s = std::get<Separator>(cert);
  CHECK(s.normal == Point{1, -1});
  CHECK(s.threshold == 0);
  CHECK(s.margin == 1);
  // LP oracle agrees the point is outside
  CHECK_FALSE(oracle::in_hull(p, t.vertices()));
}

TEST_CASE("membership: an interval of [0,1]") {
  const Polytope seg = hull({{Q(1, 2)}, {1}});
  const auto cert = membership(Point{Q(1, 4)}, seg);
  REQUIRE(std::holds_alternative<Separator>(cert));
  const auto& s = std::get<Separator>(cert);
  // the separator is the primitive facet -2x <= -1
  CHECK(s.normal == Point{-2});
  CHECK(s.threshold == -1);
  CHECK(s.margin == Q(1, 2));
  CHECK(verify(cert, Point{Q(1, 4)}, seg));
  CHECK_THROWS_AS(membership(Point{0, 0}, seg), InputError);
}

TEST_CASE("projection of the three-event hull") {
  const Polytope p = hull({{0, 0, 0}, {1, 0, 0}, {1, 1, 1}, {1, Q(1, 2), 0}});
  const std::size_t c02[] = {0, 2};
  CHECK(project(p, c02) == hull({{0, 0}, {1, 0}, {1, 1}}));
  const std::size_t all[] = {0, 1, 2};
  CHECK(project(p, all) == p);
  CHECK_THROWS_AS(project(p, std::span<const std::size_t>{}), InputError);
  const std::size_t bad[] = {3};
  CHECK_THROWS_AS(project(p, bad), InputError);
}

TEST_CASE("affine images") {
  const Polytope t = hull({{0, 0}, {1, 1}, {Q(1, 2), 1}});
  const AffineForm id[] = {AffineForm::projection(2, 0), AffineForm::projection(2, 1)};
  CHECK(affine_image(t, id) == t);
  const AffineForm swap[] = {AffineForm::projection(2, 1), AffineForm::projection(2, 0)};
  CHECK(affine_image(t, swap).vertices() == std::vector<Point>{{0, 0}, {1, Q(1, 2)}, {1, 1}});
  const AffineForm twice[] = {AffineForm(0, {2})};
  CHECK(affine_image(Polytope::unit_cube(1), twice) == hull({{0}, {2}}));
  CHECK_THROWS_AS(affine_image(Polytope::unit_cube(1), id), InputError);
}

TEST_CASE("constraints and hulls describe the same sets") {
  // x + y <= 1, x,y >= 0
  const Polytope simplex = Polytope::from_constraints(
      2, {Halfspace{{1, 1}, 1}, Halfspace{{-1, 0}, 0}, Halfspace{{0, -1}, 0}});
  CHECK(simplex == hull({{0, 0}, {1, 0}, {0, 1}}));
  const Polytope empty =
      Polytope::from_constraints(1, {Halfspace{{1}, 0}, Halfspace{{-1}, -1}});
  CHECK(empty.is_empty());
  CHECK(empty.dimension() == -1);
  CHECK_THROWS_AS(Polytope::from_constraints(1, {Halfspace{{1}, 0}}), InputError);
  const Polytope diag = Polytope::unit_cube(2).intersect({}, std::vector{Halfspace{{1, -1}, 0}});
  CHECK(diag == hull({{0, 0}, {1, 1}}));
  CHECK(diag.dimension() == 1);
}

TEST_CASE("the dimension cap is enforced") {
  CHECK(max_dimension() >= 6);
  if (max_dimension() == 6) {
    CHECK_NOTHROW(Polytope::unit_cube(6));
    CHECK_THROWS_AS(Polytope::unit_cube(7), DimensionError);
  }
}

TEST_CASE("property: hull vertices are exactly the LP-extreme points") {
  oracle::Generator gen(0xa11);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = gen.uniform(1, 3);
    const auto pts = random_points(gen, n, gen.uniform(1, 9), 4);
    const Polytope p = Polytope::hull(n, pts);
    CHECK(p.vertices() == oracle::extreme_points(pts));
    for (const auto& q : pts) CHECK(p.contains(q));
    check_hv_agreement(p);
    // idempotence
    CHECK(Polytope::hull(n, p.vertices()) == p);
    // H-representation round trip
    CHECK(Polytope::from_constraints(n, p.facets(), p.equations()) == p);
  }
}

TEST_CASE("property: membership certificates always verify and agree with the LP") {
  oracle::Generator gen(0xa12);
  for (int i = 0; i < 80; ++i) {
    const std::size_t n = gen.uniform(1, 3);
    const Polytope p = Polytope::hull(n, random_points(gen, n, gen.uniform(1, 7), 3));
    const Point q = random_points(gen, n, 1, 4).front();
    const auto cert = membership(q, p);
    CHECK(verify(cert, q, p));
    CHECK(std::holds_alternative<ConvexWeights>(cert) == oracle::in_hull(q, p.vertices()));
    CHECK(std::holds_alternative<ConvexWeights>(cert) == p.contains(q));
    if (const auto* s = std::get_if<Separator>(&cert)) CHECK(s->margin > 0);
  }
}

TEST_CASE("property: projections compose and contain every projected vertex") {
  oracle::Generator gen(0xa13);
  for (int i = 0; i < 40; ++i) {
    const Polytope p = Polytope::hull(3, random_points(gen, 3, gen.uniform(1, 8), 3));
    const std::size_t s[] = {0, 2};
    const std::size_t t_in_s[] = {1};
    const std::size_t t[] = {2};
    const Polytope ps = project(p, s);
    CHECK(project(ps, t_in_s) == project(p, t));
    for (const auto& v : p.vertices()) CHECK(ps.contains(Point{v[0], v[2]}));
  }
}
