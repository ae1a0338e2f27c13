#include "coh/polytope.hpp"

#include "coh/detail/dd.hpp"
#include "coh/lp.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace coh {

using detail::cone_generators;
using RatRow = std::vector<ExactRational>;

std::size_t max_dimension() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("COH_MAX_DIM")) {
      try {
        const long v = std::stol(env);
        if (v > 0) return static_cast<std::size_t>(v);
      } catch (const std::exception&) {
      }
    }
    return std::size_t{6};
  }();
  return cap;
}

namespace {

void check_dimension(std::size_t dim) {
  if (dim > max_dimension())
    throw DimensionError("polytope dimension " + std::to_string(dim) + " exceeds the cap of " +
                         std::to_string(max_dimension()) + " (set COH_MAX_DIM to override)");
}

// Scales (c0, c1·x) to integers.
IntVector integer_row(const ExactRational& head, std::span<const ExactRational> tail) {
  std::vector<ExactRational> v;
  v.reserve(tail.size() + 1);
  v.push_back(head);
  v.insert(v.end(), tail.begin(), tail.end());
  return primitive_integer_multiple(v);
}

// Equations a·x = b of the affine hull, as rational rows (a, b) in reduced
// echelon form.
std::vector<RatRow> affine_hull_rows(std::span<const Point> pts, std::size_t dim) {
  std::vector<RatRow> m;
  m.reserve(pts.size());
  for (const auto& p : pts) {
    RatRow r(p.begin(), p.end());
    r.push_back(-1);
    m.push_back(std::move(r));
  }
  return detail::nullspace(m, dim + 1);
}

Halfspace to_halfspace(const RatRow& ab) {
  const std::size_t n = ab.size() - 1;
  IntVector v = primitive_integer_multiple(ab);
  Halfspace h;
  h.offset = v[n];
  v.pop_back();
  h.normal = std::move(v);
  return h;
}

}  // namespace

int affine_dimension(std::span<const Point> points) {
  if (points.empty()) return -1;
  std::vector<RatRow> diffs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    RatRow d(points[i].size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = points[i][j] - points[0][j];
    diffs.push_back(std::move(d));
  }
  return static_cast<int>(detail::rank(std::move(diffs)));
}

Halfspace Halfspace::from_rational(std::span<const ExactRational> normal,
                                   const ExactRational& offset) {
  RatRow ab(normal.begin(), normal.end());
  ab.push_back(offset);
  return to_halfspace(ab);
}

void Polytope::finish(std::vector<Point> vertices, const std::vector<Halfspace>& candidates) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  vertices_ = std::move(vertices);
  affine_dim_ = affine_dimension(vertices_);
  equations_.clear();
  facets_.clear();
  if (vertices_.empty()) return;

  const auto eq_rows = affine_hull_rows(vertices_, dim_);
  for (const auto& r : eq_rows) equations_.push_back(to_halfspace(r));

  std::vector<std::size_t> pivots;
  for (const auto& r : eq_rows) {
    std::size_t c = 0;
    while (r[c] == 0) ++c;
    pivots.push_back(c);
  }

  for (const auto& h : candidates) {
    RatRow ab(h.normal.begin(), h.normal.end());
    ab.emplace_back(h.offset);
    for (std::size_t i = 0; i < eq_rows.size(); ++i) {
      const ExactRational f = ab[pivots[i]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < ab.size(); ++j) ab[j] -= f * eq_rows[i][j];
    }
    bool zero_normal = true;
    for (std::size_t j = 0; j < dim_; ++j)
      if (ab[j] != 0) zero_normal = false;
    if (zero_normal) continue;
    Halfspace red = to_halfspace(ab);
    std::vector<Point> tight;
    for (const auto& v : vertices_)
      if (red.tight_at(v)) tight.push_back(v);
    if (affine_dimension(tight) != affine_dim_ - 1) continue;
    facets_.push_back(std::move(red));
  }
  std::sort(facets_.begin(), facets_.end());
  facets_.erase(std::unique(facets_.begin(), facets_.end()), facets_.end());
}

Polytope Polytope::hull(std::vector<Point> points) {
  if (points.empty()) throw InputError("convex hull of an empty point list");
  const std::size_t dim = points.front().size();
  return hull(dim, std::move(points));
}

Polytope Polytope::hull(std::size_t dim, std::vector<Point> points) {
  if (points.empty()) throw InputError("convex hull of an empty point list");
  for (const auto& p : points)
    if (p.size() != dim) throw InputError("convex hull: points of mixed dimension");
  check_dimension(dim);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  Polytope out;
  out.dim_ = dim;
  if (points.size() == 1) {
    out.finish(std::move(points), {});
    return out;
  }

  // Valid inequalities c·x <= d correspond to y = (d, -c) with y·(1, x) >= 0.
  std::vector<IntVector> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back(integer_row(1, p));
  const auto gens = cone_generators(dim + 1, rows);

  std::vector<Halfspace> facets;
  for (const auto& y : gens.rays) {
    Halfspace h;
    h.offset = y[0];
    for (std::size_t j = 1; j <= dim; ++j) h.normal.push_back(-y[j]);
    bool any_tight = false;
    for (const auto& p : points)
      if (h.tight_at(p)) {
        any_tight = true;
        break;
      }
    if (any_tight) facets.push_back(std::move(h));
  }

  // A point is a vertex iff its tight constraints (equations included) pin
  // it down.
  const auto eq_rows = affine_hull_rows(points, dim);
  std::vector<Point> verts;
  for (const auto& p : points) {
    std::vector<RatRow> normals;
    for (const auto& e : eq_rows) normals.emplace_back(e.begin(), e.end() - 1);
    for (const auto& h : facets)
      if (h.tight_at(p)) normals.emplace_back(h.normal.begin(), h.normal.end());
    if (detail::rank(std::move(normals)) == dim) verts.push_back(p);
  }
  out.finish(std::move(verts), facets);
  return out;
}

Polytope Polytope::from_constraints(std::size_t dim, std::vector<Halfspace> inequalities,
                                    std::vector<Halfspace> equations) {
  check_dimension(dim);
  for (const auto& h : inequalities)
    if (h.normal.size() != dim) throw InputError("constraint arity mismatch");
  for (const auto& h : equations)
    if (h.normal.size() != dim) throw InputError("constraint arity mismatch");

  std::vector<Halfspace> candidates = std::move(inequalities);
  for (const auto& e : equations) {
    candidates.push_back(e);
    Halfspace neg = e;
    for (auto& c : neg.normal) c = -c;
    neg.offset = -neg.offset;
    candidates.push_back(std::move(neg));
  }

  // Homogenise: (t, x) with t·b - a·x >= 0 and t >= 0.
  std::vector<IntVector> rows;
  rows.reserve(candidates.size() + 1);
  {
    IntVector t(dim + 1, 0);
    t[0] = 1;
    rows.push_back(std::move(t));
  }
  for (const auto& h : candidates) {
    IntVector r;
    r.reserve(dim + 1);
    r.push_back(h.offset);
    for (const auto& a : h.normal) r.push_back(-a);
    rows.push_back(std::move(r));
  }
  const auto gens = cone_generators(dim + 1, rows);

  Polytope out;
  out.dim_ = dim;
  std::vector<Point> verts;
  bool recession = !gens.lineality.empty();
  for (const auto& y : gens.rays) {
    if (y[0] == 0) {
      recession = true;
      continue;
    }
    Point v(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      v[j] = ExactRational(y[j + 1], y[0]);
      v[j].canonicalize();
    }
    verts.push_back(std::move(v));
  }
  if (!verts.empty() && recession) throw InputError("constraint system is unbounded");
  out.finish(std::move(verts), candidates);
  return out;
}

Polytope Polytope::unit_cube(std::size_t dim) {
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < dim; ++i) {
    IntVector up(dim, 0), down(dim, 0);
    up[i] = 1;
    down[i] = -1;
    hs.push_back(Halfspace{up, 1});
    hs.push_back(Halfspace{down, 0});
  }
  return from_constraints(dim, std::move(hs));
}

Polytope Polytope::empty(std::size_t dim) {
  Polytope p;
  p.dim_ = dim;
  return p;
}

std::vector<Halfspace> Polytope::halfspaces() const {
  std::vector<Halfspace> out = facets_;
  for (const auto& e : equations_) {
    out.push_back(e);
    Halfspace neg = e;
    for (auto& c : neg.normal) c = -c;
    neg.offset = -neg.offset;
    out.push_back(std::move(neg));
  }
  return out;
}

bool Polytope::contains(std::span<const ExactRational> x) const {
  if (x.size() != dim_) throw InputError("point dimension does not match polytope");
  if (is_empty()) return false;
  for (const auto& e : equations_)
    if (!e.tight_at(x)) return false;
  for (const auto& f : facets_)
    if (!f.satisfied_by(x)) return false;
  return true;
}

bool Polytope::contains(const Polytope& other) const {
  for (const auto& v : other.vertices())
    if (!contains(v)) return false;
  return true;
}

Polytope Polytope::intersect(const Polytope& other) const {
  if (other.dim_ != dim_) throw InputError("intersecting polytopes of different dimension");
  if (is_empty() || other.is_empty()) return empty(dim_);
  std::vector<Halfspace> ineq = facets_;
  ineq.insert(ineq.end(), other.facets_.begin(), other.facets_.end());
  std::vector<Halfspace> eqs = equations_;
  eqs.insert(eqs.end(), other.equations_.begin(), other.equations_.end());
  return from_constraints(dim_, std::move(ineq), std::move(eqs));
}

Polytope Polytope::intersect(std::span<const Halfspace> inequalities,
                             std::span<const Halfspace> equations) const {
  if (is_empty()) return empty(dim_);
  std::vector<Halfspace> ineq = facets_;
  ineq.insert(ineq.end(), inequalities.begin(), inequalities.end());
  std::vector<Halfspace> eqs = equations_;
  eqs.insert(eqs.end(), equations.begin(), equations.end());
  return from_constraints(dim_, std::move(ineq), std::move(eqs));
}

namespace {

// Canonical convex weights of p over the vertex list.
std::vector<ExactRational> canonical_weights(const std::vector<Point>& verts,
                                             std::span<const ExactRational> p) {
  const std::size_t m = verts.size();
  const std::size_t n = p.size();
  // Variables: t, s_1..s_m with w_i = t + s_i.
  lp::Matrix a;
  lp::Row b;
  for (std::size_t j = 0; j < n; ++j) {
    lp::Row r(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
      r[0] += verts[i][j];
      r[i + 1] = verts[i][j];
    }
    a.push_back(std::move(r));
    b.push_back(p[j]);
  }
  {
    lp::Row r(m + 1, 1);
    r[0] = m;
    a.push_back(std::move(r));
    b.push_back(1);
  }
  lp::Row obj(m + 1, 0);
  obj[0] = 1;
  auto res = lp::maximize(a, b, obj);
  if (res.status != lp::Status::Optimal) throw Error("internal: weight LP not optimal");
  {
    lp::Row r(m + 1, 0);
    r[0] = 1;
    a.push_back(std::move(r));
    b.push_back(res.objective);
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    lp::Row w(m + 1, 0);
    w[0] = 1;
    w[i + 1] = 1;
    res = lp::minimize(a, b, w);
    if (res.status != lp::Status::Optimal) throw Error("internal: weight LP not optimal");
    a.push_back(w);
    b.push_back(res.objective);
  }
  res = lp::minimize(a, b, lp::Row(m + 1, 0));
  if (res.status != lp::Status::Optimal) throw Error("internal: weight LP not optimal");
  std::vector<ExactRational> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = res.x[0] + res.x[i + 1];
  return w;
}

}  // namespace

MembershipCertificate membership(std::span<const ExactRational> p, const Polytope& poly) {
  if (p.size() != poly.ambient_dim()) throw InputError("membership: dimension mismatch");
  if (poly.is_empty()) throw InputError("membership: empty polytope");
  MembershipCertificate cert;
  if (poly.contains(p)) {
    cert = ConvexWeights{canonical_weights(poly.vertices(), p)};
  } else {
    std::optional<Separator> best;
    for (const auto& h : poly.halfspaces()) {
      const ExactRational violation = dot(h.normal, p) - h.offset;
      if (violation <= 0) continue;
      if (!best || violation > best->margin) {
        Separator s;
        s.normal.assign(h.normal.begin(), h.normal.end());
        s.threshold = h.offset;
        s.margin = violation;
        best = std::move(s);
      }
    }
    if (!best) throw Error("internal: point outside polytope but no violated constraint");
    cert = std::move(*best);
  }
  if (!verify(cert, p, poly)) throw Error("internal: membership certificate failed to verify");
  return cert;
}

bool verify(const MembershipCertificate& cert, std::span<const ExactRational> p,
            const Polytope& poly) {
  if (const auto* w = std::get_if<ConvexWeights>(&cert)) {
    const auto& verts = poly.vertices();
    if (w->weights.size() != verts.size()) return false;
    ExactRational total = 0;
    Point acc(p.size(), 0);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (w->weights[i] < 0) return false;
      total += w->weights[i];
      for (std::size_t j = 0; j < p.size(); ++j) acc[j] += w->weights[i] * verts[i][j];
    }
    return total == 1 && std::equal(acc.begin(), acc.end(), p.begin(), p.end());
  }
  const auto& s = std::get<Separator>(cert);
  if (s.normal.size() != p.size() || s.margin <= 0) return false;
  for (const auto& v : poly.vertices())
    if (dot(s.normal, v) > s.threshold) return false;
  return dot(s.normal, p) >= s.threshold + s.margin;
}

Polytope project(const Polytope& poly, std::span<const std::size_t> coords) {
  if (coords.empty()) throw InputError("projection onto an empty coordinate set");
  for (auto c : coords)
    if (c >= poly.ambient_dim()) throw InputError("projection coordinate out of range");
  if (poly.is_empty()) return Polytope::empty(coords.size());
  std::vector<Point> pts;
  for (const auto& v : poly.vertices()) {
    Point q;
    for (auto c : coords) q.push_back(v[c]);
    pts.push_back(std::move(q));
  }
  return Polytope::hull(coords.size(), std::move(pts));
}

Polytope affine_image(const Polytope& poly, std::span<const AffineForm> forms) {
  if (forms.empty()) throw InputError("affine image with no forms");
  for (const auto& f : forms)
    if (f.arity() != poly.ambient_dim()) throw InputError("affine form arity mismatch");
  if (poly.is_empty()) return Polytope::empty(forms.size());
  std::vector<Point> pts;
  for (const auto& v : poly.vertices()) {
    Point q;
    for (const auto& f : forms) q.push_back(f(v));
    pts.push_back(std::move(q));
  }
  return Polytope::hull(forms.size(), std::move(pts));
}

std::pair<ExactRational, ExactRational> linear_range(const Polytope& poly,
                                                     std::span<const ExactRational> objective) {
  if (poly.is_empty()) throw InputError("linear range over an empty polytope");
  ExactRational lo = dot(objective, poly.vertices().front());
  ExactRational hi = lo;
  for (const auto& v : poly.vertices()) {
    const ExactRational x = dot(objective, v);
    if (x < lo) lo = x;
    if (x > hi) hi = x;
  }
  return {lo, hi};
}

}  // namespace coh
