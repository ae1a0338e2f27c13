#include "coh/pwl.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>

namespace coh {

namespace {

// a ∩ b when it has nonempty interior.
std::optional<Polytope> full_overlap(const Polytope& a, const Polytope& b) {
  if (a == b) return a;
  const auto separated_by_facet = [](const Polytope& p, const Polytope& q) {
    for (const auto& h : q.facets()) {
      bool outside = true;
      for (const auto& v : p.vertices())
        if (h.slack(v) > 0) {
          outside = false;
          break;
        }
      if (outside) return true;
    }
    return false;
  };
  if (separated_by_facet(a, b) || separated_by_facet(b, a)) return std::nullopt;
  if (b.contains(a)) return a;
  if (a.contains(b)) return b;
  Polytope p = a.intersect(b);
  if (!p.is_full_dimensional()) return std::nullopt;
  return p;
}

// form(x) <= level
Halfspace below(const AffineForm& f, const BigInt& level) {
  return Halfspace{f.coefficients, level - f.constant};
}

// form(x) >= level
Halfspace above(const AffineForm& f, const BigInt& level) {
  IntVector n = f.coefficients;
  for (auto& c : n) c = -c;
  return Halfspace{std::move(n), f.constant - level};
}

// min(1, sum) on cell, splitting along sum = 1 when it crosses.
void emit_truncated_sum(const Polytope& cell, const AffineForm& sum,
                        std::vector<LinearCell>& out) {
  bool below_one = false, above_one = false;
  for (const auto& v : cell.vertices()) {
    const ExactRational s = sum(v);
    if (s < 1) below_one = true;
    if (s > 1) above_one = true;
  }
  const std::size_t n = sum.arity();
  if (!above_one) {
    out.push_back({cell, sum});
    return;
  }
  if (!below_one) {
    out.push_back({cell, AffineForm::constant_form(n, 1)});
    return;
  }
  const Halfspace lo = below(sum, 1);
  const Halfspace hi = above(sum, 1);
  out.push_back({cell.intersect(std::span(&lo, 1)), sum});
  out.push_back({cell.intersect(std::span(&hi, 1)), AffineForm::constant_form(n, 1)});
}

// p ∪ q when it is convex. Interior-disjoint cells with a convex union meet
// in a common facet; the union is then the hull, cut back into p and q by
// that facet's hyperplane.
std::optional<Polytope> convex_union(const Polytope& p, const Polytope& q) {
  for (const auto& h : p.facets()) {
    Halfspace opp{h.normal, -h.offset};
    for (auto& c : opp.normal) c = -c;
    if (std::find(q.facets().begin(), q.facets().end(), opp) == q.facets().end()) continue;
    std::vector<Point> pts = p.vertices();
    pts.insert(pts.end(), q.vertices().begin(), q.vertices().end());
    Polytope u = Polytope::hull(p.ambient_dim(), std::move(pts));
    if (u.intersect(std::span(&h, 1)) == p && u.intersect(std::span(&opp, 1)) == q) return u;
    return std::nullopt;
  }
  return std::nullopt;
}

// Merges same-form neighbours so that repeated composition does not keep
// fragmenting regions of linearity.
void coalesce(std::vector<LinearCell>& cells) {
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (std::size_t j = i + 1; j < cells.size();) {
        std::optional<Polytope> u;
        if (cells[i].form == cells[j].form) u = convex_union(cells[i].polytope, cells[j].polytope);
        if (!u) {
          ++j;
          continue;
        }
        // cell i grew: rescan its later neighbours
        cells[i].polytope = std::move(*u);
        cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(j));
        j = i + 1;
        merged = true;
      }
  }
}

class Builder {
 public:
  explicit Builder(const VarContext& ctx) : ctx_(ctx), cube_(Polytope::unit_cube(ctx.size())) {}

  const std::vector<LinearCell>& build(const EventFormula& t) {
    if (auto it = memo_.find(t.id()); it != memo_.end()) return it->second;
    const std::size_t n = ctx_.size();
    std::vector<LinearCell> cells;
    switch (t.op()) {
      case Connective::Atom: {
        const auto i = ctx_.index_of(t.atom_value().name);
        cells.push_back({cube_, AffineForm::projection(n, *i)});
        break;
      }
      case Connective::Bot:
        cells.push_back({cube_, AffineForm::constant_form(n, 0)});
        break;
      case Connective::Neg:
        for (const auto& c : build(t.lhs())) cells.push_back({c.polytope, complement(c.form)});
        break;
      case Connective::OPlus: {
        const auto& f = build(t.lhs());
        const auto& g = build(t.rhs());
        for (const auto& cf : f)
          for (const auto& cg : g)
            if (auto p = full_overlap(cf.polytope, cg.polytope))
              emit_truncated_sum(*p, cf.form + cg.form, cells);
        coalesce(cells);
        break;
      }
      default:
        throw Error("internal: mcnaughton expects a normalized formula");
    }
    return memo_.emplace(t.id(), std::move(cells)).first->second;
  }

 private:
  const VarContext& ctx_;
  Polytope cube_;
  std::unordered_map<const void*, std::vector<LinearCell>> memo_;
};

void check_point(const PwlFunction& f, std::span<const ExactRational> point) {
  if (point.size() != f.arity())
    throw InputError("point has " + std::to_string(point.size()) + " coordinates, function has " +
                     std::to_string(f.arity()));
  for (const auto& x : point)
    if (!in_unit_interval(x)) throw InputError("point " + to_string(point) + " is outside the unit cube");
}

}  // namespace

PwlFunction mcnaughton(const EventFormula& phi, const VarContext& ctx) {
  for (const auto& v : atoms(phi, [](const Var& v) { return v.name; }))
    if (!ctx.contains(v.name)) throw InputError("unknown variable '" + v.name + "'");
  const EventFormula normal = normalize(phi);
  Builder b(ctx);
  return PwlFunction(ctx, b.build(normal));
}

ExactRational evaluate(const PwlFunction& f, std::span<const ExactRational> point) {
  check_point(f, point);
  for (const auto& c : f.cells())
    if (c.polytope.contains(point)) return c.form(point);
  throw Error("internal: point " + to_string(point) + " not covered by any cell");
}

std::vector<Polytope> oneset(const PwlFunction& f) {
  std::vector<Polytope> pieces;
  for (const auto& c : f.cells()) {
    if (c.form.is_constant()) {
      if (c.form.constant == 1) pieces.push_back(c.polytope);
      continue;
    }
    const Halfspace eq = below(c.form, 1);
    Polytope p = c.polytope.intersect({}, std::span(&eq, 1));
    if (!p.is_empty()) pieces.push_back(std::move(p));
  }
  // Drop pieces contained in another piece (shared faces, duplicates).
  std::vector<Polytope> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < pieces.size() && !redundant; ++j) {
      if (i == j || !pieces[j].contains(pieces[i])) continue;
      // Equal pieces: keep the first occurrence only.
      redundant = !(pieces[i] == pieces[j]) || j < i;
    }
    if (!redundant) out.push_back(pieces[i]);
  }
  return out;
}

bool oneset_equals(const PwlFunction& f, const Polytope& p) {
  for (const auto& piece : oneset(f))
    if (!p.contains(piece)) return false;
  if (p.is_empty()) return true;
  for (const auto& c : f.cells()) {
    const Polytope q = c.polytope.intersect(p);
    for (const auto& v : q.vertices())
      if (c.form(v) != 1) return false;
  }
  return true;
}

std::vector<Point> Refinement::vertices() const {
  std::vector<Point> out;
  for (const auto& c : cells) out.insert(out.end(), c.vertices().begin(), c.vertices().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

Refinement overlay_refinement(std::span<const PwlFunction> fs, std::size_t n) {
  Refinement r;
  r.cells.push_back(Polytope::unit_cube(n));
  r.forms.emplace_back();
  for (const auto& f : fs) {
    Refinement next;
    for (std::size_t c = 0; c < r.cells.size(); ++c)
      for (const auto& cell : f.cells())
        if (auto p = full_overlap(r.cells[c], cell.polytope)) {
          next.cells.push_back(std::move(*p));
          auto forms = r.forms[c];
          forms.push_back(cell.form);
          next.forms.push_back(std::move(forms));
        }
    r = std::move(next);
  }
  return r;
}

// Hyperplane with a sign convention: first nonzero normal entry positive.
Halfspace oriented(Halfspace h) {
  for (const auto& c : h.normal) {
    if (c == 0) continue;
    if (c < 0) {
      for (auto& x : h.normal) x = -x;
      h.offset = -h.offset;
    }
    break;
  }
  return h;
}

// x_i = 0 or x_i = 1, whatever the scaling of the normal.
bool is_cube_boundary(const Halfspace& h) {
  const IntVector::value_type* coef = nullptr;
  for (const auto& c : h.normal) {
    if (c == 0) continue;
    if (coef) return false;
    coef = &c;
  }
  return coef && (h.offset == 0 || h.offset == *coef);
}

Refinement arrangement_refinement(std::span<const PwlFunction> fs, std::size_t n) {
  std::set<Halfspace> planes;
  for (const auto& f : fs)
    for (const auto& c : f.cells())
      for (const auto& h : c.polytope.facets()) {
        Halfspace o = oriented(h);
        if (!is_cube_boundary(o)) planes.insert(std::move(o));
      }
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, 0);
    e[i] = 2;
    planes.insert(Halfspace{std::move(e), 1});
  }

  std::vector<Polytope> cells{Polytope::unit_cube(n)};
  for (const auto& h : planes) {
    Halfspace neg = h;
    for (auto& x : neg.normal) x = -x;
    neg.offset = -neg.offset;
    std::vector<Polytope> next;
    for (auto& c : cells) {
      bool pos = false, negv = false;
      for (const auto& v : c.vertices()) {
        const ExactRational s = h.slack(v);
        if (s > 0) pos = true;
        if (s < 0) negv = true;
      }
      if (!(pos && negv)) {
        next.push_back(std::move(c));
        continue;
      }
      next.push_back(c.intersect(std::span(&h, 1)));
      next.push_back(c.intersect(std::span(&neg, 1)));
    }
    cells = std::move(next);
  }

  Refinement r;
  for (auto& c : cells) {
    Point centroid(n, 0);
    for (const auto& v : c.vertices())
      for (std::size_t j = 0; j < n; ++j) centroid[j] += v[j];
    for (auto& x : centroid) x /= static_cast<unsigned long>(c.vertices().size());
    std::vector<AffineForm> forms;
    for (const auto& f : fs) {
      const LinearCell* hit = nullptr;
      for (const auto& lc : f.cells())
        if (lc.polytope.contains(centroid)) {
          hit = &lc;
          break;
        }
      if (!hit) throw Error("internal: arrangement cell not covered");
      forms.push_back(hit->form);
    }
    r.cells.push_back(std::move(c));
    r.forms.push_back(std::move(forms));
  }
  return r;
}

}  // namespace

Refinement common_refinement(std::span<const PwlFunction> fs, RefinementStrategy strategy) {
  if (fs.empty()) throw InputError("common refinement of no functions");
  for (const auto& f : fs)
    if (!(f.context() == fs.front().context()))
      throw InputError("common refinement: functions over different variable contexts");
  const std::size_t n = fs.front().arity();
  return strategy == RefinementStrategy::Overlay ? overlay_refinement(fs, n)
                                                 : arrangement_refinement(fs, n);
}

}  // namespace coh
