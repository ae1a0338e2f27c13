#include "coh/lp.hpp"

#include <optional>

namespace coh::lp {

namespace {

class Tableau {
 public:
  // Rows are equality constraints with b >= 0; one artificial per row.
  Tableau(const Matrix& a, const Row& b, std::size_t n)
      : m_(a.size()), n_(n), cols_(n + a.size()) {
    rows_.assign(m_, Row(cols_ + 1, 0));
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = b[i] < 0;
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = flip ? ExactRational(-a[i][j]) : a[i][j];
      rows_[i][n_ + i] = 1;
      rows_[i][cols_] = flip ? ExactRational(-b[i]) : b[i];
      basis_.push_back(n_ + i);
    }
  }

  // Phase 1: minimise the sum of artificials. Returns false when infeasible.
  bool phase_one() {
    Row cost(cols_, 0);
    for (std::size_t j = n_; j < cols_; ++j) cost[j] = 1;
    load_objective(cost);
    run(cols_);
    if (objective_value() != 0) return false;
    drive_out_artificials();
    return true;
  }

  // Phase 2 on the original columns. Returns false when unbounded.
  bool phase_two(const Row& c) {
    Row cost(cols_, 0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = c[j];
    load_objective(cost);
    return run(n_);
  }

  std::vector<ExactRational> solution() const {
    std::vector<ExactRational> x(n_, 0);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][cols_];
    return x;
  }

 private:
  void load_objective(const Row& cost) {
    cost_ = cost;
    z_.assign(cols_ + 1, 0);
    for (std::size_t j = 0; j < cols_; ++j) z_[j] = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const ExactRational cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) z_[j] -= cb * rows_[i][j];
    }
  }

  ExactRational objective_value() const { return -z_[cols_]; }

  // Bland's rule over columns [0, limit). Returns false when unbounded.
  bool run(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (z_[j] < 0) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::size_t leave = rows_.size();
      ExactRational best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][enter] <= 0) continue;
        ExactRational ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave == rows_.size() || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const ExactRational p = rows_[r][c];
    for (auto& v : rows_[r]) v /= p;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r || rows_[i][c] == 0) continue;
      const ExactRational f = rows_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (rows_[r][j] != 0) rows_[i][j] -= f * rows_[r][j];
    }
    if (z_[c] != 0) {
      const ExactRational f = z_[c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (rows_[r][j] != 0) z_[j] -= f * rows_[r][j];
    }
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (rows_[i][j] != 0) {
          col = j;
          break;
        }
      if (col == n_) {
        // Redundant equality.
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col);
      ++i;
    }
  }

  std::size_t m_, n_, cols_;
  std::vector<Row> rows_;
  std::vector<std::size_t> basis_;
  Row z_;
  Row cost_;
};

void check_shape(const Matrix& a, const Row& b, std::size_t n) {
  if (a.size() != b.size()) throw InputError("lp: row count mismatch");
  for (const auto& r : a)
    if (r.size() != n) throw InputError("lp: ragged constraint matrix");
}

}  // namespace

Result minimize(const Matrix& a, const Row& b, const Row& c) {
  check_shape(a, b, c.size());
  Tableau t(a, b, c.size());
  Result r;
  if (!t.phase_one()) {
    r.status = Status::Infeasible;
    return r;
  }
  if (!t.phase_two(c)) {
    r.status = Status::Unbounded;
    return r;
  }
  r.status = Status::Optimal;
  r.x = t.solution();
  r.objective = 0;
  for (std::size_t j = 0; j < c.size(); ++j) r.objective += c[j] * r.x[j];
  return r;
}

Result maximize(const Matrix& a, const Row& b, const Row& c) {
  Row neg(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) neg[j] = -c[j];
  Result r = minimize(a, b, neg);
  if (r.status == Status::Optimal) r.objective = -r.objective;
  return r;
}

std::optional<std::vector<ExactRational>> feasible_point(const Matrix& a, const Row& b) {
  const std::size_t n = a.empty() ? 0 : a.front().size();
  Result r = minimize(a, b, Row(n, 0));
  if (r.status != Status::Optimal) return std::nullopt;
  return r.x;
}

}  // namespace coh::lp
