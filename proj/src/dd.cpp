#include "coh/detail/dd.hpp"

#include <bit>
#include <cstdint>

namespace coh::detail {

namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  friend Bits operator&(const Bits& a, const Bits& b) {
    Bits r = a;
    for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] &= b.words_[i];
    return r;
  }

 private:
  std::vector<std::uint64_t> words_;
};

BigInt dot(const IntVector& a, const IntVector& y) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && y[i] != 0) s += a[i] * y[i];
  return s;
}

// p*u - q*v, made primitive.
IntVector combine(const BigInt& p, const IntVector& u, const BigInt& q, const IntVector& v) {
  IntVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = p * u[i] - q * v[i];
  return primitive(std::move(r));
}

struct Ray {
  IntVector v;
  Bits zero;
};

}  // namespace

ConeGenerators cone_generators(std::size_t dim, const std::vector<IntVector>& rows) {
  const std::size_t m = rows.size();
  std::vector<IntVector> lin;
  for (std::size_t i = 0; i < dim; ++i) {
    IntVector e(dim, 0);
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  std::vector<Ray> rays;

  for (std::size_t k = 0; k < m; ++k) {
    const IntVector& a = rows[k];

    std::size_t pick = lin.size();
    BigInt al0;
    for (std::size_t i = 0; i < lin.size(); ++i) {
      al0 = dot(a, lin[i]);
      if (al0 != 0) {
        pick = i;
        break;
      }
    }

    if (pick < lin.size()) {
      IntVector l0 = lin[pick];
      if (al0 < 0) {
        for (auto& x : l0) x = -x;
        al0 = -al0;
      }
      std::vector<IntVector> rest;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == pick) continue;
        const BigInt al = dot(a, lin[i]);
        rest.push_back(al == 0 ? lin[i] : combine(al0, lin[i], al, l0));
      }
      lin = std::move(rest);
      for (auto& r : rays) {
        const BigInt ar = dot(a, r.v);
        if (ar != 0) r.v = combine(al0, r.v, ar, l0);
        r.zero.set(k);
      }
      Ray nr{l0, Bits(m)};
      for (std::size_t j = 0; j < k; ++j) nr.zero.set(j);
      rays.push_back(std::move(nr));
      continue;
    }

    std::vector<std::size_t> pos, neg;
    std::vector<BigInt> val(rays.size());
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i].v);
      if (val[i] > 0) pos.push_back(i);
      else if (val[i] < 0) neg.push_back(i);
    }
    if (neg.empty()) {
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (val[i] == 0) rays[i].zero.set(k);
      continue;
    }

    const std::size_t pointed_dim = dim - lin.size();
    const std::size_t need = pointed_dim >= 2 ? pointed_dim - 2 : 0;
    for (std::size_t p : pos)
      for (std::size_t q : neg) {
        Bits common = rays[p].zero & rays[q].zero;
        if (common.count() < need) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != q && common.subset_of(rays[r].zero)) adjacent = false;
        if (!adjacent) continue;
        // val[p] > 0 > val[q]: val[p]*q - val[q]*p lies on a·y = 0.
        Ray nr{combine(val[p], rays[q].v, val[q], rays[p].v), common};
        nr.zero.set(k);
        next.push_back(std::move(nr));
      }
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (val[i] < 0) continue;
      if (val[i] == 0) rays[i].zero.set(k);
      next.push_back(std::move(rays[i]));
    }
    rays = std::move(next);
  }

  ConeGenerators out;
  out.lineality = std::move(lin);
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  return out;
}

std::vector<std::vector<ExactRational>> rref(std::vector<std::vector<ExactRational>> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const ExactRational piv = rows[r][c];
    for (auto& x : rows[r]) x /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const ExactRational f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::size_t rank(std::vector<std::vector<ExactRational>> rows) {
  return rref(std::move(rows)).size();
}

std::vector<std::vector<ExactRational>> nullspace(
    const std::vector<std::vector<ExactRational>>& m, std::size_t cols) {
  const auto e = rref(m);
  std::vector<std::size_t> pivot_of_row;
  std::vector<bool> is_pivot(cols, false);
  for (const auto& row : e) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    pivot_of_row.push_back(c);
    is_pivot[c] = true;
  }
  std::vector<std::vector<ExactRational>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<ExactRational> v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < e.size(); ++i) v[pivot_of_row[i]] = -e[i][f];
    basis.push_back(std::move(v));
  }
  return rref(std::move(basis));
}

}  // namespace coh::detail
