#include "mackey/zlinalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace mackey::zlinalg {

void normalize(SparseRow& row) {
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseRow out;
  out.reserve(row.size());
  for (auto& [c, v] : row) {
    if (!out.empty() && out.back().first == c) {
      out.back().second += v;
    } else {
      out.emplace_back(c, std::move(v));
    }
  }
  std::erase_if(out, [](const auto& e) { return e.second == 0; });
  row = std::move(out);
}

SparseRow axpy(const SparseRow& y, const Int& a, const SparseRow& x) {
  SparseRow out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      Int v = a * x[j].second;
      if (v != 0) out.emplace_back(x[j].first, std::move(v));
      ++j;
    } else {
      Int v = y[i].second + a * x[j].second;
      if (v != 0) out.emplace_back(y[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

void IntMatrix::add(std::size_t r, std::size_t c, const Int& v) {
  if (r >= rows_.size() || c >= cols_) throw std::out_of_range("IntMatrix::add out of bounds");
  auto& row = rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    it->second += v;
    if (it->second == 0) row.erase(it);
  } else if (v != 0) {
    row.insert(it, {static_cast<std::uint32_t>(c), v});
  }
}

Int IntMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = rows_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::size_t col) { return e.first < col; });
  return (it != row.end() && it->first == c) ? it->second : Int(0);
}

std::size_t IntMatrix::append_row(SparseRow row) {
  normalize(row);
  if (!row.empty() && row.back().first >= cols_) throw std::out_of_range("row exceeds column count");
  rows_.push_back(std::move(row));
  return rows_.size() - 1;
}

std::size_t IntMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

DenseMatrix IntMatrix::dense() const {
  DenseMatrix d(rows_.size(), std::vector<Int>(cols_, 0));
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& [c, v] : rows_[r]) d[r][c] = v;
  return d;
}

IntMatrix IntMatrix::from_dense(const DenseMatrix& d, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& row : d) {
    SparseRow s;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0) s.emplace_back(static_cast<std::uint32_t>(c), row[c]);
    m.append_row(std::move(s));
  }
  return m;
}

DenseMatrix identity(std::size_t n) {
  DenseMatrix d(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, std::size_t inner) {
  const std::size_t n = a.size();
  const std::size_t m = b.empty() ? 0 : b[0].size();
  DenseMatrix out(n, std::vector<Int>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

Int determinant(const DenseMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  DenseMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(t);
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

namespace {

// Dense Smith reduction; transforms are tracked when the pointers are non-null.
struct SmithWork {
  DenseMatrix a;
  DenseMatrix* u = nullptr;
  DenseMatrix* v = nullptr;
  DenseMatrix* v_inv = nullptr;

  std::size_t rows() const { return a.size(); }
  std::size_t cols() const { return a.empty() ? 0 : a[0].size(); }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    if (u) std::swap((*u)[i], (*u)[j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& r : a) std::swap(r[i], r[j]);
    if (v) {
      for (auto& r : *v) std::swap(r[i], r[j]);
      std::swap((*v_inv)[i], (*v_inv)[j]);
    }
  }
  // row_i += k * row_j
  void add_row(std::size_t i, std::size_t j, const Int& k) {
    for (std::size_t c = 0; c < cols(); ++c)
      if (a[j][c] != 0) a[i][c] += k * a[j][c];
    if (u)
      for (std::size_t c = 0; c < u->size(); ++c)
        if ((*u)[j][c] != 0) (*u)[i][c] += k * (*u)[j][c];
  }
  // col_i += k * col_j ; inverse transform: row_j of v_inv -= k * row_i
  void add_col(std::size_t i, std::size_t j, const Int& k) {
    for (auto& r : a)
      if (r[j] != 0) r[i] += k * r[j];
    if (v) {
      for (auto& r : *v)
        if (r[j] != 0) r[i] += k * r[j];
      auto& vi = *v_inv;
      for (std::size_t c = 0; c < vi.size(); ++c)
        if (vi[i][c] != 0) vi[j][c] -= k * vi[i][c];
    }
  }
  void negate_row(std::size_t i) {
    for (auto& x : a[i]) x = -x;
    if (u)
      for (auto& x : (*u)[i]) x = -x;
  }

  bool find_pivot(std::size_t t, std::size_t& pr, std::size_t& pc) const {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < rows(); ++i)
      for (std::size_t j = t; j < cols(); ++j) {
        if (a[i][j] == 0) continue;
        Int av = abs(a[i][j]);
        if (!found || av < best) {
          found = true;
          best = av;
          pr = i;
          pc = j;
        }
      }
    return found;
  }

  void run() {
    const std::size_t n = std::min(rows(), cols());
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t pr = 0, pc = 0;
      if (!find_pivot(t, pr, pc)) return;
      swap_rows(t, pr);
      swap_cols(t, pc);
      for (;;) {
        bool dirty = false;
        for (std::size_t i = t + 1; i < rows(); ++i) {
          if (a[i][t] == 0) continue;
          Int q;
          mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
          add_row(i, t, -q);
          if (a[i][t] != 0) dirty = true;
        }
        for (std::size_t j = t + 1; j < cols(); ++j) {
          if (a[t][j] == 0) continue;
          Int q;
          mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
          add_col(j, t, -q);
          if (a[t][j] != 0) dirty = true;
        }
        if (dirty) {
          // a remainder is smaller than the pivot: move the new minimum into place
          std::size_t r2 = t, c2 = t;
          Int best = abs(a[t][t]);
          for (std::size_t i = t + 1; i < rows(); ++i)
            if (a[i][t] != 0 && abs(a[i][t]) < best) {
              best = abs(a[i][t]);
              r2 = i;
              c2 = t;
            }
          for (std::size_t j = t + 1; j < cols(); ++j)
            if (a[t][j] != 0 && abs(a[t][j]) < best) {
              best = abs(a[t][j]);
              r2 = t;
              c2 = j;
            }
          swap_rows(t, r2);
          swap_cols(t, c2);
          continue;
        }
        // row and column cleared; enforce divisibility of the remaining block
        bool fixed = true;
        for (std::size_t i = t + 1; i < rows() && fixed; ++i)
          for (std::size_t j = t + 1; j < cols(); ++j)
            if (a[i][j] % a[t][t] != 0) {
              add_row(t, i, 1);
              fixed = false;
              break;
            }
        if (fixed) break;
      }
      if (a[t][t] < 0) negate_row(t);
    }
  }
};

}  // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
  SmithResult r;
  r.u = identity(m.rows());
  r.v = identity(m.cols());
  r.v_inv = identity(m.cols());
  SmithWork w{m.dense(), &r.u, &r.v, &r.v_inv};
  if (m.rows() == 0) {
    r.s = {};
  } else {
    w.run();
    r.s = std::move(w.a);
  }
  const std::size_t n = std::min(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i) r.diagonal.push_back(r.s[i][i]);
  return r;
}

bool verify_smith(const IntMatrix& m, const SmithResult& r) {
  const DenseMatrix prod = multiply(multiply(r.u, m.dense(), m.rows()), r.v, m.cols());
  if (prod != r.s && m.rows() > 0) return false;
  const Int du = determinant(r.u), dv = determinant(r.v);
  if (abs(du) != 1 || abs(dv) != 1) return false;
  if (multiply(r.v, r.v_inv, m.cols()) != identity(m.cols())) return false;
  for (std::size_t i = 0; i < r.s.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && r.s[i][j] != 0) return false;
  for (std::size_t i = 0; i + 1 < r.diagonal.size(); ++i) {
    const Int& a = r.diagonal[i];
    const Int& b = r.diagonal[i + 1];
    if (a < 0 || b < 0) return false;
    if (a == 0 && b != 0) return false;
    if (a != 0 && b % a != 0) return false;
  }
  return true;
}

std::vector<Int> smith_diagonal(DenseMatrix a) {
  SmithWork w{std::move(a)};
  w.run();
  std::vector<Int> d;
  const std::size_t n = std::min(w.rows(), w.cols());
  for (std::size_t i = 0; i < n; ++i) d.push_back(w.a[i][i]);
  return d;
}

Int CokernelStructure::torsion_order() const {
  Int o = 1;
  for (const auto& d : invariant_factors) o *= d;
  return o;
}

RowLattice::RowLattice(std::size_t ambient_rank) : pivots_(ambient_rank) {}

void RowLattice::insert(SparseRow row) {
  normalize(row);
  while (!row.empty()) {
    const std::uint32_t c = row.front().first;
    if (c >= pivots_.size()) throw std::out_of_range("row exceeds lattice rank");
    auto& slot = pivots_[c];
    if (!slot) {
      if (row.front().second < 0)
        for (auto& e : row) e.second = -e.second;
      slot = std::move(row);
      return;
    }
    const Int& p = slot->front().second;
    const Int a = row.front().second;
    if (a % p == 0) {
      row = axpy(row, -(a / p), *slot);
      continue;
    }
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    // new pivot s*row + t*slot has leading entry g; the complement kills column c
    SparseRow pivot = axpy(axpy(SparseRow{}, s, row), t, *slot);
    SparseRow rest = axpy(axpy(SparseRow{}, Int(p / g), row), Int(-(a / g)), *slot);
    if (pivot.front().second < 0)
      for (auto& e : pivot) e.second = -e.second;
    slot = std::move(pivot);
    row = std::move(rest);
  }
}

bool RowLattice::contains(SparseRow row) const {
  normalize(row);
  while (!row.empty()) {
    const std::uint32_t c = row.front().first;
    if (c >= pivots_.size() || !pivots_[c]) return false;
    const Int& p = pivots_[c]->front().second;
    if (row.front().second % p != 0) return false;
    row = axpy(row, -(row.front().second / p), *pivots_[c]);
  }
  return true;
}

std::size_t RowLattice::rank() const {
  std::size_t r = 0;
  for (const auto& p : pivots_) r += p ? 1 : 0;
  return r;
}

std::vector<SparseRow> RowLattice::basis() const {
  std::vector<SparseRow> out;
  for (const auto& p : pivots_)
    if (p) out.push_back(*p);
  return out;
}

namespace {

CokernelStructure structure_from_echelon(std::vector<SparseRow> rows, std::size_t n) {
  CokernelStructure cs;
  cs.free_rank = n - rows.size();
  // Unit pivots eliminate their column: clear it from the other rows and drop both.
  std::vector<std::int64_t> col_owner(n, -1);
  for (std::size_t i = 0; i < rows.size(); ++i) col_owner[rows[i].front().first] = static_cast<std::int64_t>(i);
  std::vector<bool> unit(rows.size(), false);
  for (std::size_t i = rows.size(); i-- > 0;) {
    if (rows[i].front().second != 1) continue;
    unit[i] = true;
    const std::uint32_t c = rows[i].front().first;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == i || unit[k]) continue;
      auto it = std::lower_bound(rows[k].begin(), rows[k].end(), c,
                                 [](const auto& e, std::uint32_t col) { return e.first < col; });
      if (it == rows[k].end() || it->first != c) continue;
      const Int coef = it->second;
      rows[k] = axpy(rows[k], -coef, rows[i]);
    }
  }
  std::vector<bool> dropped_col(n, false);
  std::vector<SparseRow> rest;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (unit[i])
      dropped_col[rows[i].front().first] = true;
    else
      rest.push_back(std::move(rows[i]));
  }
  std::vector<std::int64_t> col_index(n, -1);
  std::size_t m = 0;
  for (std::size_t c = 0; c < n; ++c)
    if (!dropped_col[c]) col_index[c] = static_cast<std::int64_t>(m++);
  if (!rest.empty()) {
    DenseMatrix d(rest.size(), std::vector<Int>(m, 0));
    for (std::size_t i = 0; i < rest.size(); ++i)
      for (const auto& [c, v] : rest[i]) {
        if (col_index[c] < 0) throw std::logic_error("unit column survived elimination");
        d[i][static_cast<std::size_t>(col_index[c])] = v;
      }
    for (const Int& x : smith_diagonal(std::move(d)))
      if (x > 1) cs.invariant_factors.push_back(x);
  }
  return cs;
}

}  // namespace

CokernelStructure RowLattice::cokernel() const { return structure_from_echelon(basis(), pivots_.size()); }

CokernelStructure cokernel_structure(const IntMatrix& m, std::size_t ambient_rank) {
  if (m.cols() != ambient_rank) throw std::invalid_argument("relation matrix width differs from ambient rank");
  RowLattice lat(ambient_rank);
  for (std::size_t r = 0; r < m.rows(); ++r) lat.insert(m.row(r));
  return lat.cokernel();
}

Membership image_contains(const IntMatrix& m, const std::vector<Int>& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("vector length differs from column count");
  Membership out;
  if (std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; })) {
    out.member = true;
    out.combination.assign(m.rows(), 0);
    return out;
  }
  if (m.rows() == 0) {
    out.obstruction = "no relations; nonzero vector";
    return out;
  }
  const SmithResult snf = smith_normal_form(m);
  // w = v * V; need w_i = y_i * d_i, then x = y * U.
  std::vector<Int> w(m.cols(), 0);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t k = 0; k < m.cols(); ++k) w[j] += v[k] * snf.v[k][j];
  std::vector<Int> y(m.rows(), 0);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    const Int d = i < snf.diagonal.size() ? snf.diagonal[i] : Int(0);
    if (d == 0) {
      if (w[i] != 0) {
        out.obstruction = "coordinate " + std::to_string(i + 1) + " lies outside the row span (d" +
                          std::to_string(i + 1) + "=0, w=" + w[i].get_str() + ")";
        return out;
      }
      continue;
    }
    if (w[i] % d != 0) {
      out.obstruction = "d" + std::to_string(i + 1) + "=" + d.get_str() + " does not divide " + w[i].get_str();
      return out;
    }
    y[i] = w[i] / d;
  }
  out.member = true;
  out.combination.assign(m.rows(), 0);
  for (std::size_t j = 0; j < m.rows(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out.combination[j] += y[i] * snf.u[i][j];
  return out;
}

}  // namespace mackey::zlinalg
