#pragma once

// Exact integer linear algebra over Z: Smith normal form, cokernels of
// relation systems and lattice membership with certificates.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mackey::zlinalg {

using Int = mpz_class;

/// Sparse row: (column, value) pairs sorted by column, no zeros.
using SparseRow = std::vector<std::pair<std::uint32_t, Int>>;
using DenseMatrix = std::vector<std::vector<Int>>;

void normalize(SparseRow& row);  // sort, coalesce duplicates, drop zeros
SparseRow axpy(const SparseRow& y, const Int& a, const SparseRow& x);  // y + a*x

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  /// Adds v at (r, c); repeated coordinates accumulate.
  void add(std::size_t r, std::size_t c, const Int& v);
  Int at(std::size_t r, std::size_t c) const;
  std::size_t append_row(SparseRow row);
  const SparseRow& row(std::size_t r) const { return rows_[r]; }
  std::size_t nonzeros() const;

  DenseMatrix dense() const;
  static IntMatrix from_dense(const DenseMatrix& d, std::size_t cols);

 private:
  std::size_t cols_ = 0;
  std::vector<SparseRow> rows_;
};

DenseMatrix identity(std::size_t n);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, std::size_t inner);
/// Exact determinant by fraction-free (Bareiss) elimination.
Int determinant(const DenseMatrix& m);

struct SmithResult {
  DenseMatrix u;      // rows x rows
  DenseMatrix s;      // rows x cols, diagonal
  DenseMatrix v;      // cols x cols
  DenseMatrix v_inv;  // inverse of v
  std::vector<Int> diagonal;  // min(rows, cols) entries, d1 | d2 | ..., zeros last
};

/// U * m * V = S, with min-|entry| pivoting (ties: lowest row, then column).
SmithResult smith_normal_form(const IntMatrix& m);
/// Recomputes U*m*V, checks it equals S, det U = ±1, det V = ±1 and the divisibility chain.
bool verify_smith(const IntMatrix& m, const SmithResult& r);

struct CokernelStructure {
  std::vector<Int> invariant_factors;  // each >= 2, d1 | d2 | ...
  std::size_t free_rank = 0;

  /// Order of the torsion part.
  Int torsion_order() const;
  bool trivial() const { return free_rank == 0 && invariant_factors.empty(); }
  bool finite() const { return free_rank == 0; }
};

/// Incrementally maintained echelon basis of a sublattice of Z^n.
class RowLattice {
 public:
  explicit RowLattice(std::size_t ambient_rank);

  void insert(SparseRow row);
  bool contains(SparseRow row) const;
  std::size_t ambient_rank() const { return pivots_.size(); }
  std::size_t rank() const;
  std::vector<SparseRow> basis() const;
  CokernelStructure cokernel() const;

 private:
  std::vector<std::optional<SparseRow>> pivots_;  // indexed by leading column
};

/// Z^ambient_rank / rowspan(m).
CokernelStructure cokernel_structure(const IntMatrix& m, std::size_t ambient_rank);

struct Membership {
  bool member = false;
  std::vector<Int> combination;  // row coefficients when member
  std::string obstruction;       // SNF witness when not a member
};

Membership image_contains(const IntMatrix& m, const std::vector<Int>& v);

/// Invariant factors of a dense matrix without tracking transforms.
std::vector<Int> smith_diagonal(DenseMatrix a);

}  // namespace mackey::zlinalg
