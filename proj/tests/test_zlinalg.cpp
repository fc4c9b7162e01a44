#include <doctest.h>

#include <random>

#include "mackey/zlinalg.hpp"

using namespace mackey::zlinalg;

namespace {

IntMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rows[r][c] != 0) m.add(r, c, Int(rows[r][c]));
  return m;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int range, double density) {
  std::uniform_int_distribution<int> v(-range, range);
  std::uniform_real_distribution<double> u(0, 1);
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (u(rng) < density) m.add(r, c, v(rng));
  return m;
}

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace

TEST_CASE("textbook Smith form") {
  auto m = from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}, 3);
  auto s = smith_normal_form(m);
  CHECK(verify_smith(m, s));
  CHECK(s.diagonal == std::vector<Int>{2, 6, 12});
  auto c = cokernel_structure(m, 3);
  CHECK(c.invariant_factors == std::vector<Int>{2, 6, 12});
  CHECK(c.free_rank == 0);
  CHECK(c.torsion_order() == 144);
}

TEST_CASE("Smith form verifies on random matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    auto m = random_matrix(rng, r, c, 9, 0.6);
    auto s = smith_normal_form(m);
    REQUIRE(verify_smith(m, s));
  }
}

TEST_CASE("square nonsingular matrices: torsion order equals |det|") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    auto m = random_matrix(rng, n, n, 6, 0.8);
    const Int det = determinant(m.dense());
    if (det == 0) continue;
    ++checked;
    auto c = cokernel_structure(m, n);
    CHECK(c.free_rank == 0);
    CHECK(c.torsion_order() == abs_int(det));
  }
  CHECK(checked > 30);
}

TEST_CASE("incremental lattice matches the Smith cokernel") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = rng() % 8, c = 1 + rng() % 7;
    auto m = random_matrix(rng, r, c, 12, 0.5);
    RowLattice lattice(c);
    for (std::size_t i = 0; i < m.rows(); ++i) lattice.insert(m.row(i));
    auto a = lattice.cokernel(), b = cokernel_structure(m, c);
    CHECK(a.invariant_factors == b.invariant_factors);
    CHECK(a.free_rank == b.free_rank);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      CHECK(lattice.contains(m.row(i)));
      CHECK(lattice.contains(axpy(m.row(i), 3, m.row(0))));
    }
  }
}

TEST_CASE("membership with witness") {
  auto m = from_rows({{2, 0}, {0, 3}}, 2);
  auto yes = image_contains(m, {4, 9});
  CHECK(yes.member);
  CHECK(yes.combination == std::vector<Int>{2, 3});
  auto no = image_contains(m, {1, 0});
  CHECK_FALSE(no.member);
  CHECK_FALSE(no.obstruction.empty());
  RowLattice l(2);
  l.insert({{0, 2}});
  l.insert({{1, 3}});
  CHECK_FALSE(l.contains({{0, 1}}));
  CHECK(l.contains({{0, -6}, {1, 3}}));
}

TEST_CASE("free rank and the zero matrix") {
  auto c = cokernel_structure(IntMatrix(0, 3), 3);
  CHECK(c.free_rank == 3);
  CHECK(c.invariant_factors.empty());
  auto d = cokernel_structure(from_rows({{1, 1, 0}}, 3), 3);
  CHECK(d.free_rank == 2);
  CHECK(d.trivial() == false);
  CHECK(cokernel_structure(from_rows({{1, 0}, {0, -1}}, 2), 2).trivial());
}

TEST_CASE("sparse row normalization") {
  SparseRow r{{3, 2}, {1, 5}, {3, -2}, {0, 0}};
  normalize(r);
  CHECK(r == SparseRow{{1, 5}});
}
