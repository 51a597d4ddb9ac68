// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <limits>
#include <vector>

#include "fdbia/errors.hpp"
#include "fdbia/linalg.hpp"
#include "fdbia/rng.hpp"

using namespace fdbia;

namespace {

CMat random_matrix(CounterRng& rng, Index rows, Index cols) {
  CMat m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.next_cn();
  return m;
}

CMat random_unitary(CounterRng& rng, Index n) {
  const CMat g = random_matrix(rng, n, n);
  const Eigen::HouseholderQR<CMat> qr(g);
  return qr.householderQ() * CMat::Identity(n, n);
}

}  // namespace

TEST_CASE("idft matrix matches hand-evaluated points") {
  const CMat one = idft_matrix(1);
  CHECK(one.rows() == 1);
  CHECK(std::abs(one(0, 0) - Cplx(1.0, 0.0)) < 1e-15);

  const double s = 1.0 / std::sqrt(2.0);
  const CMat two = idft_matrix(2);
  CMat expected(2, 2);
  expected << Cplx(s, 0), Cplx(s, 0), Cplx(s, 0), Cplx(-s, 0);
  CHECK((two - expected).norm() < 1e-14);

  const CMat four = idft_matrix(4);
  CVec col2(4);
  col2 << Cplx(0.5, 0), Cplx(0, 0.5), Cplx(-0.5, 0), Cplx(0, -0.5);
  CHECK((four.col(1) - col2).norm() < 1e-14);
}

TEST_CASE("idft matrix rejects size zero") {
  CHECK_THROWS_AS(idft_matrix(0), InvalidDimensionError);
}

TEST_CASE("idft columns stay orthonormal up to size 12") {
  for (Index n = 1; n <= 12; ++n) {
    const CMat m = idft_matrix(n);
    CHECK((m.adjoint() * m - CMat::Identity(n, n)).norm() <= 1e-11);
  }
}

TEST_CASE("submatrix_columns slices inclusively") {
  const CMat two = idft_matrix(2);
  const CMat first = submatrix_columns(two, 1, 1);
  CHECK(first.cols() == 1);
  CHECK((first - two.col(0)).norm() == 0.0);

  const CMat four = idft_matrix(4);
  const CMat tail = submatrix_columns(four, 3, 4);
  CHECK((tail - four.rightCols(2)).norm() == 0.0);

  CHECK((submatrix_columns(four, 1, 4) - four).norm() == 0.0);

  CHECK_THROWS_AS(submatrix_columns(four, 0, 2), InvalidRangeError);
  CHECK_THROWS_AS(submatrix_columns(four, 3, 5), InvalidRangeError);
  CHECK_THROWS_AS(submatrix_columns(four, 3, 2), InvalidRangeError);
}

TEST_CASE("non-finite inputs are rejected") {
  CMat bad(1, 2);
  bad << Cplx(1, 0), Cplx(std::numeric_limits<double>::quiet_NaN(), 0);
  CHECK_FALSE(all_finite(bad));
  CHECK_THROWS_AS(numerical_rank(bad), NumericalError);
  bad(0, 1) = Cplx(std::numeric_limits<double>::infinity(), 0);
  CHECK_THROWS_AS(right_pseudoinverse(bad), NumericalError);
}

TEST_CASE("numerical rank on known matrices") {
  CHECK(numerical_rank(idft_matrix(4)) == 4);

  CMat repeated(2, 2);
  repeated << Cplx(1, 0), Cplx(1, 0), Cplx(1, 0), Cplx(1, 0);
  CHECK(numerical_rank(repeated) == 1);

  CHECK(numerical_rank(CMat::Zero(3, 3)) == 0);
}

TEST_CASE("numerical rank is stable under permutations and unitaries") {
  CounterRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Index rows = 2 + trial % 4;
    const Index cols = 2 + (trial / 4) % 4;
    const Index inner = 1 + trial % std::min(rows, cols);
    const CMat m = random_matrix(rng, rows, inner) * random_matrix(rng, inner, cols);
    const Index rank = numerical_rank(m);
    CHECK(rank == inner);

    const CMat left = random_unitary(rng, rows);
    const CMat right = random_unitary(rng, cols);
    CHECK(numerical_rank(left * m) == rank);
    CHECK(numerical_rank(m * right) == rank);
    CHECK(numerical_rank(m.rowwise().reverse()) == rank);
    CHECK(numerical_rank(m.colwise().reverse()) == rank);
  }
}

TEST_CASE("right pseudoinverse on hand-checked inputs") {
  CMat rows2(2, 3);
  rows2 << Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0), Cplx(0, 0);
  const CMat pinv = right_pseudoinverse(rows2);
  CMat expected(3, 2);
  expected << Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0), Cplx(0, 0), Cplx(0, 0);
  CHECK((pinv - expected).norm() < 1e-12);

  CMat scalar(1, 1);
  scalar << Cplx(2, 0);
  CHECK(std::abs(right_pseudoinverse(scalar)(0, 0) - Cplx(0.5, 0)) < 1e-15);
}

TEST_CASE("right pseudoinverse satisfies m * pinv = I on random draws") {
  CounterRng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index rows = 1 + trial % 6;
    const Index cols = rows + trial % (13 - rows - 1);
    const CMat m = random_matrix(rng, rows, std::min<Index>(cols, 12));
    const CMat pinv = right_pseudoinverse(m);
    CHECK(pinv.rows() == m.cols());
    CHECK(pinv.cols() == m.rows());
    CHECK((m * pinv - CMat::Identity(rows, rows)).norm() <= 1e-10);
  }
}

TEST_CASE("right pseudoinverse rejects rank-deficient rows") {
  CMat deficient(2, 3);
  deficient << Cplx(1, 0), Cplx(2, 0), Cplx(3, 0),  //
      Cplx(2, 0), Cplx(4, 0), Cplx(6, 0);
  CHECK_THROWS_AS(right_pseudoinverse(deficient), SingularMatrixError);
  CHECK_THROWS_AS(right_pseudoinverse(CMat::Zero(3, 2)), SingularMatrixError);
}

TEST_CASE("kron and block_diag basics") {
  CMat three(1, 1);
  three << Cplx(3, 0);
  const CMat k = kron(CMat::Identity(2, 2), three);
  CHECK((k - 3.0 * CMat::Identity(2, 2)).norm() == 0.0);

  CounterRng rng(3);
  const CMat a = random_matrix(rng, 2, 2);
  CHECK((kron(a, CMat::Identity(1, 1)) - a).norm() == 0.0);

  std::vector<CMat> blocks;
  blocks.push_back(CMat::Constant(1, 1, Cplx(1, 0)));
  blocks.push_back(CMat::Constant(1, 1, Cplx(2, 0)));
  const CMat d = block_diag(blocks);
  CHECK(d.rows() == 2);
  CHECK(std::abs(d(0, 0) - Cplx(1, 0)) == 0.0);
  CHECK(std::abs(d(1, 1) - Cplx(2, 0)) == 0.0);
  CHECK(std::abs(d(0, 1)) == 0.0);

  // Mixed-shape identity: kron(a, b) against an element-wise construction.
  const CMat b = random_matrix(rng, 2, 3);
  const CMat kk = kron(a, b);
  for (Index i = 0; i < kk.rows(); ++i) {
    for (Index j = 0; j < kk.cols(); ++j) {
      CHECK(std::abs(kk(i, j) - a(i / 2, j / 3) * b(i % 2, j % 3)) < 1e-15);
    }
  }
}

// The schemes rely on submatrices of the IDFT matrix built from a CONSECUTIVE
// column range and an arbitrary row subset; those are Vandermonde-like and
// always full rank. Arbitrary column subsets are not (see the pinned
// counterexample below), so the sweep here covers the consecutive-column
// class exhaustively.
TEST_CASE("consecutive-column IDFT submatrices have full rank") {
  for (Index n = 1; n <= 8; ++n) {
    const CMat m = idft_matrix(n);
    for (Index width = 1; width <= n; ++width) {
      for (Index first = 0; first + width <= n; ++first) {
        const CMat cols = m.middleCols(first, width);
        // All row subsets of size `width`, encoded as bitmasks.
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (__builtin_popcount(mask) != static_cast<int>(width)) continue;
          CMat sub(width, width);
          Index r = 0;
          for (Index row = 0; row < n; ++row) {
            if (mask & (1u << row)) sub.row(r++) = cols.row(row);
          }
          CHECK(numerical_rank(sub) == width);
        }
      }
    }
  }
}

TEST_CASE("non-consecutive column subsets of a composite-size IDFT can be singular") {
  // Rows {1,3} x columns {1,3} of the 4-point matrix is all 1/2: rank 1.
  const CMat m = idft_matrix(4);
  CMat sub(2, 2);
  sub << m(0, 0), m(0, 2), m(2, 0), m(2, 2);
  CHECK(numerical_rank(sub) == 1);
}
