// SPDX-License-Identifier: Apache-2.0
//
// Complex-matrix primitives the transmission schemes are built from:
// IDFT matrices, numerical rank, right pseudoinverse, Kronecker product and
// block-diagonal assembly. Everything is double-precision dense (Eigen).

#ifndef FDBIA_LINALG_HPP
#define FDBIA_LINALG_HPP

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace fdbia {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// True when every entry is finite (no NaN/Inf).
bool all_finite(const CMat& m);

/// n-point IDFT matrix: entry (a,b) = w^{(a-1)(b-1)} / sqrt(n) with
/// w = exp(j*2*pi/n), a,b in [1:n]. Orthonormal: idft^H * idft = I.
/// Exponents are reduced mod n before evaluation so the columns stay
/// orthonormal to ~1e-13 even for larger n.
CMat idft_matrix(Index n);

/// Columns first..last of m, 1-based inclusive, order preserved.
CMat submatrix_columns(const CMat& m, Index first, Index last);

/// Count of singular values above tol. With tol < 0 the usual SVD threshold
/// max(rows, cols) * sigma_max * machine_epsilon is used.
Index numerical_rank(const CMat& m, double tol = -1.0);

/// Right inverse m^H (m m^H)^{-1} of a full-row-rank wide matrix, so that
/// m * result = I. Throws SingularMatrixError when rows > cols or the row
/// rank is deficient.
CMat right_pseudoinverse(const CMat& m);

/// Kronecker product a (x) b.
CMat kron(const CMat& a, const CMat& b);

/// Block-diagonal assembly; an empty sequence gives a 0x0 matrix.
CMat block_diag(std::span<const CMat> blocks);

}  // namespace fdbia

#endif  // FDBIA_LINALG_HPP
