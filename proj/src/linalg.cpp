// SPDX-License-Identifier: Apache-2.0

#include "fdbia/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fdbia/errors.hpp"

namespace fdbia {

bool all_finite(const CMat& m) {
  return m.array().isFinite().all();
}

CMat idft_matrix(Index n) {
  if (n < 1) {
    throw InvalidDimensionError("idft_matrix: size must be >= 1, got " +
                                std::to_string(n));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  CMat out(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      // w^{a*b} with the exponent reduced mod n keeps the polar angle small.
      const Index e = (a * b) % n;
      const double angle = 2.0 * M_PI * static_cast<double>(e) / static_cast<double>(n);
      out(a, b) = std::polar(scale, angle);
    }
  }
  return out;
}

CMat submatrix_columns(const CMat& m, Index first, Index last) {
  if (first < 1 || last > m.cols() || first > last) {
    throw InvalidRangeError("submatrix_columns: range [" + std::to_string(first) +
                            ":" + std::to_string(last) + "] invalid for " +
                            std::to_string(m.cols()) + " columns");
  }
  return m.middleCols(first - 1, last - first + 1);
}

Index numerical_rank(const CMat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (!all_finite(m)) {
    throw NumericalError("numerical_rank: non-finite entries");
  }
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& sigma = svd.singularValues();
  if (tol < 0.0) {
    tol = static_cast<double>(std::max(m.rows(), m.cols())) * sigma(0) *
          std::numeric_limits<double>::epsilon();
  }
  Index rank = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol) ++rank;
  }
  return rank;
}

CMat right_pseudoinverse(const CMat& m) {
  if (m.rows() > m.cols()) {
    throw SingularMatrixError("right_pseudoinverse: need rows <= cols, got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (numerical_rank(m) != m.rows()) {
    throw SingularMatrixError("right_pseudoinverse: row-rank-deficient input");
  }
  // Gram solve of (m m^H) X = m, then result = X^H. The rank check above
  // keeps this away from the singular set.
  CMat gram = m * m.adjoint();
  CMat x = gram.colPivHouseholderQr().solve(m);
  return x.adjoint();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat block_diag(std::span<const CMat> blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const CMat& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMat out = CMat::Zero(rows, cols);
  Index r = 0;
  Index c = 0;
  for (const CMat& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace fdbia
