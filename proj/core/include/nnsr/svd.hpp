#pragma once

#include <Eigen/Core>

#include "nnsr/matrix.hpp"

namespace nnsr {

/// Thin SVD factors a = u * diag(s) * v^T with r = min(rows, cols).
///
/// s is non-negative and sorted non-increasing; u and v have orthonormal
/// columns. Ties between equal singular values keep whatever pairing the
/// backend produced; only s and the product u diag(.) v^T are contractual.
struct SvdFactors {
  Matrix u;           // m x r
  Eigen::VectorXd s;  // r, non-increasing, >= 0
  Matrix v;           // n x r

  /// u * diag(s) * v^T.
  Matrix reconstruct() const;
};

/// Thin SVD of a dense matrix. Throws NumericError (with the matrix shape
/// in the message) if the backend fails to converge.
SvdFactors thin_svd(const Matrix& a);

/// Largest singular value; 0 for an all-zero matrix.
double spectral_norm(const Matrix& a);

}  // namespace nnsr
