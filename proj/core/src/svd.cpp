#include "nnsr/svd.hpp"

#include <Eigen/SVD>
#include <string>

namespace nnsr {

Matrix SvdFactors::reconstruct() const {
  return u * s.asDiagonal() * v.transpose();
}

SvdFactors thin_svd(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw ShapeError("thin_svd: dimensions must be positive");
  }
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericError("thin_svd: backend failed to converge on " +
                       std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()) + " matrix");
  }
  return SvdFactors{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

double spectral_norm(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a);
  if (svd.info() != Eigen::Success) {
    throw NumericError("spectral_norm: backend failed to converge on " +
                       std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()) + " matrix");
  }
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

}  // namespace nnsr
