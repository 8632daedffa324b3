#include "nnsr/svt.hpp"

#include <stdexcept>
#include <string>

#include "nnsr/svd.hpp"

namespace nnsr {

double shrink_value(double s, const ShrinkSpec& spec) {
  switch (spec.kind) {
    case ShrinkKind::how:
      return prox_how(s, spec.threshold, spec.sigma);
    case ShrinkKind::l1:
      return prox_l1(s, spec.threshold);
    case ShrinkKind::welsch:
      return prox_welsch(s, spec.sigma);
  }
  throw std::invalid_argument("shrink_value: unknown kind");
}

ShrunkSvd sv_shrink_full(const Matrix& a, const ShrinkSpec& spec) {
  SvdFactors f = thin_svd(a);
  const Index r = f.s.size();
  Eigen::VectorXd shrunk(r);
  for (Index i = 0; i < r; ++i) shrunk(i) = shrink_value(f.s(i), spec);

  // Monotone P on a non-increasing s keeps the order; a violation means a
  // backend defect and is surfaced, not silently re-sorted.
  for (Index i = 0; i + 1 < r; ++i) {
    if (shrunk(i + 1) > shrunk(i) + 1e-12 * (1.0 + shrunk(i))) {
      throw NumericError("sv_shrink: shrunk singular values out of order at " +
                         std::to_string(i));
    }
  }

  Index rank = 0;
  while (rank < r && shrunk(rank) > 0.0) ++rank;
  ShrunkSvd out;
  out.values = shrunk;
  if (rank == 0) {
    out.matrix = Matrix::Zero(a.rows(), a.cols());
  } else {
    out.matrix = f.u.leftCols(rank) * shrunk.head(rank).asDiagonal() *
                 f.v.leftCols(rank).transpose();
  }
  return out;
}

Matrix sv_shrink(const Matrix& a, const ShrinkSpec& spec) {
  return sv_shrink_full(a, spec).matrix;
}

double matrix_phi_norm(const Matrix& a, const HowParams& p) {
  SvdFactors f = thin_svd(a);
  double total = 0.0;
  for (Index i = 0; i < f.s.size(); ++i) total += phi_numeric(f.s(i), p);
  return total;
}

}  // namespace nnsr
