#pragma once

#include <Eigen/Core>

#include "nnsr/matrix.hpp"
#include "nnsr/prox.hpp"

namespace nnsr {

/// Scalar shrinkage applied to singular values.
enum class ShrinkKind {
  how,     // prox of the HOW implicit regularizer
  l1,      // soft thresholding (classical SVT / nuclear-norm prox)
  welsch,  // Welsch prox; threshold is ignored (lambda = 0)
};

struct ShrinkSpec {
  double threshold = 0.0;  // the 1/rho or lambda/rho scale, >= 0
  double sigma = 1.0;      // > 0 (unused by l1)
  ShrinkKind kind = ShrinkKind::how;
};

/// The scalar operator of `spec` evaluated at s >= 0.
double shrink_value(double s, const ShrinkSpec& spec);

/// sv_shrink result together with the shrunk singular values (the singular
/// values of `matrix`, still non-increasing).
struct ShrunkSvd {
  Matrix matrix;
  Eigen::VectorXd values;
};

/// Generalized singular value thresholding: u diag(P(s)) v^T where
/// (u, s, v) = thin_svd(a) and P is the monotone scalar operator of `spec`.
/// Monotonicity of P keeps the shrunk values non-increasing; a numerical
/// violation of that ordering raises NumericError instead of re-sorting.
Matrix sv_shrink(const Matrix& a, const ShrinkSpec& spec);
ShrunkSvd sv_shrink_full(const Matrix& a, const ShrinkSpec& spec);

/// Matrix phi-norm: sum of phi_numeric over the singular values of a.
/// Diagnostic only (phi has no closed form, each term costs a bisection).
/// Requires p.lambda > 0.
double matrix_phi_norm(const Matrix& a, const HowParams& p);

}  // namespace nnsr
