#pragma once

namespace nnsr {

/// Parameters of the hybrid ordinary-Welsch (HOW) loss: quadratic inside
/// [-lambda, lambda], a shifted Welsch bump with kernel size sigma outside.
struct HowParams {
  double lambda = 1.0;  // dead-zone half-width, >= 0
  double sigma = 1.0;   // Welsch kernel size, > 0

  /// True when sigma <= sqrt(2)*lambda, the regime in which the implicit
  /// regularizer is concave on y > 0 (and hence quasiconvex).
  bool quasiconvex_regime() const;
};

/// HOW loss:
///   x^2/2                                             for |x| <= lambda
///   (sigma^2/2)(1 - e^{(lambda^2 - x^2)/sigma^2}) + lambda^2/2  otherwise.
/// Even, continuous, bounded above by sigma^2/2 + lambda^2/2.
double how_loss(double x, const HowParams& p);

/// Welsch loss (sigma^2/2)(1 - e^{-x^2/sigma^2}); the lambda = 0 case of
/// how_loss.
double welsch_loss(double x, double sigma);

/// Convex gap x^2/2 - how_loss(x, p). Zero on [-lambda, lambda], even,
/// non-decreasing in |x|. Its derivative is prox_how.
double f_gap(double x, const HowParams& p);

/// Closed-form proximity operator of the HOW implicit regularizer:
///   max{0, |x| - |x| e^{(t^2 - x^2)/sigma^2}} sign(x),  t = threshold.
/// Odd, monotone non-decreasing, exactly zero on [-t, t]. The exponent is
/// evaluated unclamped; for |x| >> sigma the shrink factor underflows to 0
/// and the operator approaches the identity.
double prox_how(double x, double threshold, double sigma);

/// Soft thresholding max{0, |x| - threshold} sign(x).
double prox_l1(double x, double threshold);

/// Welsch proximity operator x - x e^{-x^2/sigma^2}; zero iff x = 0
/// (no dead zone, hence no sparsity).
double prox_welsch(double x, double sigma);

/// Numeric reconstruction of the HOW implicit regularizer phi, which has no
/// closed form. For y != 0, inverts prox_how by bisection on
/// [lambda, lambda + |y| + 10 sigma] (tolerance 1e-12 on x, at most 200
/// iterations) to find x* with prox_how(x*) = |y|, then returns
///   (how_loss(x*) - (|y| - x*)^2 / 2) / lambda.
/// phi(0) = 0 and phi is even. Requires p.lambda > 0; throws
/// std::invalid_argument otherwise and NumericError if the bracket fails.
double phi_numeric(double y, const HowParams& p);

}  // namespace nnsr
