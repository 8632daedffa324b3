#include "nnsr/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nnsr/error.hpp"

namespace nnsr {

namespace {

void check_params(double lambda, double sigma, const char* who) {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument(std::string(who) + ": lambda must be >= 0");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": sigma must be > 0");
  }
}

}  // namespace

bool HowParams::quasiconvex_regime() const {
  return sigma <= std::numbers::sqrt2 * lambda;
}

double how_loss(double x, const HowParams& p) {
  check_params(p.lambda, p.sigma, "how_loss");
  const double ax = std::abs(x);
  if (ax <= p.lambda) return 0.5 * x * x;
  const double s2 = p.sigma * p.sigma;
  const double e = std::exp((p.lambda * p.lambda - x * x) / s2);
  return 0.5 * s2 * (1.0 - e) + 0.5 * p.lambda * p.lambda;
}

double welsch_loss(double x, double sigma) {
  return how_loss(x, HowParams{0.0, sigma});
}

double f_gap(double x, const HowParams& p) {
  check_params(p.lambda, p.sigma, "f_gap");
  const double ax = std::abs(x);
  if (ax <= p.lambda) return 0.0;
  // mathematically >= 0; clamp round-off at the knot
  return std::max(0.0, 0.5 * x * x - how_loss(x, p));
}

double prox_how(double x, double threshold, double sigma) {
  check_params(threshold, sigma, "prox_how");
  const double ax = std::abs(x);
  if (ax <= threshold) return 0.0;
  const double e =
      std::exp((threshold * threshold - x * x) / (sigma * sigma));
  const double mag = ax - ax * e;  // >= 0 here since e <= 1 for |x| > t
  return x < 0 ? -mag : mag;
}

double prox_l1(double x, double threshold) {
  if (!(threshold >= 0.0)) {
    throw std::invalid_argument("prox_l1: threshold must be >= 0");
  }
  const double mag = std::abs(x) - threshold;
  if (mag <= 0.0) return 0.0;
  return x < 0 ? -mag : mag;
}

double prox_welsch(double x, double sigma) {
  return prox_how(x, 0.0, sigma);
}

double phi_numeric(double y, const HowParams& p) {
  check_params(p.lambda, p.sigma, "phi_numeric");
  if (p.lambda == 0.0) {
    throw std::invalid_argument("phi_numeric: requires lambda > 0");
  }
  const double ay = std::abs(y);  // phi is even
  if (ay == 0.0) return 0.0;

  // prox_how is continuous and strictly increasing on (lambda, inf), so the
  // preimage of ay is bracketed once the upper end maps above it.
  double lo = p.lambda;
  double hi = p.lambda + ay + 10.0 * p.sigma;
  if (prox_how(hi, p.lambda, p.sigma) < ay) {
    throw NumericError("phi_numeric: bisection bracket does not cover y=" +
                       std::to_string(y));
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (prox_how(mid, p.lambda, p.sigma) < ay) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x_star = 0.5 * (lo + hi);
  const double gap = ay - x_star;
  return (how_loss(x_star, p) - 0.5 * gap * gap) / p.lambda;
}

}  // namespace nnsr
