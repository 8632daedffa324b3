#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "nnsr/matrix.hpp"

namespace nnsr {

/// Scalars of the NNSR ADMM solver.
struct SolverConfig {
  double lambda = 0.1;   // outlier weight, > 0
  double sigma = 0.1;    // HOW kernel size, > 0 (suggested: sqrt(2)*lambda)
  std::optional<double> rho0;  // initial penalty; when unset it is derived
                               // from the data as 0.125 / s_max(X_Omega)
  double mu = 1.05;      // penalty growth factor, > 1
  double tol = 1e-7;     // stopping tolerance xi on rel_E
  int max_iter = 1000;   // iteration cap I_m, >= 1
  double eps_guard = 1e-12;  // division guard for relative errors

  // Cap each update's kernel at sqrt(2) times its current threshold, so
  // every prox stays in the quasiconvex regime as rho grows. This keeps the
  // per-entry shrinkage bias below the threshold, which is what bounds the
  // multipliers and makes the feasibility residual vanish geometrically;
  // with a truly fixed kernel the residual stalls near the kernel scale and
  // the multipliers grow without bound once rho exceeds sqrt(2)*lambda/sigma.
  bool cap_kernel = true;

  /// Paper-suggested defaults for an m-by-n problem:
  /// lambda = c / sqrt(max(m, n)), sigma = sqrt(2) * lambda, mu = 1.05,
  /// tol = 1e-7, max_iter = 1000, rho0 data-derived.
  static SolverConfig defaults_for(Index rows, Index cols, double lambda_c = 1.0);

  void validate() const;  // throws std::invalid_argument
};

/// Per-iteration state (M^k, S^k, Lambda^k, rho^k, k).
struct SolveState {
  Matrix m;        // low-rank iterate
  Matrix s;        // sparse iterate
  Matrix lagrange; // multiplier Lambda
  double rho = 0;  // current penalty
  int iter = 0;    // completed iterations
};

/// One trace row per completed iteration. The CSV export writes the columns
/// iter,rho,rel_e,re_m,re_x,lagrange_fro,rank_est; the absolute successive
/// differences are kept in memory for diagnostics.
struct TraceRecord {
  int iter = 0;
  double rho = 0;
  double rel_e = 0;         // ||X - M^k - S^k||_F / max(||X||_F, eps_guard)
  double re_m = 0;          // ||M^k - M^{k-1}||_F / max(||M^{k-1}||_F, eps_guard)
  double re_x = 0;          // same quantity as rel_e
  double lagrange_fro = 0;  // ||Lambda^k||_F
  int rank_est = 0;         // singular values of M^k above 1e-8 * s_max
  double m_delta_fro = 0;   // ||M^k - M^{k-1}||_F
  double s_delta_fro = 0;   // ||S^k - S^{k-1}||_F
};

struct SolveResult {
  Matrix m;          // final low-rank estimate
  Matrix s;          // final sparse estimate
  Matrix completed;  // completion read off M everywhere (missing entries
                     // included), since S absorbs the unobserved complement
  std::vector<TraceRecord> trace;
  bool converged = false;  // rel_e <= tol (as opposed to hitting max_iter)
};

/// Primal feasibility and prox fixed-point residuals certifying the
/// stationarity conditions at a state.
struct KktResiduals {
  double feasibility = 0;   // ||X - M - S||_F
  double m_fixedpoint = 0;  // ||M - sv_shrink(X - S + Lambda/rho, 1/rho)||_F
  double s_fixedpoint = 0;  // prox fixed-point residual of S on Omega
};

/// One ADMM iteration:
///   M <- sv_shrink(X - S + Lambda/rho) with threshold 1/rho (HOW kind),
///   S  on Omega   <- elementwise prox_how of X - M + Lambda/rho,
///                    threshold lambda/rho,
///      on Omega^c <- Lambda/rho - M,
///   Lambda <- Lambda + rho (X - M - S)   (identically zero on Omega^c),
///   rho <- mu * rho.
/// Requires x to vanish on Omega^c.
SolveState step(const SolveState& state, const Matrix& x,
                const ObservationMask& mask, const SolverConfig& cfg);

/// Runs the ADMM from S = Lambda = 0 until rel_E <= tol or max_iter
/// iterations, recording one trace row per iteration. The input is
/// projected onto the mask first. Deterministic for identical inputs.
/// Throws NumericError (with the iteration index) on backend failure and
/// DivergenceError if an iterate turns non-finite.
SolveResult nnsr_solve(const Matrix& x, const ObservationMask& mask,
                       const SolverConfig& cfg);

KktResiduals kkt_residuals(const SolveState& state, const Matrix& x,
                           const ObservationMask& mask,
                           const SolverConfig& cfg);

/// Trace CSV: header iter,rho,rel_e,re_m,re_x,lagrange_fro,rank_est and one
/// row per iteration.
void write_trace_csv(const std::vector<TraceRecord>& trace, std::ostream& out);

}  // namespace nnsr
