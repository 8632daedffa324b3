#include "nnsr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "nnsr/prox.hpp"
#include "nnsr/svd.hpp"
#include "nnsr/svt.hpp"

namespace nnsr {

namespace {

struct StepOutcome {
  SolveState state;
  Eigen::VectorXd m_values;  // singular values of the new M
};

struct UpdateParams {
  double m_threshold, m_kernel;  // singular-value shrinkage
  double s_threshold, s_kernel;  // elementwise shrinkage on Omega
};

UpdateParams update_params(const SolverConfig& cfg, double rho) {
  UpdateParams p;
  p.m_threshold = 1.0 / rho;
  p.s_threshold = cfg.lambda / rho;
  if (cfg.cap_kernel) {
    p.m_kernel = std::min(cfg.sigma, std::numbers::sqrt2 * p.m_threshold);
    p.s_kernel = std::min(cfg.sigma, std::numbers::sqrt2 * p.s_threshold);
  } else {
    p.m_kernel = cfg.sigma;
    p.s_kernel = cfg.sigma;
  }
  return p;
}

void check_shapes(const Matrix& x, const ObservationMask& mask,
                  const SolveState* state) {
  if (x.rows() != mask.rows() || x.cols() != mask.cols()) {
    throw ShapeError("solver: data and mask shapes disagree");
  }
  if (state) {
    if (state->m.rows() != x.rows() || state->m.cols() != x.cols() ||
        state->s.rows() != x.rows() || state->s.cols() != x.cols() ||
        state->lagrange.rows() != x.rows() ||
        state->lagrange.cols() != x.cols()) {
      throw ShapeError("solver: state shape disagrees with data");
    }
  }
}

StepOutcome step_impl(const SolveState& state, const Matrix& x,
                      const ObservationMask& mask, const SolverConfig& cfg) {
  const double rho = state.rho;
  const int k = state.iter;

  const UpdateParams up = update_params(cfg, rho);

  const Matrix arg = x - state.s + state.lagrange / rho;
  if (!arg.allFinite()) {
    throw DivergenceError(
        "solver: non-finite iterate at iteration " + std::to_string(k + 1),
        k + 1);
  }
  ShrunkSvd m_shrunk;
  try {
    m_shrunk = sv_shrink_full(
        arg, ShrinkSpec{up.m_threshold, up.m_kernel, ShrinkKind::how});
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " (solver iteration " +
                       std::to_string(k + 1) + ")");
  }
  Matrix m_new = std::move(m_shrunk.matrix);

  Matrix s_new(x.rows(), x.cols());
  Matrix lagrange_new(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      const double lag_over_rho = state.lagrange(i, j) / rho;
      if (mask.observed(i, j)) {
        const double t = x(i, j) - m_new(i, j) + lag_over_rho;
        s_new(i, j) = prox_how(t, up.s_threshold, up.s_kernel);
        lagrange_new(i, j) =
            state.lagrange(i, j) + rho * (x(i, j) - m_new(i, j) - s_new(i, j));
      } else {
        // the unconstrained complement zeroes its residual exactly
        s_new(i, j) = lag_over_rho - m_new(i, j);
        lagrange_new(i, j) = 0.0;
      }
    }
  }

  if (!m_new.allFinite() || !s_new.allFinite() || !lagrange_new.allFinite()) {
    throw DivergenceError(
        "solver: non-finite iterate at iteration " + std::to_string(k + 1),
        k + 1);
  }

  StepOutcome out;
  out.state = SolveState{std::move(m_new), std::move(s_new),
                         std::move(lagrange_new), cfg.mu * rho, k + 1};
  out.m_values = std::move(m_shrunk.values);
  return out;
}

int rank_estimate(const Eigen::VectorXd& values) {
  if (values.size() == 0) return 0;
  const double cutoff = 1e-8 * values(0);
  int rank = 0;
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) > cutoff && values(i) > 0.0) ++rank;
  }
  return rank;
}

}  // namespace

SolverConfig SolverConfig::defaults_for(Index rows, Index cols,
                                        double lambda_c) {
  SolverConfig cfg;
  cfg.lambda = lambda_c / std::sqrt(static_cast<double>(std::max(rows, cols)));
  cfg.sigma = std::numbers::sqrt2 * cfg.lambda;
  return cfg;
}

void SolverConfig::validate() const {
  if (!(lambda > 0)) throw std::invalid_argument("SolverConfig: lambda must be > 0");
  if (!(sigma > 0)) throw std::invalid_argument("SolverConfig: sigma must be > 0");
  if (rho0 && !(*rho0 > 0)) throw std::invalid_argument("SolverConfig: rho0 must be > 0");
  if (!(mu > 1)) throw std::invalid_argument("SolverConfig: mu must be > 1");
  if (!(tol > 0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  if (!(eps_guard > 0)) throw std::invalid_argument("SolverConfig: eps_guard must be > 0");
}

SolveState step(const SolveState& state, const Matrix& x,
                const ObservationMask& mask, const SolverConfig& cfg) {
  cfg.validate();
  check_shapes(x, mask, &state);
  if (!(state.rho > 0)) {
    throw std::invalid_argument("step: state.rho must be > 0");
  }
  return step_impl(state, x, mask, cfg).state;
}

SolveResult nnsr_solve(const Matrix& x_in, const ObservationMask& mask,
                       const SolverConfig& cfg) {
  cfg.validate();
  check_shapes(x_in, mask, nullptr);
  require_finite(x_in, "nnsr_solve: input");
  const Matrix x = project_mask(x_in, mask);
  const double x_fro = fro_norm(x);

  double rho0;
  if (cfg.rho0) {
    rho0 = *cfg.rho0;
  } else {
    // Conservative spectral scaling: the first singular-value threshold
    // 1/rho0 starts at 8x the data's spectral norm, so the low-rank iterate
    // stays empty while the multiplier warms up. Starting at 0.8x (the
    // usual inexact-ALM 1.25/s_max) commits to the leading directions of
    // the corrupted data immediately and gets stuck there once rho grows.
    const double smax = spectral_norm(x);
    rho0 = smax > cfg.eps_guard ? 0.125 / smax : 1.0;
  }

  SolveState st{Matrix::Zero(x.rows(), x.cols()),
                Matrix::Zero(x.rows(), x.cols()),
                Matrix::Zero(x.rows(), x.cols()), rho0, 0};
  Matrix prev_m = st.m;
  Matrix prev_s = st.s;

  SolveResult result;
  result.trace.reserve(static_cast<std::size_t>(std::min(cfg.max_iter, 4096)));
  while (true) {
    const double rho_used = st.rho;
    StepOutcome out = step_impl(st, x, mask, cfg);
    st = std::move(out.state);

    TraceRecord rec;
    rec.iter = st.iter;
    rec.rho = rho_used;
    rec.rel_e =
        fro_norm(x - st.m - st.s) / std::max(x_fro, cfg.eps_guard);
    rec.re_x = rec.rel_e;
    rec.m_delta_fro = fro_norm(st.m - prev_m);
    rec.s_delta_fro = fro_norm(st.s - prev_s);
    rec.re_m = rec.m_delta_fro / std::max(fro_norm(prev_m), cfg.eps_guard);
    rec.lagrange_fro = fro_norm(st.lagrange);
    rec.rank_est = rank_estimate(out.m_values);
    result.trace.push_back(rec);

    prev_m = st.m;
    prev_s = st.s;
    if (rec.rel_e <= cfg.tol) {
      result.converged = true;
      break;
    }
    if (st.iter >= cfg.max_iter) break;
  }

  result.m = std::move(st.m);
  result.s = std::move(st.s);
  result.completed = result.m;
  return result;
}

KktResiduals kkt_residuals(const SolveState& state, const Matrix& x,
                           const ObservationMask& mask,
                           const SolverConfig& cfg) {
  cfg.validate();
  check_shapes(x, mask, &state);
  KktResiduals r;
  r.feasibility = fro_norm(x - state.m - state.s);
  const UpdateParams up = update_params(cfg, state.rho);
  const Matrix m_ref = sv_shrink(
      x - state.s + state.lagrange / state.rho,
      ShrinkSpec{up.m_threshold, up.m_kernel, ShrinkKind::how});
  r.m_fixedpoint = fro_norm(state.m - m_ref);
  double acc = 0.0;
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      if (!mask.observed(i, j)) continue;
      const double t =
          x(i, j) - state.m(i, j) + state.lagrange(i, j) / state.rho;
      const double d =
          state.s(i, j) - prox_how(t, up.s_threshold, up.s_kernel);
      acc += d * d;
    }
  }
  r.s_fixedpoint = std::sqrt(acc);
  return r;
}

void write_trace_csv(const std::vector<TraceRecord>& trace,
                     std::ostream& out) {
  out << "iter,rho,rel_e,re_m,re_x,lagrange_fro,rank_est\n";
  char buf[192];
  for (const TraceRecord& r : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.iter, r.rho, r.rel_e, r.re_m, r.re_x, r.lagrange_fro,
                  r.rank_est);
    out << buf;
  }
}

}  // namespace nnsr
