#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nnsr/matrix.hpp"
#include "nnsr/solver.hpp"

namespace nnsr {

/// Synthetic robust-completion instance: rank-r Gaussian factors, uniform
/// outliers on a fraction alpha of the entries, Bernoulli(gamma) mask.
struct SyntheticSpec {
  Index m = 200;
  Index n = 200;
  int r = 5;           // target rank, <= min(m, n)
  double gamma = 0.8;  // observation ratio in (0, 1]
  double alpha = 0.2;  // outlier fraction in [0, 1]
  double beta = 100;   // outliers are uniform on [-beta/2, beta/2]
  std::uint64_t seed = 0;

  void validate() const;
};

/// M_t = U V^T with U (m x r), V (n x r) i.i.d. standard normal from the
/// seeded stream.
Matrix gen_lowrank(const SyntheticSpec& spec);

/// Each entry observed independently with probability gamma.
ObservationMask gen_mask(const SyntheticSpec& spec);

/// Adds uniform [-beta/2, beta/2] noise to exactly round(alpha*m*n) entries
/// chosen uniformly without replacement; other entries untouched.
/// Corruption happens before masking.
Matrix inject_outliers(const Matrix& m_t, const SyntheticSpec& spec);

/// Relative reconstruction error ||truth - estimate||_F^2 / ||truth||_F^2
/// (squared norms). Throws std::domain_error for a zero truth.
double rre(const Matrix& truth, const Matrix& estimate);

enum class SweepAxis { gamma, alpha, beta, rank, lambda_c };

const char* axis_name(SweepAxis axis);
SweepAxis axis_from_name(const std::string& name);  // throws std::invalid_argument

struct SweepSpec {
  SweepAxis axis = SweepAxis::gamma;
  std::vector<double> values;  // non-empty; report rows are sorted ascending
  int repeats = 10;            // independent runs per cell, >= 1
  SyntheticSpec base;
  SolverConfig solver;

  void validate() const;
};

struct RepeatDetail {
  std::uint64_t seed = 0;
  double rre = 0;
  int iters = 0;
  double seconds = 0;
};

struct SweepRow {
  double value = 0;
  double mean_rre = 0;
  double mean_iters = 0;
  double mean_seconds = 0;  // measured wall time; excluded from reports
                            // unless timing output is requested
  std::vector<RepeatDetail> detail;
};

/// Seed of repeat `repeat` in cell `cell` (cells indexed in ascending value
/// order) for a sweep with base seed `base`.
std::uint64_t sweep_cell_seed(std::uint64_t base, std::size_t cell,
                              std::size_t repeat);

/// Runs `repeats` independent instances per axis value (seed derived from
/// base.seed and the cell/repeat indices) and averages RRE, iteration count
/// and wall time. Cells and repeats execute on a worker pool of `threads`
/// (0 = hardware concurrency); results are aggregated in index order, so the
/// report is independent of scheduling. For the lambda_c axis the cell value
/// c sets lambda = c/sqrt(max(m,n)) and sigma = sqrt(2)*lambda.
std::vector<SweepRow> run_sweep(const SweepSpec& sweep, int threads = 0);

/// Report CSV, header axis,value,mean_rre,mean_iters,mean_seconds.
/// Wall time is nondeterministic, so the mean_seconds field is left empty
/// unless include_timing is set; everything else is byte-reproducible for
/// identical sweep specs.
void write_report_csv(const std::vector<SweepRow>& rows, SweepAxis axis,
                      std::ostream& out, bool include_timing = false);

/// JSON variant with per-repeat detail (seed, rre, iters and, when
/// include_timing is set, seconds).
void write_report_json(const std::vector<SweepRow>& rows, SweepAxis axis,
                       std::ostream& out, bool include_timing = false);

}  // namespace nnsr
