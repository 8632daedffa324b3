#include "nnsr/synth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "nnsr/rng.hpp"

namespace nnsr {

namespace {

// per-purpose substream tags
constexpr std::uint64_t kTagLowrank = 0x10;
constexpr std::uint64_t kTagMask = 0x20;
constexpr std::uint64_t kTagOutliers = 0x30;

}  // namespace

std::uint64_t sweep_cell_seed(std::uint64_t base, std::size_t cell,
                              std::size_t repeat) {
  return Rng::derive(base, 0x100 + cell * 0x10000 + repeat);
}

void SyntheticSpec::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("SyntheticSpec: dimensions must be positive");
  if (r < 0 || r > std::min(m, n)) throw std::invalid_argument("SyntheticSpec: rank out of range");
  if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("SyntheticSpec: gamma must be in (0,1]");
  if (!(alpha >= 0 && alpha <= 1)) throw std::invalid_argument("SyntheticSpec: alpha must be in [0,1]");
  if (!(beta >= 0)) throw std::invalid_argument("SyntheticSpec: beta must be >= 0");
}

Matrix gen_lowrank(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(Rng::derive(spec.seed, kTagLowrank));
  Matrix u(spec.m, spec.r);
  Matrix v(spec.n, spec.r);
  for (Index i = 0; i < u.rows(); ++i)
    for (Index j = 0; j < u.cols(); ++j) u(i, j) = rng.normal();
  for (Index i = 0; i < v.rows(); ++i)
    for (Index j = 0; j < v.cols(); ++j) v(i, j) = rng.normal();
  return u * v.transpose();
}

ObservationMask gen_mask(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(Rng::derive(spec.seed, kTagMask));
  ObservationMask::Flags flags(spec.m, spec.n);
  for (Index i = 0; i < spec.m; ++i)
    for (Index j = 0; j < spec.n; ++j)
      flags(i, j) = rng.uniform01() < spec.gamma;
  return ObservationMask(std::move(flags));
}

Matrix inject_outliers(const Matrix& m_t, const SyntheticSpec& spec) {
  spec.validate();
  if (m_t.rows() != spec.m || m_t.cols() != spec.n) {
    throw ShapeError("inject_outliers: matrix does not match spec dimensions");
  }
  const std::uint64_t total = static_cast<std::uint64_t>(spec.m) *
                              static_cast<std::uint64_t>(spec.n);
  const std::uint64_t count = static_cast<std::uint64_t>(
      std::llround(spec.alpha * static_cast<double>(total)));
  Matrix out = m_t;
  if (count == 0) return out;

  Rng rng(Rng::derive(spec.seed, kTagOutliers));
  // partial Fisher-Yates: first `count` elements are a uniform sample
  // without replacement
  std::vector<std::uint64_t> idx(total);
  for (std::uint64_t i = 0; i < total; ++i) idx[i] = i;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t j = i + rng.below(total - i);
    std::swap(idx[i], idx[j]);
  }
  const double half = 0.5 * spec.beta;
  for (std::uint64_t k = 0; k < count; ++k) {
    const Index i = static_cast<Index>(idx[k] / spec.n);
    const Index j = static_cast<Index>(idx[k] % spec.n);
    out(i, j) += rng.uniform(-half, half);
  }
  return out;
}

double rre(const Matrix& truth, const Matrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw ShapeError("rre: shape mismatch");
  }
  const double denom = truth.squaredNorm();
  if (denom == 0.0) {
    throw std::domain_error("rre: undefined for a zero reference matrix");
  }
  return (truth - estimate).squaredNorm() / denom;
}

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::beta: return "beta";
    case SweepAxis::rank: return "rank";
    case SweepAxis::lambda_c: return "lambda_c";
  }
  return "?";
}

SweepAxis axis_from_name(const std::string& name) {
  if (name == "gamma") return SweepAxis::gamma;
  if (name == "alpha") return SweepAxis::alpha;
  if (name == "beta") return SweepAxis::beta;
  if (name == "rank") return SweepAxis::rank;
  if (name == "lambda_c") return SweepAxis::lambda_c;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

void SweepSpec::validate() const {
  base.validate();
  solver.validate();
  if (repeats < 1) throw std::invalid_argument("SweepSpec: repeats must be >= 1");
}

namespace {

struct Cell {
  SyntheticSpec spec;
  SolverConfig solver;
};

Cell make_cell(const SweepSpec& sweep, double value) {
  Cell cell{sweep.base, sweep.solver};
  switch (sweep.axis) {
    case SweepAxis::gamma: cell.spec.gamma = value; break;
    case SweepAxis::alpha: cell.spec.alpha = value; break;
    case SweepAxis::beta: cell.spec.beta = value; break;
    case SweepAxis::rank: cell.spec.r = static_cast<int>(std::llround(value)); break;
    case SweepAxis::lambda_c: {
      const double root =
          std::sqrt(static_cast<double>(std::max(cell.spec.m, cell.spec.n)));
      cell.solver.lambda = value / root;
      cell.solver.sigma = std::numbers::sqrt2 * cell.solver.lambda;
      break;
    }
  }
  cell.spec.validate();
  cell.solver.validate();
  return cell;
}

RepeatDetail run_repeat(const Cell& cell, std::uint64_t seed) {
  SyntheticSpec spec = cell.spec;
  spec.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  const Matrix truth = gen_lowrank(spec);
  const Matrix corrupted = inject_outliers(truth, spec);
  const ObservationMask mask = gen_mask(spec);
  const SolveResult res = nnsr_solve(corrupted, mask, cell.solver);
  const auto t1 = std::chrono::steady_clock::now();
  RepeatDetail d;
  d.seed = seed;
  d.rre = rre(truth, res.m);
  d.iters = static_cast<int>(res.trace.size());
  d.seconds = std::chrono::duration<double>(t1 - t0).count();
  return d;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& sweep, int threads) {
  sweep.validate();
  std::vector<double> values = sweep.values;
  std::sort(values.begin(), values.end());

  struct Task {
    std::size_t cell;
    std::size_t repeat;
  };
  std::vector<Task> tasks;
  std::vector<Cell> cells;
  cells.reserve(values.size());
  for (std::size_t c = 0; c < values.size(); ++c) {
    cells.push_back(make_cell(sweep, values[c]));
    for (std::size_t r = 0; r < static_cast<std::size_t>(sweep.repeats); ++r) {
      tasks.push_back({c, r});
    }
  }

  std::vector<RepeatDetail> details(tasks.size());
  unsigned want = threads > 0 ? static_cast<unsigned>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  want = std::min<unsigned>(want, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        const Task& task = tasks[t];
        details[t] = run_repeat(
            cells[task.cell],
            sweep_cell_seed(sweep.base.seed, task.cell, task.repeat));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (want <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (unsigned i = 0; i < want; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows(values.size());
  for (std::size_t c = 0; c < values.size(); ++c) {
    SweepRow& row = rows[c];
    row.value = values[c];
    for (std::size_t r = 0; r < static_cast<std::size_t>(sweep.repeats); ++r) {
      const RepeatDetail& d = details[c * sweep.repeats + r];
      row.detail.push_back(d);
      row.mean_rre += d.rre;
      row.mean_iters += d.iters;
      row.mean_seconds += d.seconds;
    }
    const double n = static_cast<double>(sweep.repeats);
    row.mean_rre /= n;
    row.mean_iters /= n;
    row.mean_seconds /= n;
  }
  return rows;
}

void write_report_csv(const std::vector<SweepRow>& rows, SweepAxis axis,
                      std::ostream& out, bool include_timing) {
  out << "axis,value,mean_rre,mean_iters,mean_seconds\n";
  char buf[160];
  for (const SweepRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,", axis_name(axis),
                  row.value, row.mean_rre, row.mean_iters);
    out << buf;
    if (include_timing) {
      std::snprintf(buf, sizeof(buf), "%.6f", row.mean_seconds);
      out << buf;
    }
    out << '\n';
  }
}

void write_report_json(const std::vector<SweepRow>& rows, SweepAxis axis,
                       std::ostream& out, bool include_timing) {
  char buf[96];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "{\n  \"axis\": \"" << axis_name(axis) << "\",\n  \"rows\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    out << "    {\"value\": " << num(row.value)
        << ", \"mean_rre\": " << num(row.mean_rre)
        << ", \"mean_iters\": " << num(row.mean_iters);
    if (include_timing) out << ", \"mean_seconds\": " << num(row.mean_seconds);
    out << ", \"repeats\": [\n";
    for (std::size_t r = 0; r < row.detail.size(); ++r) {
      const RepeatDetail& d = row.detail[r];
      out << "      {\"seed\": " << d.seed << ", \"rre\": " << num(d.rre)
          << ", \"iters\": " << d.iters;
      if (include_timing) out << ", \"seconds\": " << num(d.seconds);
      out << (r + 1 < row.detail.size() ? "},\n" : "}\n");
    }
    out << (i + 1 < rows.size() ? "    ]},\n" : "    ]}\n");
  }
  out << "  ]\n}\n";
}

}  // namespace nnsr
