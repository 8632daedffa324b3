// Command-line front end: solver runs, experiment protocols and curve
// exports as CSV/JSON/PGM artifacts. Every command writes a manifest with
// the resolved configuration next to its outputs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nnsr/image.hpp"
#include "nnsr/matrix.hpp"
#include "nnsr/prox.hpp"
#include "nnsr/rng.hpp"
#include "nnsr/solver.hpp"
#include "nnsr/svt.hpp"
#include "nnsr/synth.hpp"
#include "nnsr/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nnsr;

namespace {

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON-safe number: infinities serialize as the string "inf"
json metric_number(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

struct Manifest {
  std::string command;
  json config = json::object();
  std::uint64_t seed = 0;
  std::string started_at;
  std::vector<std::string> outputs;

  void write(const fs::path& path) const {
    json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["seed"] = seed;
    doc["tool_version"] = kVersion;
    doc["started_at"] = started_at;
    doc["finished_at"] = iso8601_now();
    doc["outputs"] = outputs;
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write manifest " + path.string());
    out << doc.dump(2) << "\n";
  }
};

int worker_threads() {
  if (const char* env = std::getenv("NNSR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // library default: hardware concurrency
}

json solver_config_json(const SolverConfig& cfg) {
  json j;
  j["lambda"] = cfg.lambda;
  j["sigma"] = cfg.sigma;
  if (cfg.rho0) j["rho0"] = *cfg.rho0;
  else j["rho0"] = "auto (0.125 / s_max)";
  j["mu"] = cfg.mu;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["cap_kernel"] = cfg.cap_kernel;
  return j;
}

// shared optional solver flags
struct SolverFlags {
  double lambda_c = 1.0;
  double mu = 1.05;
  double tol = 1e-7;
  int max_iter = 1000;
  std::optional<double> rho0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda-c", lambda_c,
                    "outlier weight scale c in lambda = c/sqrt(max(m,n))")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mu", mu, "penalty growth factor (> 1)");
    cmd->add_option("--tol", tol, "stopping tolerance on rel_E")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", max_iter, "iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rho0", rho0,
                    "initial penalty (default: derived from the data)");
  }

  SolverConfig resolve(Index rows, Index cols) const {
    SolverConfig cfg = SolverConfig::defaults_for(rows, cols, lambda_c);
    cfg.mu = mu;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.rho0 = rho0;
    cfg.validate();
    return cfg;
  }
};

// ---------------------------------------------------------------- prox-curve

int cmd_prox_curve(double lambda, double sigma, double xmin, double xmax,
                   double step, const fs::path& out) {
  Manifest manifest;
  manifest.command = "prox-curve";
  manifest.started_at = iso8601_now();
  manifest.config = {{"lambda", lambda}, {"sigma", sigma}, {"xmin", xmin},
                     {"xmax", xmax},     {"step", step}};

  std::ofstream csv(out);
  if (!csv) throw FormatError("cannot open " + out.string());
  csv << "x,prox_how,prox_l1,prox_welsch\n";
  const auto count = static_cast<long>(std::floor((xmax - xmin) / step + 1e-9));
  char buf[160];
  for (long i = 0; i <= count; ++i) {
    const double x = xmin + static_cast<double>(i) * step;
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", x,
                  prox_how(x, lambda, sigma), prox_l1(x, lambda),
                  prox_welsch(x, sigma));
    csv << buf;
  }
  manifest.outputs.push_back(out.string());
  manifest.write(out.string() + ".manifest.json");
  return 0;
}

// ---------------------------------------------------------------------- synth

int cmd_synth(const SyntheticSpec& base, const SolverFlags& flags,
              int repeats, const std::string& sweep_axis,
              const std::vector<double>& sweep_values, const fs::path& out_dir,
              bool timing) {
  fs::create_directories(out_dir);
  Manifest manifest;
  manifest.command = "synth";
  manifest.started_at = iso8601_now();
  manifest.seed = base.seed;

  const SolverConfig solver = flags.resolve(base.m, base.n);
  manifest.config = {{"m", base.m},         {"n", base.n},
                     {"rank", base.r},      {"gamma", base.gamma},
                     {"alpha", base.alpha}, {"beta", base.beta},
                     {"repeats", repeats},  {"solver", solver_config_json(solver)}};

  if (!sweep_axis.empty()) {
    SweepSpec sweep;
    sweep.axis = axis_from_name(sweep_axis);
    sweep.values = sweep_values;
    sweep.repeats = repeats;
    sweep.base = base;
    sweep.solver = solver;
    sweep.validate();
    if (sweep.values.empty())
      throw CLI::ValidationError("--sweep-values must be non-empty");
    manifest.config["sweep_axis"] = sweep_axis;
    manifest.config["sweep_values"] = sweep_values;

    const std::vector<SweepRow> rows = run_sweep(sweep, worker_threads());
    {
      std::ofstream csv(out_dir / "report.csv");
      write_report_csv(rows, sweep.axis, csv, timing);
      std::ofstream js(out_dir / "report.json");
      write_report_json(rows, sweep.axis, js, timing);
    }
    manifest.outputs = {(out_dir / "report.csv").string(),
                        (out_dir / "report.json").string()};
  } else {
    // one instance: trace plus a single-row report
    const Matrix truth = gen_lowrank(base);
    const Matrix corrupted = inject_outliers(truth, base);
    const ObservationMask mask = gen_mask(base);
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult res = nnsr_solve(corrupted, mask, solver);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    {
      std::ofstream trace(out_dir / "trace.csv");
      write_trace_csv(res.trace, trace);
    }
    SweepRow row;
    row.value = flags.lambda_c;
    row.mean_rre = rre(truth, res.m);
    row.mean_iters = static_cast<double>(res.trace.size());
    row.mean_seconds = secs;
    row.detail.push_back(RepeatDetail{base.seed, row.mean_rre,
                                      static_cast<int>(res.trace.size()),
                                      secs});
    {
      std::ofstream csv(out_dir / "report.csv");
      write_report_csv({row}, SweepAxis::lambda_c, csv, timing);
      std::ofstream js(out_dir / "report.json");
      write_report_json({row}, SweepAxis::lambda_c, js, timing);
    }
    manifest.config["rre"] = row.mean_rre;
    manifest.config["iterations"] = res.trace.size();
    manifest.config["converged"] = res.converged;
    manifest.outputs = {(out_dir / "trace.csv").string(),
                        (out_dir / "report.csv").string(),
                        (out_dir / "report.json").string()};
  }
  manifest.write(out_dir / "manifest.json");
  return 0;
}

// -------------------------------------------------------------------- inpaint

int cmd_inpaint(const fs::path& input, const DegradeSpec& spec,
                const SolverFlags& flags, const fs::path& out,
                const fs::path& metrics_path) {
  Manifest manifest;
  manifest.command = "inpaint";
  manifest.started_at = iso8601_now();
  manifest.seed = spec.seed;

  const ImagePlane original = read_image(input);
  const Degraded degraded = degrade(original, spec);
  const SolverConfig solver =
      flags.resolve(original.height, original.width);

  Index masked_columns = 0;
  if (spec.mask_kind == MaskKind::stripe) {
    for (Index j = 0; j < original.width; ++j)
      if (!degraded.mask.observed(0, j)) ++masked_columns;
  }

  const SolveResult res =
      nnsr_solve(degraded.x, degraded.mask, solver);

  const ImagePlane recovered =
      from_matrix(res.completed, original.source_depth, true);
  write_image(recovered, out);

  const double psnr_db = psnr(original, recovered, 1.0);
  const double ssim_value = ssim(original, recovered, 1.0);
  json metrics;
  metrics["psnr_db"] = metric_number(psnr_db);
  metrics["ssim"] = ssim_value;
  {
    std::ofstream mj(metrics_path);
    if (!mj) throw FormatError("cannot open " + metrics_path.string());
    mj << metrics.dump(2) << "\n";
  }

  manifest.config = {
      {"input", input.string()},
      {"mask", spec.mask_kind == MaskKind::random ? "random" : "stripe"},
      {"gamma", spec.gamma},
      {"stripe_width", spec.stripe_width},
      {"stripe_period", spec.stripe_period},
      {"outlier_frac", spec.outlier_frac},
      {"outlier_mag", spec.outlier_mag},
      {"width", original.width},
      {"height", original.height},
      {"masked_columns", masked_columns},
      {"observed_entries", degraded.mask.cardinality()},
      {"iterations", res.trace.size()},
      {"converged", res.converged},
      {"solver", solver_config_json(solver)},
      {"psnr_db", metric_number(psnr_db)},
      {"ssim", ssim_value}};
  manifest.outputs = {out.string(), metrics_path.string()};
  manifest.write(out.string() + ".manifest.json");
  return 0;
}

// ------------------------------------------------------------------------ msi

int cmd_msi(const fs::path& band_dir, double missing_frac,
            std::optional<double> snr_db, std::uint64_t seed,
            const SolverFlags& flags, const fs::path& out_dir) {
  Manifest manifest;
  manifest.command = "msi";
  manifest.started_at = iso8601_now();
  manifest.seed = seed;

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(band_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
  }
  if (files.empty())
    throw FormatError("no .pgm/.ppm bands in " + band_dir.string());
  std::sort(files.begin(), files.end());

  std::vector<ImagePlane> bands;
  bands.reserve(files.size());
  for (const fs::path& f : files) bands.push_back(read_image(f));
  const Index width = bands.front().width;
  const Index height = bands.front().height;

  const Matrix stacked = msi_stack(bands);
  const double density =
      snr_db ? salt_pepper_density_for_snr_db(*snr_db) : 0.0;
  const Matrix noisy = salt_pepper(stacked, density, Rng::derive(seed, 1));

  ObservationMask::Flags observed(stacked.rows(), stacked.cols());
  {
    Rng rng(Rng::derive(seed, 2));
    for (Index i = 0; i < observed.rows(); ++i)
      for (Index j = 0; j < observed.cols(); ++j)
        observed(i, j) = rng.uniform01() >= missing_frac;
  }
  const ObservationMask mask{std::move(observed)};

  const SolverConfig solver = flags.resolve(stacked.rows(), stacked.cols());
  const SolveResult res = nnsr_solve(noisy, mask, solver);

  fs::create_directories(out_dir);
  const std::vector<ImagePlane> recovered =
      msi_unstack(res.completed, width, height);

  double psnr_sum = 0;
  std::ofstream csv(out_dir / "band_metrics.csv");
  csv << "band,psnr_db,ssim\n";
  json per_band = json::array();
  for (std::size_t b = 0; b < recovered.size(); ++b) {
    ImagePlane plane = recovered[b];
    for (double& v : plane.pixels) v = std::clamp(v, 0.0, 1.0);
    plane.source_depth = bands[b].source_depth;
    const double p = psnr(bands[b], plane, 1.0);
    const double s = ssim(bands[b], plane, 1.0);
    psnr_sum += p;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f\n", b, p, s);
    csv << buf;
    per_band.push_back({{"band", b},
                        {"psnr_db", metric_number(p)},
                        {"ssim", s}});
    char name[32];
    std::snprintf(name, sizeof(name), "band_%02zu.pgm", b);
    write_image(plane, out_dir / name);
    manifest.outputs.push_back((out_dir / name).string());
  }

  json metrics;
  metrics["per_band"] = per_band;
  metrics["mean_psnr_db"] = metric_number(psnr_sum /
                                          static_cast<double>(recovered.size()));
  {
    std::ofstream mj(out_dir / "metrics.json");
    mj << metrics.dump(2) << "\n";
  }

  manifest.config = {{"band_dir", band_dir.string()},
                     {"bands", files.size()},
                     {"width", width},
                     {"height", height},
                     {"missing_frac", missing_frac},
                     {"salt_pepper_density", density},
                     {"iterations", res.trace.size()},
                     {"converged", res.converged},
                     {"solver", solver_config_json(solver)}};
  if (snr_db) manifest.config["snr_db"] = *snr_db;
  manifest.outputs.push_back((out_dir / "band_metrics.csv").string());
  manifest.outputs.push_back((out_dir / "metrics.json").string());
  manifest.write(out_dir / "manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust low-rank matrix completion via sparsity-inducing "
               "shrinkage"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // prox-curve
  auto* curve = app.add_subcommand(
      "prox-curve", "export shrinkage-operator curves on a grid");
  double lambda = 1.0, sigma = std::numbers::sqrt2;
  double xmin = -3.0, xmax = 3.0, step = 0.01;
  fs::path curve_out = "prox_curve.csv";
  curve->add_option("--lambda", lambda)->check(CLI::NonNegativeNumber);
  curve->add_option("--sigma", sigma)->check(CLI::PositiveNumber);
  curve->add_option("--xmin", xmin);
  curve->add_option("--xmax", xmax);
  curve->add_option("--step", step);
  curve->add_option("--out", curve_out);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "synthetic low-rank completion experiments");
  SyntheticSpec base;
  SolverFlags synth_flags;
  int repeats = 10;
  std::string sweep_axis;
  std::vector<double> sweep_values;
  fs::path synth_out = "synth_out";
  bool timing = false;
  synth->add_option("--m", base.m)->check(CLI::PositiveNumber);
  synth->add_option("--n", base.n)->check(CLI::PositiveNumber);
  synth->add_option("--rank", base.r)->check(CLI::NonNegativeNumber);
  synth->add_option("--gamma", base.gamma);
  synth->add_option("--alpha", base.alpha);
  synth->add_option("--beta", base.beta);
  synth->add_option("--seed", base.seed);
  synth->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  synth->add_option("--sweep-axis", sweep_axis)
      ->check(CLI::IsMember({"gamma", "alpha", "beta", "rank", "lambda_c"}));
  synth->add_option("--sweep-values", sweep_values)->delimiter(',');
  synth->add_option("--out-dir", synth_out);
  synth->add_flag("--timing", timing,
                  "include measured wall time in reports (breaks "
                  "byte-reproducibility)");
  synth_flags.attach(synth);

  // inpaint
  auto* inpaint = app.add_subcommand("inpaint", "grayscale image inpainting");
  fs::path in_image, out_image = "recovered.pgm", metrics_path = "metrics.json";
  DegradeSpec dspec;
  std::string mask_kind = "random";
  SolverFlags inpaint_flags;
  inpaint->add_option("--input", in_image)->required();
  inpaint->add_option("--mask", mask_kind)
      ->check(CLI::IsMember({"random", "stripe"}));
  inpaint->add_option("--gamma", dspec.gamma);
  inpaint->add_option("--stripe-width", dspec.stripe_width);
  inpaint->add_option("--stripe-period", dspec.stripe_period);
  inpaint->add_option("--outlier-frac", dspec.outlier_frac);
  inpaint->add_option("--outlier-mag", dspec.outlier_mag);
  inpaint->add_option("--seed", dspec.seed);
  inpaint->add_option("--out", out_image);
  inpaint->add_option("--metrics", metrics_path);
  inpaint_flags.attach(inpaint);

  // msi
  auto* msi = app.add_subcommand(
      "msi", "multispectral restoration over stacked bands");
  fs::path band_dir;
  double missing_frac = 0.2;
  std::optional<double> snr_db;
  std::uint64_t msi_seed = 0;
  fs::path msi_out = "msi_out";
  SolverFlags msi_flags;
  msi->add_option("--band-dir", band_dir)->required();
  msi->add_option("--missing-frac", missing_frac);
  msi->add_option("--snr-db", snr_db,
                  "salt-and-pepper SNR in dB (omit for no impulse noise)");
  msi->add_option("--seed", msi_seed);
  msi->add_option("--out-dir", msi_out);
  msi_flags.attach(msi);

  CLI11_PARSE(app, argc, argv);

  try {
    if (curve->parsed()) {
      if (step <= 0 || xmin >= xmax) {
        std::cerr << "prox-curve: need step > 0 and xmin < xmax\n";
        return 2;
      }
      return cmd_prox_curve(lambda, sigma, xmin, xmax, step, curve_out);
    }
    if (synth->parsed()) {
      if (!sweep_axis.empty() && sweep_values.empty()) {
        std::cerr << "synth: --sweep-axis requires --sweep-values\n";
        return 2;
      }
      if (sweep_axis.empty() && !sweep_values.empty()) {
        std::cerr << "synth: --sweep-values requires --sweep-axis\n";
        return 2;
      }
      return cmd_synth(base, synth_flags, repeats, sweep_axis, sweep_values,
                       synth_out, timing);
    }
    if (inpaint->parsed()) {
      dspec.mask_kind =
          mask_kind == "stripe" ? MaskKind::stripe : MaskKind::random;
      return cmd_inpaint(in_image, dspec, inpaint_flags, out_image,
                         metrics_path);
    }
    if (msi->parsed()) {
      return cmd_msi(band_dir, missing_frac, snr_db, msi_seed, msi_flags,
                     msi_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
