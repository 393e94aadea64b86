// Command-line front end: structure files, single solves, the synthetic
// benchmark and the LN-TV signal and image applications.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>

#include "swagger/error.hpp"
#include "swagger/experiments.hpp"
#include "swagger/io.hpp"

using namespace swagger;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct Global {
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  int jobs = 1;
};

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out.precision(std::numeric_limits<double>::max_digits10);
  return out;
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

void write_trace(const fs::path& path, const SolveResult& r) {
  auto out = open_out(path);
  out << "iteration,objective_before,objective,constraint_residual,step,multiplier\n";
  for (const auto& t : r.trace) {
    out << t.iteration << ',' << t.objective_before << ',' << t.objective << ',' << t.constraint_residual << ','
        << t.step << ',' << t.multiplier << '\n';
  }
}

json solve_stats(const SolveResult& r) {
  return {{"status", to_string(r.status)},
          {"iterations", r.iterations},
          {"constraint_residual", r.constraint_residual},
          {"multiplier", r.multiplier}};
}

// Piecewise-constant signal: segment lengths uniform in [min_len, max_len],
// levels in [-1, 1] with jumps of at least 0.3.
Vector piecewise_constant(std::mt19937_64& rng, Index length, Index min_len, Index max_len) {
  std::uniform_int_distribution<Index> seg(min_len, max_len);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  Vector x(length);
  double current = level(rng);
  Index i = 0;
  while (i < length) {
    const Index len = std::min(seg(rng), length - i);
    x.segment(i, len).setConstant(current);
    i += len;
    double next;
    do next = level(rng);
    while (std::abs(next - current) < 0.3);
    current = next;
  }
  return x;
}

Vector add_noise(std::mt19937_64& rng, const Vector& x, double snr_db) {
  const double sigma = std::sqrt(x.squaredNorm() / double(x.size()) / std::pow(10.0, snr_db / 10.0));
  std::normal_distribution<double> g(0.0, 1.0);
  Vector y = x;
  for (Index i = 0; i < y.size(); ++i) y(i) += sigma * g(rng);
  return y;
}

// Non-overlapping axis-aligned rectangles of random intensity on a zero background.
Image rectangles(std::mt19937_64& rng, Index h, Index w, Index min_side) {
  Image img{h, w, Vector::Zero(h * w)};
  std::vector<char> used(static_cast<std::size_t>(h * w), 0);
  std::uniform_real_distribution<double> level(0.2, 1.0);
  for (int placed = 0, tries = 0; placed < 4 && tries < 200; ++tries) {
    const Index rh = std::uniform_int_distribution<Index>(min_side, h / 2)(rng);
    const Index rw = std::uniform_int_distribution<Index>(min_side, w / 2)(rng);
    const Index r0 = std::uniform_int_distribution<Index>(0, h - rh)(rng);
    const Index c0 = std::uniform_int_distribution<Index>(0, w - rw)(rng);
    bool clear = true;
    for (Index r = r0; r < r0 + rh && clear; ++r)
      for (Index c = c0; c < c0 + rw; ++c) clear = clear && !used[static_cast<std::size_t>(r + c * h)];
    if (!clear) continue;
    const double v = level(rng);
    for (Index r = r0; r < r0 + rh; ++r)
      for (Index c = c0; c < c0 + rw; ++c) {
        img.at(r, c) = v;
        used[static_cast<std::size_t>(r + c * h)] = 1;
      }
    ++placed;
  }
  return img;
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string kind;
  Index dim = 60;
  Index groups = 10;
  Index group_size = 6;
  Index n = 4;
  double near = 1.0;
  double far = 1.0;
  double density = 0.5;
  std::string out;
};

int cmd_build_s(const Global& g, const BuildArgs& a) {
  StructureMatrix s;
  if (a.kind == "one-sparse") {
    s = build_one_sparse(a.dim);
  } else if (a.kind == "group") {
    s = build_block_group(a.groups, a.group_size);
  } else if (a.kind == "local") {
    s = build_local_neighborhood(a.dim, a.n, BandWeights::ramp(a.near, a.far));
  } else {
    s = build_random(a.dim, a.density, g.seed);
  }
  const fs::path path = a.out.empty() ? fs::path(g.output_dir) / ("S_" + a.kind + ".txt") : fs::path(a.out);
  auto out = open_out(path);
  write_structure(out, s);
  out.close();
  std::cout << "wrote " << path.string() << " (" << s.dim() << "x" << s.dim() << ")\n";
  std::cout << "validation: " << validate(s).summary() << '\n';
  return 0;
}

struct SolveArgs {
  std::string a_path;
  std::string y_path;
  std::string s_path;
  std::optional<double> lambda;
  bool accelerated = false;
  bool nonneg = false;
  std::string init = "pinv";
  int max_iters = 5000;
  double tol_rel_change = 1e-8;
  double tol_constraint = 1e-8;
  std::optional<double> step;
  std::optional<double> multiplier_step;
};

int cmd_solve(const Global& g, const SolveArgs& a) {
  const Matrix am = read_csv_grid(a.a_path);
  const Vector y = read_signal_csv(a.y_path);
  std::ifstream sin(a.s_path);
  if (!sin) throw Error(Errc::io, "cannot read " + a.s_path);
  auto s = read_structure(sin);
  auto cfg = PenaltyConfig::canonical(std::move(s));
  Problem p = a.lambda ? Problem::regularized(LinearOperator::dense(am), y, std::move(cfg), *a.lambda)
                       : Problem::constrained(LinearOperator::dense(am), y, std::move(cfg));
  p.nonneg = a.nonneg;
  SolverOptions o;
  o.accelerated = a.accelerated;
  o.init = a.init == "zeros" ? Init::zeros : Init::pseudo_inverse;
  o.max_iters = a.max_iters;
  o.tol_rel_change = a.tol_rel_change;
  o.tol_constraint = a.tol_constraint;
  o.step_x = a.step;
  o.step_multiplier = a.multiplier_step;
  const auto r = solve_swagger_constrained(p, o);

  const fs::path dir = g.output_dir;
  write_signal_csv((dir / "x_hat.csv").string(), r.x_hat);
  write_trace(dir / "trace.csv", r);
  json stats = solve_stats(r);
  stats["mode"] = a.lambda ? "regularized" : "constrained";
  stats["objective"] = r.objective_trace.empty() ? 0.5 * (am * r.x_hat - y).squaredNorm() : r.objective_trace.back();
  write_json(dir / "stats.json", stats);
  std::cout << to_string(r.status) << " after " << r.iterations << " iterations, residual " << r.constraint_residual
            << '\n';
  return r.status == Status::diverged ? kRuntimeFailure : 0;
}

struct BenchArgs {
  std::string structure = "group";
  int trials = 200;
  Index n_obs = 25;
  Index n_vars = 60;
  double snr_db = 25.0;
  double multiplier_step = 0.03;
  double pshrink_p = 0.5;
  bool regularized = false;
};

int cmd_bench(const Global& g, const BenchArgs& a) {
  TrialSpec spec;
  spec.structure = parse_bench_structure(a.structure);
  spec.trials = a.trials;
  spec.seed = g.seed;
  spec.jobs = g.jobs;
  spec.n_obs = a.n_obs;
  spec.n_vars = a.n_vars;
  spec.snr_db = a.snr_db;
  spec.swagger_multiplier_step = a.multiplier_step;
  spec.pshrink_p = a.pshrink_p;
  spec.swagger_mode = a.regularized ? Mode::regularized : Mode::constrained;
  const auto report = run_table1(spec);

  const fs::path dir = g.output_dir;
  const std::string stem = std::string("table1_") + to_string(spec.structure);
  {
    auto out = open_out(dir / (stem + ".csv"));
    write_report_csv(out, report);
  }
  {
    auto out = open_out(dir / (stem + ".json"));
    write_report_json(out, report);
  }
  // Convergence of constrained SWAGGER on the first trial.
  try {
    const auto inst = trial_instance(spec, 0);
    SolverOptions o = spec.solver;
    o.step_multiplier = spec.swagger_multiplier_step;
    const auto r = solve_swagger_constrained(
        Problem::constrained(LinearOperator::dense(inst.a), inst.y, PenaltyConfig::canonical(inst.s)), o);
    write_trace(dir / (stem + "_trace.csv"), r);
  } catch (const Error& e) {
    std::cerr << "no convergence trace: " << e.what() << '\n';
  }

  std::printf("%-10s %-16s %9s %8s %10s\n", "method", "tuning", "support%", "jacard", "mse");
  for (const auto& s : report.summary) {
    std::printf("%-10s %-16s %9.2f %8.3f %10.4f\n", to_string(s.method), to_string(s.tuning), s.mean.support_pct,
                s.mean.jacard, s.mean.mse_in_support);
  }
  std::printf("skipped %d of %d trials\n", report.skipped, spec.trials);
  if (report.skipped * 100 > spec.trials) {
    std::cerr << "error: more than 1% of trials failed\n";
    return kRuntimeFailure;
  }
  return 0;
}

struct DenoiseArgs {
  std::string input;
  std::string clean;
  bool synthetic = false;
  Index length = 200;
  double snr_db = 20.0;
  Index n = 8;
  double lambda_lntv = 0.2;
  double lambda_tv = 0.1;
  double near = 1.0;
  double far = 0.5;
  bool compare_tv = false;
  double tv_lo = 0.01;
  double tv_hi = 2.0;
  int tv_count = 20;
};

int cmd_denoise_1d(const Global& g, const DenoiseArgs& a) {
  const fs::path dir = g.output_dir;
  Vector noisy;
  std::optional<Vector> clean;
  if (a.synthetic) {
    std::mt19937_64 rng(g.seed);
    clean = piecewise_constant(rng, a.length, 10, 40);
    noisy = add_noise(rng, *clean, a.snr_db);
    write_signal_csv((dir / "clean.csv").string(), *clean);
    write_signal_csv((dir / "noisy.csv").string(), noisy);
  } else {
    noisy = read_signal_csv(a.input);
    if (!a.clean.empty()) clean = read_signal_csv(a.clean);
  }
  const Vector& ref = clean ? *clean : noisy;

  auto run = [&](double l1, double l2) {
    LntvOptions o;
    o.lambda_lntv = l1;
    o.lambda_tv = l2;
    o.weights = BandWeights::ramp(a.near, a.far);
    return lntv_denoise_1d(noisy, a.n, o);
  };
  const auto r = run(a.lambda_lntv, a.lambda_tv);
  write_signal_csv((dir / "denoised.csv").string(), r.x);

  json stats = solve_stats(r.solve);
  stats["reference"] = clean ? "clean" : "input";
  stats["input_mse"] = clean ? json(mse(*clean, noisy)) : json(nullptr);
  stats["output_mse"] = mse(ref, r.x);
  stats["output_psnr"] = psnr(ref, r.x);
  stats["lambda_lntv"] = a.lambda_lntv;
  stats["lambda_tv"] = a.lambda_tv;
  stats["n"] = a.n;

  if (a.compare_tv) {
    double best_mse = std::numeric_limits<double>::infinity();
    double best_lambda = 0.0;
    for (double l : log_grid(a.tv_lo, a.tv_hi, a.tv_count)) {
      const double m = mse(ref, run(0.0, l).x);
      if (m < best_mse) {
        best_mse = m;
        best_lambda = l;
      }
    }
    const auto pure = run(a.lambda_lntv, 0.0);
    auto out = open_out(dir / "comparison.csv");
    out << "method,lambda_lntv,lambda_tv,mse\n";
    out << "tv,0," << best_lambda << ',' << best_mse << '\n';
    out << "lntv," << a.lambda_lntv << ",0," << mse(ref, pure.x) << '\n';
    out << "combined," << a.lambda_lntv << ',' << a.lambda_tv << ',' << mse(ref, r.x) << '\n';
  }
  write_json(dir / "stats.json", stats);
  std::cout << "output mse " << stats["output_mse"].get<double>() << " (" << to_string(r.solve.status) << ")\n";
  return 0;
}

struct DeblurArgs {
  std::string input;
  std::string clean;
  bool synthetic = false;
  Index size = 32;
  double noise_sigma = 0.02;
  double blur_sigma = 1.0;
  Index blur_radius = 2;
  double kappa = 0.75;
  Index n = 3;
  double lambda_lntv = 0.003;
  std::optional<double> lambda_tv;
  double near = 1.0;
  double far = 0.5;
  bool compare_tv = false;
  double tv_lo = 1e-4;
  double tv_hi = 1e-1;
  int tv_count = 12;
};

int cmd_deblur_2d(const Global& g, const DeblurArgs& a) {
  const fs::path dir = g.output_dir;
  const GaussianKernel kernel{a.blur_sigma, a.blur_radius};
  Image observed;
  std::optional<Image> clean;
  if (a.synthetic) {
    std::mt19937_64 rng(g.seed);
    clean = rectangles(rng, a.size, a.size, 6);
    std::normal_distribution<double> noise(0.0, 1.0);
    Vector b = blur_operator(a.size, a.size, kernel).apply(clean->pixels);
    for (Index i = 0; i < b.size(); ++i) b(i) += a.noise_sigma * noise(rng);
    observed = Image{a.size, a.size, std::move(b)};
    write_pgm((dir / "clean.pgm").string(), *clean);
    write_pgm((dir / "observed.pgm").string(), observed);
  } else {
    observed = read_pgm(a.input);
    if (!a.clean.empty()) clean = read_pgm(a.clean);
  }
  const Vector& ref = clean ? clean->pixels : observed.pixels;

  auto run = [&](double l1, double l2) {
    Lntv2dOptions o;
    o.kappa = a.kappa;
    o.lambda_lntv = l1;
    o.lambda_tv = l2;
    o.weights = BandWeights::ramp(a.near, a.far);
    return lntv_deblur_2d(observed, kernel, a.n, o);
  };

  double lambda_tv = a.lambda_tv.value_or(0.01);
  double best_tv_psnr = -std::numeric_limits<double>::infinity();
  double best_tv_lambda = 0.0;
  if (a.compare_tv) {
    for (double l : log_grid(a.tv_lo, a.tv_hi, a.tv_count)) {
      const double p = psnr(ref, run(0.0, l).image.pixels);
      if (p > best_tv_psnr) {
        best_tv_psnr = p;
        best_tv_lambda = l;
      }
    }
    // The combined model inherits the best TV strength unless one is given.
    if (!a.lambda_tv) lambda_tv = best_tv_lambda;
  }
  const auto r = run(a.lambda_lntv, lambda_tv);
  write_pgm((dir / "deblurred.pgm").string(), r.image);
  write_csv_grid((dir / "deblurred.csv").string(),
                 Eigen::Map<const Matrix>(r.image.pixels.data(), r.image.height, r.image.width));

  json stats = solve_stats(r.solve);
  stats["reference"] = clean ? "clean" : "input";
  stats["input_mse"] = clean ? json(mse(clean->pixels, observed.pixels)) : json(nullptr);
  stats["output_mse"] = mse(ref, r.image.pixels);
  stats["output_psnr"] = psnr(ref, r.image.pixels);
  stats["lambda_lntv"] = a.lambda_lntv;
  stats["lambda_tv"] = lambda_tv;
  stats["kappa"] = a.kappa;
  stats["n"] = a.n;

  if (a.compare_tv) {
    const auto pure = run(a.lambda_lntv, 0.0);
    auto out = open_out(dir / "comparison.csv");
    out << "method,lambda_lntv,lambda_tv,mse,psnr\n";
    const double tv_mse = mse(ref, run(0.0, best_tv_lambda).image.pixels);
    out << "tv,0," << best_tv_lambda << ',' << tv_mse << ',' << best_tv_psnr << '\n';
    out << "lntv," << a.lambda_lntv << ",0," << mse(ref, pure.image.pixels) << ',' << psnr(ref, pure.image.pixels) << '\n';
    out << "combined," << a.lambda_lntv << ',' << lambda_tv << ',' << mse(ref, r.image.pixels) << ','
        << psnr(ref, r.image.pixels) << '\n';
  }
  write_json(dir / "stats.json", stats);
  std::cout << "output psnr " << stats["output_psnr"].get<double>() << " dB (" << to_string(r.solve.status) << ")\n";
  return 0;
}

bool is_usage(Errc code) {
  switch (code) {
    case Errc::invalid_dimension:
    case Errc::invalid_band:
    case Errc::invalid_weight:
    case Errc::invalid_probability:
    case Errc::range:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured sparsity with the SWAGGER penalty"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML or INI file with option values; command-line flags win");

  Global g;
  app.add_option("-o,--output-dir", g.output_dir, "Directory for output files")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->envname("SWAGGER_SEED")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads for the benchmark")->check(CLI::PositiveNumber)->capture_default_str();

  std::function<int()> action;

  BuildArgs build;
  auto* b = app.add_subcommand("build-s", "Write a structure matrix and validate it");
  b->add_option("kind", build.kind, "one-sparse, group, local or random")
      ->required()
      ->check(CLI::IsMember({"one-sparse", "group", "local", "random"}));
  b->add_option("--dim", build.dim, "Dimension")->check(CLI::PositiveNumber)->capture_default_str();
  b->add_option("--groups", build.groups, "Number of groups")->check(CLI::PositiveNumber)->capture_default_str();
  b->add_option("--group-size", build.group_size, "Group size")->check(CLI::PositiveNumber)->capture_default_str();
  b->add_option("--n", build.n, "Neighbourhood width")->capture_default_str();
  b->add_option("--near", build.near, "Weight at offset 1")->capture_default_str();
  b->add_option("--far", build.far, "Weight at offset n")->capture_default_str();
  b->add_option("--density", build.density, "Bernoulli probability")->capture_default_str();
  b->add_option("--out", build.out, "Output file (default <output-dir>/S_<kind>.txt)");
  b->callback([&] { action = [&] { return cmd_build_s(g, build); }; });

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one problem with the canonical penalty");
  s->add_option("--A", solve.a_path, "Sensing matrix (CSV)")->required()->check(CLI::ExistingFile);
  s->add_option("--y", solve.y_path, "Measurements (CSV)")->required()->check(CLI::ExistingFile);
  s->add_option("--S", solve.s_path, "Structure matrix file")->required()->check(CLI::ExistingFile);
  s->add_option("--lambda", solve.lambda, "Regularization strength; constrained mode when absent")
      ->check(CLI::NonNegativeNumber);
  s->add_flag("--accelerated", solve.accelerated, "Monotone accelerated iteration");
  s->add_flag("--nonneg", solve.nonneg, "Nonnegativity constraint");
  s->add_option("--init", solve.init, "pinv or zeros")->check(CLI::IsMember({"pinv", "zeros"}))->capture_default_str();
  s->add_option("--max-iters", solve.max_iters)->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--tol-rel-change", solve.tol_rel_change)->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--tol-constraint", solve.tol_constraint)->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--step", solve.step, "Fidelity step (default 1/L)")->check(CLI::PositiveNumber);
  s->add_option("--multiplier-step", solve.multiplier_step, "Multiplier ascent step")->check(CLI::PositiveNumber);
  s->callback([&] { action = [&] { return cmd_solve(g, solve); }; });

  BenchArgs bench;
  auto* be = app.add_subcommand("bench", "Synthetic comparison of SWAGGER, E-LASSO, p-shrinkage and LASSO");
  be->add_option("--structure", bench.structure, "group, local or random")
      ->check(CLI::IsMember({"group", "local", "local-neighborhood", "random"}))
      ->capture_default_str();
  be->add_option("--trials", bench.trials)->check(CLI::PositiveNumber)->capture_default_str();
  be->add_option("--n-obs", bench.n_obs)->check(CLI::PositiveNumber)->capture_default_str();
  be->add_option("--n-vars", bench.n_vars)->check(CLI::PositiveNumber)->capture_default_str();
  be->add_option("--snr", bench.snr_db, "Measurement SNR in dB")->capture_default_str();
  be->add_option("--multiplier-step", bench.multiplier_step)->check(CLI::PositiveNumber)->capture_default_str();
  be->add_option("--pshrink-p", bench.pshrink_p)->capture_default_str();
  be->add_flag("--regularized", bench.regularized, "Sweep SWAGGER strength instead of solving the constrained form");
  be->callback([&] { action = [&] { return cmd_bench(g, bench); }; });

  DenoiseArgs den;
  auto* d = app.add_subcommand("denoise-1d", "LN-TV denoising of a 1-D signal");
  d->add_option("--input", den.input, "Noisy signal (CSV)")->check(CLI::ExistingFile);
  d->add_option("--clean", den.clean, "Reference signal for error statistics (CSV)")->check(CLI::ExistingFile);
  d->add_flag("--synthetic", den.synthetic, "Generate a piecewise-constant test signal instead of reading one");
  d->add_option("--length", den.length)->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--snr", den.snr_db)->capture_default_str();
  d->add_option("--n", den.n, "Neighbourhood width")->capture_default_str();
  d->add_option("--lambda-lntv", den.lambda_lntv)->check(CLI::NonNegativeNumber)->capture_default_str();
  d->add_option("--lambda-tv", den.lambda_tv)->check(CLI::NonNegativeNumber)->capture_default_str();
  d->add_option("--near", den.near)->capture_default_str();
  d->add_option("--far", den.far)->capture_default_str();
  d->add_flag("--compare-tv", den.compare_tv, "Also write TV, LN-TV and combined results to comparison.csv");
  d->add_option("--tv-lo", den.tv_lo)->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--tv-hi", den.tv_hi)->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--tv-count", den.tv_count)->check(CLI::PositiveNumber)->capture_default_str();
  d->callback([&] { action = [&] { return cmd_denoise_1d(g, den); }; });

  DeblurArgs deb;
  auto* e = app.add_subcommand("deblur-2d", "LN-TV plus TV deblurring of an image");
  e->add_option("--input", deb.input, "Observed image (PGM)")->check(CLI::ExistingFile);
  e->add_option("--clean", deb.clean, "Reference image (PGM)")->check(CLI::ExistingFile);
  e->add_flag("--synthetic", deb.synthetic, "Blur and corrupt a generated rectangles image");
  e->add_option("--size", deb.size)->check(CLI::PositiveNumber)->capture_default_str();
  e->add_option("--noise-sigma", deb.noise_sigma)->check(CLI::NonNegativeNumber)->capture_default_str();
  e->add_option("--blur-sigma", deb.blur_sigma)->check(CLI::PositiveNumber)->capture_default_str();
  e->add_option("--blur-radius", deb.blur_radius)->check(CLI::NonNegativeNumber)->capture_default_str();
  e->add_option("--kappa", deb.kappa)->capture_default_str();
  e->add_option("--n", deb.n)->capture_default_str();
  e->add_option("--lambda-lntv", deb.lambda_lntv)->check(CLI::NonNegativeNumber)->capture_default_str();
  e->add_option("--lambda-tv", deb.lambda_tv, "TV strength (default: best grid value with --compare-tv, else 0.01)")
      ->check(CLI::NonNegativeNumber);
  e->add_option("--near", deb.near)->capture_default_str();
  e->add_option("--far", deb.far)->capture_default_str();
  e->add_flag("--compare-tv", deb.compare_tv, "Also write TV, LN-TV and combined results to comparison.csv");
  e->add_option("--tv-lo", deb.tv_lo)->check(CLI::PositiveNumber)->capture_default_str();
  e->add_option("--tv-hi", deb.tv_hi)->check(CLI::PositiveNumber)->capture_default_str();
  e->add_option("--tv-count", deb.tv_count)->check(CLI::PositiveNumber)->capture_default_str();
  e->callback([&] { action = [&] { return cmd_deblur_2d(g, deb); }; });

  try {
    app.parse(argc, argv);
    if (d->parsed() && !den.synthetic && den.input.empty()) throw CLI::RequiredError("--input or --synthetic");
    if (e->parsed() && !deb.synthetic && deb.input.empty()) throw CLI::RequiredError("--input or --synthetic");
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    fs::create_directories(g.output_dir);
    return action();
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return is_usage(err.code()) ? kUsageError : kRuntimeFailure;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kRuntimeFailure;
  }
}
