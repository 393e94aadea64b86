#include "swagger/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include "swagger/error.hpp"

namespace swagger {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

Vector generate_structured_x(const StructureMatrix& s, std::uint64_t seed, const GenerateOptions& opts) {
  if (s.dim() < 1) throw Error(Errc::invalid_dimension, "empty structure");
  const auto report = validate(s);
  if (!report.ok()) throw Error(Errc::invalid_structure, report.summary());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector x(s.dim());
  for (Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);

  // Each pass is one proximal subgradient step on 1/2||x - x^i||^2 + step |x|^T S |x|
  // taken at x = x^i, where the fidelity gradient vanishes.
  bool done = false;
  for (int it = 0; it <= opts.max_iters; ++it) {
    if (eval(s, x) < opts.mu_tol) {
      done = true;
      break;
    }
    x = prox_l1sq(x - opts.step * subgradient_smooth_part(s, x, 1.0), 2.0 * opts.step);
    for (Index i = 0; i < x.size(); ++i) {
      if (std::abs(x(i)) < opts.cleanup) x(i) = 0.0;
    }
  }
  if (!done) throw Error(Errc::generation, "structure not reached within " + std::to_string(opts.max_iters) + " iterations");

  // A conflicting pair can survive below mu_tol; keep the larger entry.
  const SparseMatrix& m = s.sparse();
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const Index i = it.row();
      const Index j = it.col();
      if (i < j && it.value() > 0.0 && x(i) != 0.0 && x(j) != 0.0) {
        (std::abs(x(i)) < std::abs(x(j)) ? x(i) : x(j)) = 0.0;
      }
    }
  }

  std::uniform_real_distribution<double> mag(opts.magnitude_lo, opts.magnitude_hi);
  for (Index i = 0; i < x.size(); ++i) {
    const double u = mag(rng);
    x(i) = x(i) == 0.0 ? 0.0 : sign(x(i)) * u;
  }
  return x;
}

Measurement synthesize_measurement(const Vector& x, std::uint64_t seed, Index n_obs, double snr_db) {
  if (n_obs < 1) throw Error(Errc::invalid_dimension, "n_obs must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Measurement m;
  m.a.resize(n_obs, x.size());
  for (Index j = 0; j < m.a.cols(); ++j) {
    for (Index i = 0; i < m.a.rows(); ++i) m.a(i, j) = gauss(rng);
  }
  const Vector clean = m.a * x;
  m.sigma = std::sqrt(clean.squaredNorm() / (static_cast<double>(n_obs) * std::pow(10.0, snr_db / 10.0)));
  m.y = clean;
  for (Index i = 0; i < n_obs; ++i) m.y(i) += m.sigma * gauss(rng);
  return m;
}

Index support_size(const Vector& x, double support_tol) {
  return (x.array().abs() > support_tol).count();
}

Metrics compute_metrics(const Vector& x_true, const Vector& x_hat, double support_tol) {
  if (x_true.size() != x_hat.size()) throw Error(Errc::shape, "metric vectors differ in length");
  Index truth = 0;
  Index both = 0;
  Index either = 0;
  double sq = 0.0;
  for (Index i = 0; i < x_true.size(); ++i) {
    const bool t = std::abs(x_true(i)) > support_tol;
    const bool e = std::abs(x_hat(i)) > support_tol;
    truth += t;
    both += t && e;
    either += t || e;
    if (t) sq += (x_true(i) - x_hat(i)) * (x_true(i) - x_hat(i));
  }
  if (truth == 0) throw Error(Errc::undefined_metrics, "true support is empty");
  Metrics m;
  m.support_pct = 100.0 * static_cast<double>(both) / static_cast<double>(truth);
  m.jacard = static_cast<double>(both) / static_cast<double>(either);
  m.mse_in_support = sq / static_cast<double>(truth);
  return m;
}

const char* to_string(TuningMode mode) noexcept {
  return mode == TuningMode::sparsity_level ? "sparsity-level" : "jacard";
}

std::size_t tune_lambda(const std::vector<Vector>& solutions, const Vector& x_true, TuningMode mode,
                        double support_tol) {
  if (solutions.empty()) throw Error(Errc::range, "empty lambda grid");
  const Index target = support_size(x_true, support_tol);
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    double score;
    if (mode == TuningMode::sparsity_level) {
      score = -std::abs(static_cast<double>(support_size(solutions[k], support_tol) - target));
    } else {
      score = compute_metrics(x_true, solutions[k], support_tol).jacard;
    }
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

const char* to_string(BenchStructure s) noexcept {
  switch (s) {
    case BenchStructure::group: return "group";
    case BenchStructure::local_neighborhood: return "local";
    case BenchStructure::random: return "random";
  }
  return "unknown";
}

BenchStructure parse_bench_structure(const std::string& name) {
  if (name == "group") return BenchStructure::group;
  if (name == "local" || name == "local-neighborhood") return BenchStructure::local_neighborhood;
  if (name == "random") return BenchStructure::random;
  throw Error(Errc::range, "unknown structure '" + name + "' (group | local | random)");
}

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::swagger: return "SWAGGER";
    case Method::elasso: return "E-LASSO";
    case Method::pshrink: return "p-shrinkage";
    case Method::lasso: return "LASSO";
  }
  return "unknown";
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi >= lo) || count < 1) throw Error(Errc::range, "invalid log grid");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    g[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, t);
  }
  return g;
}

std::vector<double> default_lambda_grid() { return log_grid(1e-3, 1e1, 30); }

void TrialSpec::check() const {
  if (trials < 1) throw Error(Errc::range, "trials must be >= 1");
  if (n_obs < 1 || n_vars < 1) throw Error(Errc::range, "dimensions must be >= 1");
  if (lambda_grid.empty()) throw Error(Errc::range, "lambda grid is empty");
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end())) throw Error(Errc::range, "lambda grid must ascend");
  if (lambda_grid.front() <= 0.0) throw Error(Errc::range, "lambda grid must be positive");
  if (structure == BenchStructure::group && n_vars % 6 != 0) {
    throw Error(Errc::range, "group structure needs n_vars divisible by 6");
  }
  if (structure == BenchStructure::local_neighborhood && n_vars <= 4) {
    throw Error(Errc::range, "local structure needs n_vars > 4");
  }
  if (swagger_mode == Mode::composite) throw Error(Errc::range, "SWAGGER runs constrained or regularized");
  if (!(swagger_multiplier_step > 0.0)) throw Error(Errc::range, "multiplier step must be positive");
  if (jobs < 1) throw Error(Errc::range, "jobs must be >= 1");
}

const Summary& TrialReport::find(Method m, TuningMode t) const {
  for (const auto& s : summary) {
    if (s.method == m && s.tuning == t) return s;
  }
  throw Error(Errc::range, "no summary row");
}

namespace {

StructureMatrix bench_structure(const TrialSpec& spec, std::uint64_t seed) {
  switch (spec.structure) {
    case BenchStructure::group: return build_block_group(spec.n_vars / 6, 6);
    case BenchStructure::local_neighborhood: return build_local_neighborhood(spec.n_vars, 4);
    case BenchStructure::random: return build_random(spec.n_vars, 0.5, seed);
  }
  throw Error(Errc::range, "unknown structure");
}

}  // namespace

std::vector<Vector> solve_path(Method method, const Matrix& a, const Vector& y, const StructureMatrix& s,
                               const TrialSpec& spec) {
  const auto op = LinearOperator::dense(a);
  SolverOptions opts = spec.solver;
  opts.step_x = estimate_step(a);
  const Vector pinv = init_pseudo_inverse(a, y);
  std::vector<Vector> out;
  out.reserve(spec.lambda_grid.size());

  if (method == Method::swagger) {
    opts.init = Init::given;
    opts.x0 = pinv;
    if (spec.swagger_mode == Mode::constrained) {
      // The multiplier is found by the solver, so one solve serves the whole grid.
      opts.step_multiplier = spec.swagger_multiplier_step;
      auto p = Problem::constrained(op, y, PenaltyConfig::canonical(s));
      out.assign(spec.lambda_grid.size(), solve_swagger_constrained(p, opts).x_hat);
      return out;
    }
    for (double lambda : spec.lambda_grid) {
      auto p = Problem::regularized(op, y, PenaltyConfig::canonical(s), lambda);
      out.push_back(solve_swagger_constrained(p, opts).x_hat);
    }
    return out;
  }

  const Baseline which = method == Method::lasso    ? Baseline::lasso
                         : method == Method::pshrink ? Baseline::pshrink
                                                     : Baseline::elasso;
  opts.init = Init::given;
  opts.x0 = pinv;
  Vector warm = pinv;
  for (double lambda : spec.lambda_grid) {
    auto p = Problem::regularized(op, y, PenaltyConfig::canonical(s), lambda);
    // Convex baselines continue along the path; p-shrinkage restarts from the pseudo-inverse.
    if (which != Baseline::pshrink) opts.x0 = warm;
    warm = solve_baseline(p, which, opts, spec.pshrink_p).x_hat;
    out.push_back(warm);
  }
  return out;
}

TrialInstance trial_instance(const TrialSpec& spec, int trial) {
  // A failed or empty draw is replaced from a fresh substream.
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t t = static_cast<std::uint64_t>(trial) + (attempt << 32);
    TrialInstance inst;
    inst.s = bench_structure(spec, substream_seed(spec.seed, t, 0));
    try {
      inst.x = generate_structured_x(inst.s, substream_seed(spec.seed, t, 1));
    } catch (const Error& e) {
      if (e.code() != Errc::generation || attempt >= 8) throw;
      continue;
    }
    if (support_size(inst.x, spec.support_tol) > 0) {
      auto meas = synthesize_measurement(inst.x, substream_seed(spec.seed, t, 2), spec.n_obs, spec.snr_db);
      inst.a = std::move(meas.a);
      inst.y = std::move(meas.y);
      return inst;
    }
    if (attempt >= 8) throw Error(Errc::generation, "ground truth kept coming out empty");
  }
}

namespace {

TrialRecord run_trial(const TrialSpec& spec, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  try {
    const auto inst = trial_instance(spec, trial);
    rec.true_support = support_size(inst.x, spec.support_tol);
    for (std::size_t mi = 0; mi < 4; ++mi) {
      const auto path = solve_path(kMethods[mi], inst.a, inst.y, inst.s, spec);
      for (std::size_t ti = 0; ti < 2; ++ti) {
        const std::size_t k = tune_lambda(path, inst.x, kTuningModes[ti], spec.support_tol);
        rec.outcome[mi][ti] = {compute_metrics(inst.x, path[k], spec.support_tol), spec.lambda_grid[k]};
      }
      if (kMethods[mi] == Method::swagger) {
        for (const auto& sol : path) rec.swagger_jacard_by_lambda.push_back(compute_metrics(inst.x, sol, spec.support_tol).jacard);
      }
    }
  } catch (const Error& e) {
    rec.skipped = true;
    rec.skip_reason = e.what();
  }
  return rec;
}

}  // namespace

TrialReport run_table1(const TrialSpec& spec) {
  spec.check();
  TrialReport report;
  report.spec = spec;
  report.records.resize(static_cast<std::size_t>(spec.trials));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < spec.trials; t = next++) report.records[static_cast<std::size_t>(t)] = run_trial(spec, t);
  };
  const int width = std::min(spec.jobs, spec.trials);
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& r : report.records) report.skipped += r.skipped;
  for (std::size_t mi = 0; mi < 4; ++mi) {
    for (std::size_t ti = 0; ti < 2; ++ti) {
      Summary s{kMethods[mi], kTuningModes[ti], {}, {}, 0};
      std::vector<Metrics> vals;
      for (const auto& r : report.records) {
        if (!r.skipped) vals.push_back(r.outcome[mi][ti].metrics);
      }
      s.trials = static_cast<int>(vals.size());
      if (!vals.empty()) {
        auto mean_se = [&](auto field, double& mean, double& se) {
          double sum = 0.0;
          for (const auto& v : vals) sum += v.*field;
          mean = sum / vals.size();
          double ss = 0.0;
          for (const auto& v : vals) ss += (v.*field - mean) * (v.*field - mean);
          se = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1) / vals.size()) : 0.0;
        };
        mean_se(&Metrics::support_pct, s.mean.support_pct, s.stderr_.support_pct);
        mean_se(&Metrics::jacard, s.mean.jacard, s.stderr_.jacard);
        mean_se(&Metrics::mse_in_support, s.mean.mse_in_support, s.stderr_.mse_in_support);
      }
      report.summary.push_back(s);
    }
  }
  return report;
}

double mse(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() == 0) throw Error(Errc::shape, "mse needs equal nonempty vectors");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

double psnr(const Vector& reference, const Vector& estimate) {
  return 10.0 * std::log10(1.0 / mse(reference, estimate));
}

}  // namespace swagger
