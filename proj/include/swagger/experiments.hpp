#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swagger/solvers.hpp"

namespace swagger {

// ---------------------------------------------------------------------------
// Ground truth and measurements

struct GenerateOptions {
  double step = 0.1;        ///< proximal subgradient step on |x|^T S |x|
  double cleanup = 1e-6;    ///< magnitudes below this are set to zero
  double mu_tol = 1e-8;     ///< stop once |x|^T S |x| < mu_tol
  int max_iters = 10000;
  double magnitude_lo = 0.5;
  double magnitude_hi = 1.5;
};

/// Random vector whose support fits S exactly (|x|^T S |x| == 0), nonzero
/// magnitudes drawn from U(0.5, 1.5) with random signs. Throws generation.
Vector generate_structured_x(const StructureMatrix& s, std::uint64_t seed, const GenerateOptions& opts = {});

struct Measurement {
  Matrix a;
  Vector y;
  double sigma = 0.0;
};

/// A ~ N(0, 1) entries, y = Ax + sigma * N(0, I) at the requested SNR.
Measurement synthesize_measurement(const Vector& x, std::uint64_t seed, Index n_obs = 25, double snr_db = 25.0);

/// Seed of an independent random substream for (seed, trial, stream).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

// ---------------------------------------------------------------------------
// Metrics and tuning

struct Metrics {
  double support_pct = 0.0;     ///< 100 |est & true| / |true|
  double jacard = 0.0;          ///< |est & true| / |est | true|
  double mse_in_support = 0.0;  ///< mean squared error over the true support
};

Index support_size(const Vector& x, double support_tol);

/// Throws undefined-metrics when x_true has an empty support.
Metrics compute_metrics(const Vector& x_true, const Vector& x_hat, double support_tol = 1e-4);

enum class TuningMode { sparsity_level, jacard };

const char* to_string(TuningMode mode) noexcept;

/// Index of the chosen solution. Solutions are ordered by ascending lambda;
/// ties resolve to the smaller lambda.
std::size_t tune_lambda(const std::vector<Vector>& solutions, const Vector& x_true, TuningMode mode,
                        double support_tol = 1e-4);

// ---------------------------------------------------------------------------
// Synthetic comparison harness

enum class BenchStructure { group, local_neighborhood, random };
enum class Method { swagger, elasso, pshrink, lasso };

const char* to_string(BenchStructure s) noexcept;
const char* to_string(Method m) noexcept;
BenchStructure parse_bench_structure(const std::string& name);

inline constexpr Method kMethods[] = {Method::swagger, Method::elasso, Method::pshrink, Method::lasso};
inline constexpr TuningMode kTuningModes[] = {TuningMode::sparsity_level, TuningMode::jacard};

/// `count` points log-spaced over [lo, hi], ascending.
std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> default_lambda_grid();

struct TrialSpec {
  Index n_obs = 25;
  Index n_vars = 60;
  double snr_db = 25.0;
  BenchStructure structure = BenchStructure::group;
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<double> lambda_grid = default_lambda_grid();
  double support_tol = 1e-4;
  double pshrink_p = 0.5;
  int jobs = 1;
  /// constrained: one solve shared by every grid point; regularized: grid lambda is the strength.
  Mode swagger_mode = Mode::constrained;
  double swagger_multiplier_step = 0.03;  ///< alpha_lambda for constrained SWAGGER
  SolverOptions solver;  ///< shared by every method

  /// Throws range on invalid fields.
  void check() const;
};

struct MethodOutcome {
  Metrics metrics;
  double lambda = 0.0;
};

struct TrialRecord {
  int trial = 0;
  bool skipped = false;
  std::string skip_reason;
  Index true_support = 0;
  /// [method][tuning mode], in kMethods / kTuningModes order.
  MethodOutcome outcome[4][2];
  /// SWAGGER Jacard at every grid lambda (flatness diagnostics).
  std::vector<double> swagger_jacard_by_lambda;
};

struct Summary {
  Method method;
  TuningMode tuning;
  Metrics mean;
  Metrics stderr_;
  int trials = 0;
};

struct TrialReport {
  TrialSpec spec;
  std::vector<TrialRecord> records;
  std::vector<Summary> summary;  ///< method-major, then tuning mode
  int skipped = 0;

  const Summary& find(Method m, TuningMode t) const;
};

struct TrialInstance {
  StructureMatrix s;
  Vector x;
  Matrix a;
  Vector y;
};

/// Structure, ground truth and measurement of one trial. Throws generation.
TrialInstance trial_instance(const TrialSpec& spec, int trial);

/// Solutions of one method along the lambda grid.
std::vector<Vector> solve_path(Method method, const Matrix& a, const Vector& y, const StructureMatrix& s,
                               const TrialSpec& spec);

TrialReport run_table1(const TrialSpec& spec);

// ---------------------------------------------------------------------------
// Local-neighbourhood total variation

struct LntvOptions {
  double lambda_lntv = 1.0;   ///< lambda_1, strength of |Dx|^T S |Dx|
  double lambda_tv = 0.0;     ///< lambda_2, strength of ||Dx||_1
  BandWeights weights = BandWeights::constant(1.0);
  double rho = 1.0;
  SolverOptions solver = default_lntv_solver();

  static SolverOptions default_lntv_solver();
};

struct SignalResult {
  Vector x;
  SolveResult solve;
};

/// min 1/2||x - y||^2 + lambda_1 |Dx|^T S |Dx| + lambda_2 ||Dx||_1, S banded with width n.
SignalResult lntv_denoise_1d(const Vector& y, Index n, const LntvOptions& opts);

/// Indices i with |x_{i+1} - x_i| > tol.
std::vector<Index> change_points(const Vector& x, double tol = 1e-4);

/// Smallest distance between consecutive change points (max Index when fewer than two).
Index min_change_gap(const Vector& x, double tol = 1e-4);

struct GaussianKernel {
  double sigma = 1.0;
  Index radius = 3;  ///< kernel is (2r+1) x (2r+1)
};

/// Image stored column-major, height x width.
struct Image {
  Index height = 0;
  Index width = 0;
  Vector pixels;

  double& at(Index r, Index c) { return pixels(r + c * height); }
  double at(Index r, Index c) const { return pixels(r + c * height); }
};

/// Convolution with a normalized Gaussian kernel, replicated borders. Radius 0 is identity.
LinearOperator blur_operator(Index height, Index width, const GaussianKernel& kernel);

struct Lntv2dOptions {
  double lambda_lntv = 1.0;
  double lambda_tv = 0.0;
  double kappa = 0.75;
  BandWeights weights = BandWeights::constant(1.0);
  double rho = 1.0;
  SolverOptions solver = LntvOptions::default_lntv_solver();
};

struct ImageResult {
  Image image;
  SolveResult solve;
};

/// Deconvolution with horizontal and vertical LN-TV (phi = |.|^kappa) plus anisotropic TV.
ImageResult lntv_deblur_2d(const Image& observed, const GaussianKernel& blur, Index n, const Lntv2dOptions& opts);

double mse(const Vector& a, const Vector& b);
/// Peak 1.
double psnr(const Vector& reference, const Vector& estimate);

}  // namespace swagger
