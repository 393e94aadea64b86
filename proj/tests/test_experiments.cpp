#include <doctest.h>

#include <set>
#include <sstream>

#include "support.hpp"
#include "swagger/error.hpp"
#include "swagger/experiments.hpp"
#include "swagger/io.hpp"

using namespace swagger;
namespace ts = testing_support;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

template <class F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::io;
}

bool magnitudes_in_range(const Vector& x) {
  for (Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    if (a != 0.0 && (a < 0.5 || a > 1.5)) return false;
  }
  return true;
}

// Anisotropic TV denoising by projected gradient on the dual:
// x = y - D^T p with |p|_inf <= lambda.
Vector tv_denoise_dual(const Vector& y, Index h, Index w, double lambda) {
  const auto dh = LinearOperator::fwd_diff_2d_horizontal(h, w);
  const auto dv = LinearOperator::fwd_diff_2d_vertical(h, w);
  Vector ph = Vector::Zero(dh.rows());
  Vector pv = Vector::Zero(dv.rows());
  const double step = 1.0 / 8.0;
  Vector x = y;
  for (int it = 0; it < 20000; ++it) {
    x = y - dh.apply_transpose(ph) - dv.apply_transpose(pv);
    ph = (ph + step * dh.apply(x)).cwiseMax(-lambda).cwiseMin(lambda);
    pv = (pv + step * dv.apply(x)).cwiseMax(-lambda).cwiseMin(lambda);
  }
  return y - dh.apply_transpose(ph) - dv.apply_transpose(pv);
}

double tv_objective(const Vector& x, const Vector& y, Index h, Index w, double lambda) {
  const auto dh = LinearOperator::fwd_diff_2d_horizontal(h, w);
  const auto dv = LinearOperator::fwd_diff_2d_vertical(h, w);
  return 0.5 * (x - y).squaredNorm() + lambda * (dh.apply(x).lpNorm<1>() + dv.apply(x).lpNorm<1>());
}

TrialSpec small_spec(BenchStructure structure, int trials) {
  TrialSpec spec;
  spec.structure = structure;
  spec.trials = trials;
  spec.seed = 5;
  spec.lambda_grid = log_grid(1e-2, 1.0, 5);
  return spec;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("generator on the one-sparse structure") {
    const auto s = build_one_sparse(4);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Vector x = generate_structured_x(s, seed);
      CHECK(support_size(x, 0.0) == 1);
      CHECK(magnitudes_in_range(x));
      CHECK(eval(s, x) == 0.0);
    }
    CHECK(generate_structured_x(s, 9) == generate_structured_x(s, 9));
  }

  TEST_CASE("generator without exclusivity keeps every entry") {
    const auto s = StructureMatrix::custom(Matrix::Zero(12, 12));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Vector x = generate_structured_x(s, seed);
      CHECK(support_size(x, 0.0) == 12);
      CHECK(magnitudes_in_range(x));
    }
  }

  TEST_CASE("generator output is exactly feasible on the benchmark structures") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      for (const auto& s : {build_block_group(10, 6), build_local_neighborhood(60, 4), build_random(60, 0.5, seed)}) {
        const Vector x = generate_structured_x(s, seed);
        CHECK(eval(s, x) == 0.0);
        CHECK(magnitudes_in_range(x));
        CHECK(support_size(x, 0.0) >= 1);
      }
    }
    CHECK(error_code([] { generate_structured_x(StructureMatrix::custom(-Matrix::Ones(2, 2)), 1); }) ==
          Errc::invalid_structure);
  }

  TEST_CASE("measurement synthesis") {
    double mean_snr = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      const Vector x = generate_structured_x(build_block_group(10, 6), t);
      const auto m = synthesize_measurement(x, 10'000 + t);
      CHECK(m.a.rows() == 25);
      CHECK(m.a.cols() == 60);
      const Vector ax = m.a * x;
      CHECK(m.sigma == doctest::Approx(std::sqrt(ax.squaredNorm() / (25.0 * std::pow(10.0, 2.5)))));
      mean_snr += 10.0 * std::log10(ax.squaredNorm() / (m.y - ax).squaredNorm());
    }
    mean_snr /= trials;
    CHECK(std::abs(mean_snr - 25.0) <= 1.0);

    const auto z = synthesize_measurement(Vector::Zero(60), 3);
    CHECK(z.sigma == 0.0);
    CHECK(z.y.isZero(0.0));

    const Vector x = generate_structured_x(build_one_sparse(60), 4);
    const auto a = synthesize_measurement(x, 77);
    const auto b = synthesize_measurement(x, 77);
    CHECK(a.a == b.a);
    CHECK(a.y == b.y);
    CHECK(substream_seed(1, 2, 3) == substream_seed(1, 2, 3));
    CHECK(substream_seed(1, 2, 3) != substream_seed(1, 3, 2));
  }

  TEST_CASE("metrics") {
    const Vector x = vec({1, -2, 0, 0, 0.7});
    const auto same = compute_metrics(x, x);
    CHECK(same.support_pct == 100.0);
    CHECK(same.jacard == 1.0);
    CHECK(same.mse_in_support == 0.0);

    const auto third = compute_metrics(vec({1, 1, 0}), vec({0, 1, 1}));
    CHECK(third.jacard == doctest::Approx(1.0 / 3.0));
    CHECK(third.support_pct == doctest::Approx(50.0));

    const auto miss = compute_metrics(vec({1, 2, 0, 0}), vec({0, 0, 3, 3}));
    CHECK(miss.support_pct == 0.0);
    CHECK(miss.jacard == 0.0);
    CHECK(miss.mse_in_support == doctest::Approx(2.5));

    CHECK(error_code([] { compute_metrics(Vector::Zero(3), vec({1, 0, 0})); }) == Errc::undefined_metrics);
    CHECK(error_code([] { compute_metrics(vec({1, 0}), vec({1, 0, 0})); }) == Errc::shape);

    // jacard == 1 exactly when supports agree, in both directions.
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
      Vector a = ts::gaussian_vector(rng, 8);
      Vector b = ts::gaussian_vector(rng, 8);
      for (Index i = 0; i < 8; ++i) {
        if (rng() % 2) a(i) = 0.0;
        if (rng() % 2) b(i) = 0.0;
      }
      if (support_size(a, 1e-4) == 0) a(0) = 1.0;
      const bool equal = ((a.array().abs() > 1e-4) == (b.array().abs() > 1e-4)).all();
      CHECK((compute_metrics(a, b).jacard == 1.0) == equal);
    }
  }

  TEST_CASE("lambda tuning") {
    const Vector truth = (Vector(60) << Vector::Ones(10), Vector::Zero(50)).finished();
    auto with_count = [](Index k) {
      Vector v = Vector::Zero(60);
      v.head(k).setOnes();
      return v;
    };
    const std::vector<Vector> sols = {with_count(40), with_count(12), with_count(10), with_count(3)};
    CHECK(tune_lambda(sols, truth, TuningMode::sparsity_level) == 2);
    CHECK(tune_lambda(sols, truth, TuningMode::jacard) == 2);
    const std::vector<Vector> same(4, with_count(5));
    CHECK(tune_lambda(same, truth, TuningMode::sparsity_level) == 0);
    CHECK(tune_lambda(same, truth, TuningMode::jacard) == 0);
  }

  TEST_CASE("grids and names") {
    const auto g = default_lambda_grid();
    CHECK(g.size() == 30);
    CHECK(g.front() == doctest::Approx(1e-3));
    CHECK(g.back() == doctest::Approx(10.0));
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(log_grid(1.0, 100.0, 3)[1] == doctest::Approx(10.0));
    CHECK(parse_bench_structure("local") == BenchStructure::local_neighborhood);
    CHECK(parse_bench_structure("group") == BenchStructure::group);
    CHECK(error_code([] { parse_bench_structure("hexagonal"); }) == Errc::range);
  }

  TEST_CASE("trial spec validation") {
    TrialSpec spec;
    spec.trials = 0;
    CHECK(error_code([&] { spec.check(); }) == Errc::range);
    spec = TrialSpec{};
    spec.lambda_grid = {1.0, 0.1};
    CHECK(error_code([&] { spec.check(); }) == Errc::range);
    spec = TrialSpec{};
    spec.lambda_grid.clear();
    CHECK(error_code([&] { spec.check(); }) == Errc::range);
    spec = TrialSpec{};
    spec.n_vars = 61;
    CHECK(error_code([&] { spec.check(); }) == Errc::range);
  }

  TEST_CASE("one-trial smoke run is deterministic and finite") {
    for (auto structure : {BenchStructure::group, BenchStructure::local_neighborhood, BenchStructure::random}) {
      const auto spec = small_spec(structure, 1);
      const auto a = run_table1(spec);
      const auto b = run_table1(spec);
      REQUIRE(a.summary.size() == 8);
      for (const auto& s : a.summary) {
        CHECK(std::isfinite(s.mean.jacard));
        CHECK(std::isfinite(s.mean.support_pct));
        CHECK(std::isfinite(s.mean.mse_in_support));
        CHECK(s.mean.jacard >= 0.0);
        CHECK(s.mean.jacard <= 1.0);
        CHECK(s.mean.support_pct >= 0.0);
        CHECK(s.mean.support_pct <= 100.0);
        CHECK(s.mean.mse_in_support >= 0.0);
      }
      std::ostringstream ca, cb, ja, jb;
      write_report_csv(ca, a);
      write_report_csv(cb, b);
      write_report_json(ja, a);
      write_report_json(jb, b);
      CHECK(ca.str() == cb.str());
      CHECK(ja.str() == jb.str());
    }
  }

  TEST_CASE("results do not depend on the worker count") {
    auto spec = small_spec(BenchStructure::local_neighborhood, 3);
    spec.jobs = 1;
    const auto a = run_table1(spec);
    spec.jobs = 3;
    const auto b = run_table1(spec);
    std::ostringstream ja, jb;
    spec.jobs = 1;
    TrialReport bb = b;
    bb.spec.jobs = 1;
    write_report_json(ja, a);
    write_report_json(jb, bb);
    CHECK(ja.str() == jb.str());
  }

  TEST_CASE("constrained SWAGGER needs no tuning") {
    auto spec = small_spec(BenchStructure::group, 5);
    spec.lambda_grid = default_lambda_grid();
    const auto r = run_table1(spec);
    std::vector<double> mean(spec.lambda_grid.size(), 0.0);
    int used = 0;
    for (const auto& rec : r.records) {
      if (rec.skipped) continue;
      ++used;
      for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += rec.swagger_jacard_by_lambda[k];
    }
    REQUIRE(used > 0);
    const auto [lo, hi] = std::minmax_element(mean.begin(), mean.end());
    CHECK((*hi - *lo) / used < 0.02);
  }

  TEST_CASE("1-D LN-TV") {
    std::mt19937_64 rng(4);
    const Vector flat = ts::add_noise(rng, Vector::Constant(60, 0.5), 20.0);
    LntvOptions strong;
    strong.lambda_lntv = 50.0;
    strong.lambda_tv = 5.0;
    const auto c = lntv_denoise_1d(flat, 8, strong);
    CHECK(c.x.maxCoeff() - c.x.minCoeff() <= 1e-6);
    CHECK(c.x.mean() == doctest::Approx(flat.mean()).epsilon(1e-6));

    // Pure LN-TV keeps change points at least n apart.
    for (int t = 0; t < 5; ++t) {
      const Vector clean = ts::piecewise_constant(rng, 120, 10, 30);
      const Vector noisy = ts::add_noise(rng, clean, 20.0);
      LntvOptions o;
      o.lambda_lntv = 3.0;
      o.weights = BandWeights::ramp(1.0, 0.5);
      const auto r = lntv_denoise_1d(noisy, 8, o);
      if (r.solve.status == Status::converged) CHECK(min_change_gap(r.x, 1e-3) >= 8);
    }

    LntvOptions off;
    off.lambda_lntv = 0.0;
    CHECK(lntv_denoise_1d(flat, 8, off).x == flat);
    CHECK(error_code([&] { lntv_denoise_1d(Vector::Zero(9), 8, off); }) == Errc::invalid_dimension);
  }

  TEST_CASE("change points") {
    const Vector x = vec({0, 0, 1, 1, 1, 1, 0, 0});
    const auto cp = change_points(x);
    CHECK(cp == std::vector<Index>{1, 5});
    CHECK(min_change_gap(x) == 4);
    CHECK(min_change_gap(Vector::Zero(5)) == std::numeric_limits<Index>::max());
  }

  TEST_CASE("blur operator") {
    const auto id = blur_operator(5, 6, {1.0, 0});
    CHECK(id.is_identity());
    const auto b = blur_operator(8, 9, {1.0, 2});
    CHECK((b.apply(Vector::Ones(72)) - Vector::Ones(72)).cwiseAbs().maxCoeff() <= 1e-12);

    // Interior response to a point source is the normalized Gaussian.
    Vector impulse = Vector::Zero(72);
    impulse(4 + 4 * 8) = 1.0;
    const Vector resp = b.apply(impulse);
    double z = 0.0;
    for (int i = -2; i <= 2; ++i)
      for (int j = -2; j <= 2; ++j) z += std::exp(-(i * i + j * j) / 2.0);
    CHECK(resp(4 + 4 * 8) == doctest::Approx(1.0 / z));
    CHECK(resp(5 + 4 * 8) == doctest::Approx(std::exp(-0.5) / z));
    CHECK(resp(5 + 5 * 8) == doctest::Approx(std::exp(-1.0) / z));
    CHECK(error_code([] { blur_operator(4, 4, {1.0, 3}); }) == Errc::shape);
  }

  TEST_CASE("2-D path without LN-TV is anisotropic TV") {
    std::mt19937_64 rng(5);
    const Index h = 12, w = 10;
    const Image clean = ts::rectangles(rng, h, w, 2);
    const Image noisy{h, w, ts::add_noise(rng, clean.pixels, 15.0)};
    Lntv2dOptions o;
    o.kappa = 1.0;
    o.lambda_lntv = 0.0;
    o.lambda_tv = 0.05;
    o.solver.admm_tol = 1e-8;
    const auto r = lntv_deblur_2d(noisy, {1.0, 0}, 1, o);
    const Vector oracle = tv_denoise_dual(noisy.pixels, h, w, 0.05);
    CHECK(tv_objective(r.image.pixels, noisy.pixels, h, w, 0.05) ==
          doctest::Approx(tv_objective(oracle, noisy.pixels, h, w, 0.05)).epsilon(1e-5));
    CHECK((r.image.pixels - oracle).cwiseAbs().maxCoeff() <= 1e-3);
  }

  TEST_CASE("2-D clean feasible image is a fixed point") {
    std::mt19937_64 rng(6);
    const Image clean = ts::rectangles(rng, 24, 24, 5);
    Lntv2dOptions o;
    o.lambda_lntv = 0.01;
    o.weights = BandWeights::ramp(1.0, 0.5);
    const auto r = lntv_deblur_2d(clean, {1.0, 0}, 3, o);
    CHECK((r.image.pixels - clean.pixels).cwiseAbs().maxCoeff() <= 1e-6);

    const Image tiny{3, 3, Vector::Zero(9)};
    CHECK(error_code([&] { lntv_deblur_2d(tiny, {1.0, 0}, 3, o); }) == Errc::invalid_dimension);
    const Image small{6, 6, Vector::Zero(36)};
    CHECK(error_code([&] { lntv_deblur_2d(small, {1.0, 4}, 1, o); }) == Errc::shape);
  }

  TEST_CASE("image metrics") {
    const Vector a = vec({0, 0.5, 1});
    CHECK(mse(a, a) == 0.0);
    CHECK(mse(a, vec({0, 0.5, 0})) == doctest::Approx(1.0 / 3.0));
    CHECK(psnr(a, vec({0.1, 0.6, 1.1})) == doctest::Approx(20.0));
  }
}
