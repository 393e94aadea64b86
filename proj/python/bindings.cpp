#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swagger/error.hpp"
#include "swagger/experiments.hpp"

namespace py = pybind11;
using namespace swagger;

namespace {

py::dict result_dict(const SolveResult& r) {
  py::dict d;
  d["x"] = r.x_hat;
  d["iterations"] = r.iterations;
  d["status"] = to_string(r.status);
  d["constraint_residual"] = r.constraint_residual;
  d["multiplier"] = r.multiplier;
  d["objective_trace"] = r.objective_trace;
  return d;
}

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["support_pct"] = m.support_pct;
  d["jacard"] = m.jacard;
  d["mse_in_support"] = m.mse_in_support;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SWAGGER structured sparsity";

  static py::exception<Error> swagger_error(m, "SwaggerError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = static_cast<const py::object&>(swagger_error)(e.what());
      err.attr("code") = to_string(e.code());
      PyErr_SetObject(swagger_error.ptr(), err.ptr());
    }
  });

  py::class_<StructureMatrix>(m, "StructureMatrix")
      .def_static("custom", &StructureMatrix::custom, py::arg("entries"))
      .def_property_readonly("dim", &StructureMatrix::dim)
      .def_property_readonly("kind", [](const StructureMatrix& s) { return to_string(s.kind()); })
      .def("dense", &StructureMatrix::dense)
      .def("validate", [](const StructureMatrix& s) { return validate(s).summary(); })
      .def("__repr__", [](const StructureMatrix& s) {
        return "<StructureMatrix " + std::string(to_string(s.kind())) + " " + std::to_string(s.dim()) + ">";
      });

  m.def("one_sparse", &build_one_sparse, py::arg("dim"));
  m.def("block_group", &build_block_group, py::arg("num_groups"), py::arg("group_size"));
  m.def(
      "local_neighborhood",
      [](Index dim, Index n, double near, double far) { return build_local_neighborhood(dim, n, BandWeights::ramp(near, far)); },
      py::arg("dim"), py::arg("n"), py::arg("near") = 1.0, py::arg("far") = 1.0);
  m.def("random_structure", &build_random, py::arg("dim"), py::arg("density"), py::arg("seed"));

  m.def("penalty", py::overload_cast<const StructureMatrix&, const Vector&>(&eval), py::arg("s"), py::arg("x"),
        "|x|^T S |x|");
  m.def(
      "decompose",
      [](const StructureMatrix& s, const Vector& x) {
        const auto d = eval_decomposed(s, x);
        py::dict out;
        out["l1sq"] = d.l1sq;
        out["l2sq"] = d.l2sq;
        out["overlap"] = d.overlap;
        out["value"] = d.value();
        return out;
      },
      py::arg("s"), py::arg("x"));
  m.def(
      "cnc_shift", [](const StructureMatrix& s, const Matrix& a, double lambda) { return cnc_shift(s, a, lambda).c; },
      py::arg("s"), py::arg("a"), py::arg("lambda_"));

  m.def("prox_l1sq", &prox_l1sq, py::arg("z"), py::arg("lambda_"), "argmin_q 1/2||z - q||^2 + lambda/2 ||q||_1^2");
  m.def("soft_threshold", &soft_threshold, py::arg("z"), py::arg("tau"));
  m.def("p_shrink", &p_shrink, py::arg("z"), py::arg("lambda_"), py::arg("p"));

  m.def(
      "solve",
      [](const Matrix& a, const Vector& y, const StructureMatrix& s, std::optional<double> lambda, bool accelerated,
         bool nonneg, int max_iters, std::optional<double> step_multiplier) {
        Problem p = lambda ? Problem::regularized(LinearOperator::dense(a), y, PenaltyConfig::canonical(s), *lambda)
                           : Problem::constrained(LinearOperator::dense(a), y, PenaltyConfig::canonical(s));
        p.nonneg = nonneg;
        SolverOptions o;
        o.accelerated = accelerated;
        o.max_iters = max_iters;
        o.step_multiplier = step_multiplier;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve_swagger_constrained(p, o);
        }
        return result_dict(r);
      },
      py::arg("a"), py::arg("y"), py::arg("s"), py::arg("lambda_") = py::none(), py::arg("accelerated") = false,
      py::arg("nonneg") = false, py::arg("max_iters") = 5000, py::arg("step_multiplier") = py::none(),
      "Constrained SWAGGER when lambda_ is None, regularized otherwise.");

  m.def("generate_structured_x", [](const StructureMatrix& s, std::uint64_t seed) { return generate_structured_x(s, seed); },
        py::arg("s"), py::arg("seed"));
  m.def(
      "synthesize_measurement",
      [](const Vector& x, std::uint64_t seed, Index n_obs, double snr_db) {
        auto meas = synthesize_measurement(x, seed, n_obs, snr_db);
        return py::make_tuple(meas.a, meas.y, meas.sigma);
      },
      py::arg("x"), py::arg("seed"), py::arg("n_obs") = 25, py::arg("snr_db") = 25.0);
  m.def(
      "metrics",
      [](const Vector& x_true, const Vector& x_hat, double tol) { return metrics_dict(compute_metrics(x_true, x_hat, tol)); },
      py::arg("x_true"), py::arg("x_hat"), py::arg("support_tol") = 1e-4);

  m.def(
      "bench",
      [](const std::string& structure, int trials, std::uint64_t seed, int jobs) {
        TrialSpec spec;
        spec.structure = parse_bench_structure(structure);
        spec.trials = trials;
        spec.seed = seed;
        spec.jobs = jobs;
        TrialReport report;
        {
          py::gil_scoped_release release;
          report = run_table1(spec);
        }
        py::list rows;
        for (const auto& s : report.summary) {
          py::dict row = metrics_dict(s.mean);
          row["method"] = to_string(s.method);
          row["tuning"] = to_string(s.tuning);
          row["trials"] = s.trials;
          rows.append(row);
        }
        return rows;
      },
      py::arg("structure") = "group", py::arg("trials") = 10, py::arg("seed") = 1, py::arg("jobs") = 1,
      "Mean metrics per method and tuning mode.");

  m.def(
      "lntv_denoise_1d",
      [](const Vector& y, Index n, double lambda_lntv, double lambda_tv, double near, double far) {
        LntvOptions o;
        o.lambda_lntv = lambda_lntv;
        o.lambda_tv = lambda_tv;
        o.weights = BandWeights::ramp(near, far);
        SignalResult r;
        {
          py::gil_scoped_release release;
          r = lntv_denoise_1d(y, n, o);
        }
        py::dict d = result_dict(r.solve);
        d["x"] = r.x;
        return d;
      },
      py::arg("y"), py::arg("n"), py::arg("lambda_lntv") = 1.0, py::arg("lambda_tv") = 0.0, py::arg("near") = 1.0,
      py::arg("far") = 1.0);
  m.def(
      "lntv_deblur_2d",
      [](const Matrix& observed, double blur_sigma, Index blur_radius, Index n, double lambda_lntv, double lambda_tv,
         double kappa, double near, double far) {
        Image img{observed.rows(), observed.cols(), Eigen::Map<const Vector>(observed.data(), observed.size())};
        Lntv2dOptions o;
        o.lambda_lntv = lambda_lntv;
        o.lambda_tv = lambda_tv;
        o.kappa = kappa;
        o.weights = BandWeights::ramp(near, far);
        ImageResult r;
        {
          py::gil_scoped_release release;
          r = lntv_deblur_2d(img, GaussianKernel{blur_sigma, blur_radius}, n, o);
        }
        py::dict d = result_dict(r.solve);
        d["x"] = Matrix(Eigen::Map<const Matrix>(r.image.pixels.data(), r.image.height, r.image.width));
        return d;
      },
      py::arg("observed"), py::arg("blur_sigma") = 1.0, py::arg("blur_radius") = 2, py::arg("n") = 3,
      py::arg("lambda_lntv") = 0.003, py::arg("lambda_tv") = 0.01, py::arg("kappa") = 0.75, py::arg("near") = 1.0,
      py::arg("far") = 0.5);
  m.def(
      "blur",
      [](const Matrix& image, double sigma, Index radius) {
        const Vector out = blur_operator(image.rows(), image.cols(), GaussianKernel{sigma, radius})
                               .apply(Eigen::Map<const Vector>(image.data(), image.size()));
        return Matrix(Eigen::Map<const Matrix>(out.data(), image.rows(), image.cols()));
      },
      py::arg("image"), py::arg("sigma") = 1.0, py::arg("radius") = 2);
}
