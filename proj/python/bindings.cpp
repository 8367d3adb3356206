#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "slmc/distance.hpp"
#include "slmc/error.hpp"
#include "slmc/experiments.hpp"
#include "slmc/kde.hpp"
#include "slmc/monte_carlo.hpp"
#include "slmc/opinion.hpp"

namespace py = pybind11;
using namespace slmc;

namespace {

FusionVarianceTerm parse_term(const std::string& s) {
  if (s == "matched") return FusionVarianceTerm::kMomentMatched;
  if (s == "printed") return FusionVarianceTerm::kAsPrinted;
  throw Error(ErrorCode::kInvalidConfig, "fusion variance term must be 'matched' or 'printed'");
}

ExperimentConfig make_config(const std::string& op, const std::string& start,
                             std::vector<std::size_t> samples, std::size_t reps, std::size_t grid,
                             std::size_t l_min, std::size_t l_max, std::uint64_t seed, double eps,
                             const std::string& fusion_variance) {
  ExperimentConfig cfg;
  if (op != "product" && op != "fusion") throw Error(ErrorCode::kInvalidConfig, "bad operator");
  if (start != "opinion" && start != "pdf") throw Error(ErrorCode::kInvalidConfig, "bad start");
  cfg.op = op == "fusion" ? Operator::kFusion : Operator::kProduct;
  cfg.start = start == "pdf" ? Start::kPdf : Start::kOpinion;
  cfg.n_samples = std::move(samples);
  cfg.n_reps = reps;
  cfg.m_integration = grid;
  cfg.l_min = l_min;
  cfg.l_max = l_max;
  cfg.seed = seed;
  cfg.eps_clamp = eps;
  cfg.fusion_term = parse_term(fusion_variance);
  return cfg;
}

template <class Writer, class T>
std::string to_text(Writer w, const T& value) {
  std::ostringstream os;
  w(os, value);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_slmc, m) {
  m.doc() = "Subjective-logic operators and Monte Carlo density comparison";

  // Leaked on purpose: the translator may run during interpreter shutdown.
  static py::handle error_type = py::exception<Error>(m, "SlmcError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error_type(e.what());
      exc.attr("code") = std::string(error_code_name(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<BinomialOpinion>(m, "Opinion")
      .def(py::init([](double b, double d, double u, double a) {
             return BinomialOpinion{b, d, u, a};
           }),
           py::arg("b"), py::arg("d"), py::arg("u"), py::arg("a"))
      .def_readwrite("b", &BinomialOpinion::b)
      .def_readwrite("d", &BinomialOpinion::d)
      .def_readwrite("u", &BinomialOpinion::u)
      .def_readwrite("a", &BinomialOpinion::a)
      .def_static("vacuous", &BinomialOpinion::vacuous, py::arg("prior") = 0.5)
      .def("projected", &project_probability)
      .def("is_valid", [](const BinomialOpinion& o) { return validate_opinion(o).ok(); })
      .def("__repr__", [](const BinomialOpinion& o) { return to_string(o); });

  py::class_<BetaParams>(m, "Beta")
      .def(py::init([](double a, double b) { return BetaParams{a, b}; }), py::arg("alpha"),
           py::arg("beta"))
      .def_readwrite("alpha", &BetaParams::alpha)
      .def_readwrite("beta", &BetaParams::beta)
      .def("pdf", [](const BetaParams& p, double z) { return beta_density(p, z); })
      .def("moments", [](const BetaParams& p) {
        const auto mm = beta_moments(p);
        return py::make_tuple(mm.mu, mm.sigma2);
      });

  m.def(
      "opinion_to_beta",
      [](const BinomialOpinion& o, double w) { return opinion_to_beta(o, MappingConstant(w)); },
      py::arg("opinion"), py::arg("w") = 2.0);
  m.def(
      "beta_to_opinion",
      [](const BetaParams& p, double prior, double w) {
        return beta_to_opinion(p, prior, MappingConstant(w));
      },
      py::arg("beta"), py::arg("prior"), py::arg("w") = 2.0);
  m.def("multiply", &multiply, py::arg("x"), py::arg("y"));
  m.def(
      "multiply_many", [](const std::vector<BinomialOpinion>& ops) { return multiply_many(ops); },
      py::arg("opinions"));
  m.def(
      "fuse",
      [](const BinomialOpinion& x, const BinomialOpinion& y, double w, const std::string& term) {
        return fuse(x, y, MappingConstant(w), parse_term(term));
      },
      py::arg("x"), py::arg("y"), py::arg("w") = 2.0, py::arg("variance") = "matched");

  m.def(
      "beta_from_moments",
      [](double mu, double sigma2) { return beta_from_moments({mu, sigma2}); }, py::arg("mean"),
      py::arg("variance"));
  m.def(
      "product_moments",
      [](const BetaParams& x, const BetaParams& y) {
        const auto mm = product_moments_analytic(beta_moments(x), beta_moments(y));
        return py::make_tuple(mm.mu, mm.sigma2);
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "sample_beta",
      [](const BetaParams& p, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
        return sample_beta(p, n, RngSeed{seed, stream}).values;
      },
      py::arg("beta"), py::arg("n"), py::arg("seed") = 1, py::arg("stream") = 0);
  m.def(
      "kde_density",
      [](const std::vector<double>& samples, const std::vector<double>& zs, double eps) {
        const auto model = fit_logit_kde(samples, eps);
        return kde_density(model, zs);
      },
      py::arg("samples"), py::arg("z"), py::arg("eps") = kDefaultEpsClamp);
  m.def("kde_bias_bound", &kde_bias_bound, py::arg("n"));
  m.def(
      "beta_distance",
      [](const BetaParams& p, const BetaParams& q, std::size_t m, std::uint64_t seed) {
        const auto r = integral_distance(beta_evaluator(p, "p"), beta_evaluator(q, "q"), m,
                                         RngSeed{seed, 0});
        return py::make_tuple(r.value, r.std_error);
      },
      py::arg("p"), py::arg("q"), py::arg("m") = kDefaultIntegrationPoints, py::arg("seed") = 1);

  // Experiment runners return the same CSV text the command line tool writes.
  auto study_kwargs = [](auto fn) {
    return [fn](const std::string& op, const std::string& start, std::vector<std::size_t> samples,
                std::size_t reps, std::size_t grid, std::size_t l_min, std::size_t l_max,
                std::uint64_t seed, double eps, const std::string& fv) {
      const auto study = fn(make_config(op, start, std::move(samples), reps, grid, l_min, l_max,
                                        seed, eps, fv));
      return py::make_tuple(to_text(write_aggregates_csv, study.aggregates),
                            to_text(write_records_csv, study.records));
    };
  };
  const auto add_study = [&](const char* name, auto fn, const char* op) {
    m.def(name, study_kwargs(fn), py::arg("operator") = op, py::arg("start") = "opinion",
          py::arg("samples") = std::vector<std::size_t>{}, py::arg("reps") = 100,
          py::arg("grid") = kDefaultIntegrationPoints, py::arg("l_min") = 2, py::arg("l_max") = 5,
          py::arg("seed") = 1, py::arg("eps") = kDefaultEpsClamp,
          py::arg("fusion_variance") = "matched",
          "Returns (aggregates_csv, records_csv).");
  };
  add_study("quantitative", &run_quantitative, "product");
  add_study("limit_case", &run_limit_case, "product");
  add_study("multi_product", &run_multi_product, "product");
  m.def(
      "qualitative",
      [](const std::string& op, const std::string& start, std::size_t samples, std::size_t grid,
         std::uint64_t seed, double eps, const std::string& fv) {
        auto cfg = make_config(op, start, {samples}, 1, grid, 2, 5, seed, eps, fv);
        return to_text(write_density_csv, run_qualitative(cfg));
      },
      py::arg("operator") = "product", py::arg("start") = "opinion",
      py::arg("samples") = kQualitativeSamples, py::arg("grid") = kDefaultIntegrationPoints,
      py::arg("seed") = 1, py::arg("eps") = kDefaultEpsClamp,
      py::arg("fusion_variance") = "matched", "Returns the density table as CSV text.");
}
