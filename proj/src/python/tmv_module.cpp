// Python bindings for the curve-variation toolkit.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tmv/workbench.hpp"

namespace py = pybind11;
using namespace tmv;

PYBIND11_MODULE(_tmv, m) {
    m.doc() = "Template-mode-of-variation analysis of sampled curves";

    py::register_exception<Error>(m, "TmvError");

    py::class_<SamplingGrid>(m, "SamplingGrid")
        .def(py::init<std::vector<double>>())
        .def("__len__", &SamplingGrid::size)
        .def_property_readonly("points", &SamplingGrid::points)
        .def_property_readonly("span", &SamplingGrid::span);

    py::class_<SampledCurve>(m, "SampledCurve")
        .def(py::init([](std::string id, std::vector<double> z, double weight) {
                 return SampledCurve{std::move(id), std::move(z), weight};
             }),
             py::arg("id"), py::arg("z"), py::arg("weight") = 1.0)
        .def_readwrite("id", &SampledCurve::id)
        .def_readwrite("z", &SampledCurve::z)
        .def_readwrite("weight", &SampledCurve::weight);

    py::class_<PolynomialTemplate>(m, "PolynomialTemplate")
        .def(py::init<std::vector<double>>())
        .def("value", &PolynomialTemplate::value)
        .def_property_readonly("coefficients", &PolynomialTemplate::coefficients)
        .def_property_readonly("degree", &PolynomialTemplate::degree);

    py::class_<ModeSpec>(m, "ModeSpec")
        .def_readonly("name", &ModeSpec::name)
        .def_static("vertical_shift", &ModeSpec::vertical_shift,
                    py::arg("name") = "vertical")
        .def_static("horizontal_shift", &ModeSpec::horizontal_shift,
                    py::arg("name") = "horizontal")
        .def_static("generalist_specialist", &ModeSpec::generalist_specialist,
                    py::arg("name") = "genspec")
        .def("with_link", &ModeSpec::with_link, py::arg("g"), py::arg("dg"));

    py::class_<Model>(m, "Model")
        .def(py::init<PolynomialTemplate, std::vector<ModeSpec>>())
        .def("eval", &Model::eval)
        .def("velocity", &Model::velocity)
        .def_property_readonly("shape", &Model::shape);

    py::class_<Manifold>(m, "Manifold")
        .def(py::init([](Model model, SamplingGrid grid) {
            return Manifold{std::move(model), std::move(grid)};
        }))
        .def("eval", &Manifold::eval)
        .def_property_readonly("dim", &Manifold::dim);

    py::class_<ArcConfig>(m, "ArcConfig")
        .def(py::init<>())
        .def_readwrite("rel_tol", &ArcConfig::rel_tol)
        .def_readwrite("max_depth", &ArcConfig::max_depth)
        .def_readwrite("polyline_segments", &ArcConfig::polyline_segments);

    m.def("arcdist", &arcdist, py::arg("manifold"), py::arg("mode"), py::arg("a"),
          py::arg("b"), py::arg("fixed"), py::arg("cfg") = ArcConfig{});
    m.def("arcdist_polyline", &arcdist_polyline);
    m.def("arc_coordinate", &arc_coordinate, py::arg("manifold"), py::arg("mode"),
          py::arg("theta_k"), py::arg("origin_k"), py::arg("fixed"),
          py::arg("cfg") = ArcConfig{});

    py::class_<FitConfig>(m, "FitConfig")
        .def(py::init<>())
        .def_readwrite("max_outer_iters", &FitConfig::max_outer_iters)
        .def_readwrite("rel_tol", &FitConfig::rel_tol)
        .def_readwrite("multistart", &FitConfig::multistart)
        .def_readwrite("seed", &FitConfig::seed);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("shape", &FitResult::shape)
        .def_readonly("theta_hat", &FitResult::theta_hat)
        .def_readonly("sse_i", &FitResult::sse_i)
        .def_readonly("sse_trace", &FitResult::sse_trace)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("converged", &FitResult::converged);

    m.def("fit_all", &fit_all, py::arg("curves"), py::arg("grid"), py::arg("degree"),
          py::arg("modes"), py::arg("config") = FitConfig{});
    m.def("normalize_identifiability", &normalize_identifiability, py::arg("fit"),
          py::arg("grid"), py::arg("weights"));

    py::class_<Decomposition>(m, "Decomposition")
        .def_readonly("sse", &Decomposition::sse)
        .def_readonly("mode_names", &Decomposition::mode_names)
        .def_readonly("ssm_per_mode", &Decomposition::ssm_per_mode)
        .def_readonly("ssm_total", &Decomposition::ssm_total)
        .def_readonly("rss_per_mode", &Decomposition::rss_per_mode)
        .def_readonly("rss_total", &Decomposition::rss_total)
        .def_readonly("frechet_mean", &Decomposition::frechet_mean)
        .def_readonly("origin", &Decomposition::origin)
        .def_readonly("gamma", &Decomposition::gamma)
        .def_readonly("degenerate", &Decomposition::degenerate);

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init([](int degree, const std::vector<std::string>& modes, double gamma,
                         std::uint64_t seed, bool weighted_sse) {
                 PipelineConfig p;
                 p.degree = degree;
                 p.modes = make_modes(modes);
                 p.decl = default_declaration(p.modes);
                 p.gamma = gamma;
                 p.fit.seed = seed;
                 p.weighted_sse = weighted_sse;
                 return p;
             }),
             py::arg("degree") = 4,
             py::arg("modes") = std::vector<std::string>{"vertical", "horizontal", "genspec"},
             py::arg("gamma") = 0.5, py::arg("seed") = 1, py::arg("weighted_sse") = false)
        .def_readwrite("degree", &PipelineConfig::degree)
        .def_readwrite("gamma", &PipelineConfig::gamma)
        .def_readwrite("origin_pinned", &PipelineConfig::origin_pinned)
        .def_readwrite("origin", &PipelineConfig::origin);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("fit", &PipelineResult::fit)
        .def_readonly("decomposition", &PipelineResult::decomposition);

    m.def("run_pipeline", &run_pipeline, py::arg("curves"), py::arg("grid"),
          py::arg("config"));

    py::class_<BootstrapSummary::Stats>(m, "BootstrapStats")
        .def_readonly("mean", &BootstrapSummary::Stats::mean)
        .def_readonly("sd", &BootstrapSummary::Stats::sd)
        .def_readonly("median", &BootstrapSummary::Stats::median)
        .def_readonly("p5", &BootstrapSummary::Stats::p5)
        .def_readonly("p95", &BootstrapSummary::Stats::p95);

    py::class_<BootstrapSummary>(m, "BootstrapSummary")
        .def_readonly("quantity", &BootstrapSummary::quantity)
        .def_readonly("stats", &BootstrapSummary::stats)
        .def_readonly("B", &BootstrapSummary::B)
        .def_readonly("failures", &BootstrapSummary::failures);

    m.def("bootstrap", &bootstrap, py::arg("curves"), py::arg("grid"), py::arg("config"),
          py::arg("B"), py::arg("seed"));

    py::class_<ParameterLaw>(m, "ParameterLaw")
        .def(py::init([](std::string kind, double a, double b) {
                 return ParameterLaw{std::move(kind), a, b};
             }),
             py::arg("kind"), py::arg("a"), py::arg("b"))
        .def_readwrite("kind", &ParameterLaw::kind)
        .def_readwrite("a", &ParameterLaw::a)
        .def_readwrite("b", &ParameterLaw::b);

    py::class_<SyntheticSpec>(m, "SyntheticSpec")
        .def(py::init<>())
        .def_readwrite("template_coeffs", &SyntheticSpec::template_coeffs)
        .def_readwrite("mode_kinds", &SyntheticSpec::mode_kinds)
        .def_readwrite("laws", &SyntheticSpec::laws)
        .def_readwrite("noise_sd", &SyntheticSpec::noise_sd)
        .def_readwrite("noise_relative", &SyntheticSpec::noise_relative)
        .def_readwrite("n_curves", &SyntheticSpec::n_curves)
        .def_readwrite("grid_points", &SyntheticSpec::grid_points)
        .def_readwrite("seed", &SyntheticSpec::seed);

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("grid", &SimulationResult::grid)
        .def_readonly("curves", &SimulationResult::curves)
        .def_readonly("true_thetas", &SimulationResult::true_thetas)
        .def_readonly("oracle", &SimulationResult::oracle);

    m.def("simulate", &simulate, py::arg("spec"), py::arg("pipeline"));
    m.def("load_curves", &load_curves, py::arg("path"));
    m.def("save_curves", &save_curves, py::arg("path"), py::arg("grid"), py::arg("curves"));
}
