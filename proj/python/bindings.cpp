#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epr/axis.hpp"
#include "epr/correlate.hpp"
#include "epr/density.hpp"
#include "epr/mc.hpp"
#include "epr/qstate.hpp"
#include "epr/teleport.hpp"

namespace py = pybind11;
using namespace epr;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Entangled and disentangled EPR pair probabilities, Monte Carlo and fitting";

    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
    py::register_exception<NonIdentifiableFit>(m, "NonIdentifiableFit", PyExc_RuntimeError);

    py::enum_<Sign>(m, "Sign").value("Plus", Sign::Plus).value("Minus", Sign::Minus);
    py::enum_<Geometry>(m, "Geometry")
        .value("Sphere3D", Geometry::Sphere3D)
        .value("PlanePhoton", Geometry::PlanePhoton);
    py::enum_<BellKind>(m, "BellKind")
        .value("SingletMinus", BellKind::SingletMinus)
        .value("TripletPlus", BellKind::TripletPlus)
        .value("PhiPlus", BellKind::PhiPlus)
        .value("PhiMinus", BellKind::PhiMinus);
    py::enum_<ExperimentKind>(m, "ExperimentKind")
        .value("GisinPhase", ExperimentKind::GisinPhase)
        .value("InnsbruckDip", ExperimentKind::InnsbruckDip)
        .value("KimAnalyzer", ExperimentKind::KimAnalyzer);

    py::class_<UnitAxis>(m, "UnitAxis")
        .def(py::init<double, double>(), py::arg("theta"), py::arg("phi"))
        .def_static("in_plane", &UnitAxis::in_plane, py::arg("phi"))
        .def_static("from_vector", [](double x, double y, double z) { return UnitAxis::from_vector(Vec3(x, y, z)); })
        .def_property_readonly("theta", &UnitAxis::theta)
        .def_property_readonly("phi", &UnitAxis::phi)
        .def_property_readonly("vec", [](const UnitAxis& a) { return Eigen::Vector3d(a.vec()); })
        .def("__repr__", [](const UnitAxis& a) {
            return "UnitAxis(theta=" + std::to_string(a.theta()) + ", phi=" + std::to_string(a.phi()) + ")";
        });

    py::class_<Model>(m, "Model")
        .def_static("entangled", &Model::entangled)
        .def_static("disentangled", &Model::disentangled)
        .def_static("mixture", &Model::mixture, py::arg("lambda_"))
        .def_property_readonly("lambda_", &Model::lambda);

    py::class_<OutcomeProbs>(m, "OutcomeProbs")
        .def_readonly("pp", &OutcomeProbs::pp)
        .def_readonly("pm", &OutcomeProbs::pm)
        .def_readonly("mp", &OutcomeProbs::mp)
        .def_readonly("mm", &OutcomeProbs::mm)
        .def("correlation", &OutcomeProbs::correlation);

    // qstate / density: states come back as numpy arrays.
    m.def("make_spinor", [](const UnitAxis& a, Sign s) { return Eigen::Vector2cd(make_spinor(a, s).vector()); });
    m.def("pauli_axis_matrix", &pauli_axis_matrix);
    m.def("entangled_pair_state", [](double t, double p1, double p2) {
        return Eigen::Vector4cd(entangled_pair_state(t, p1, p2).vector());
    });
    m.def("bell_state", [](BellKind k) { return Eigen::Vector4cd(bell_state(k).vector()); });
    m.def("singlet_fidelity", [](const Eigen::Vector4cd& v) { return singlet_fidelity(TwoSpinState(v)); });
    m.def("epr_density", [] { return Eigen::MatrixXcd(epr_density().matrix()); });
    m.def(
        "conditional_collapse",
        [](const UnitAxis& a, Sign s, int particle) {
            return Eigen::MatrixXcd(conditional_collapse(epr_density(), a, s, particle).matrix());
        },
        py::arg("axis"), py::arg("sign"), py::arg("particle"),
        "Conditional state of the singlet after projecting `particle` onto `sign`.");

    // correlate
    m.def("entangled_joint_probs", &entangled_joint_probs, py::arg("a"), py::arg("b"), py::arg("doubled") = false);
    m.def("entangled_correlation", &entangled_correlation, py::arg("a"), py::arg("b"), py::arg("doubled") = false);
    m.def("subensemble_correlation", &subensemble_correlation, py::arg("p_hat"), py::arg("a"), py::arg("b"),
          py::arg("doubled") = false);
    m.def("averaged_correlation", &averaged_correlation, py::arg("a"), py::arg("b"), py::arg("geometry"),
          py::arg("doubled") = false);
    m.def("averaged_joint_probs", &averaged_joint_probs, py::arg("a"), py::arg("b"), py::arg("geometry"),
          py::arg("doubled") = false);
    m.def("disentangled_from_entangled", &disentangled_from_entangled);
    m.def("angle_identity_residual", &angle_identity_residual);
    m.def("chsh", &chsh, py::arg("model"), py::arg("geometry"), py::arg("a"), py::arg("a_prime"), py::arg("b"),
          py::arg("b_prime"), py::arg("doubled") = false);

    // mc
    m.def(
        "run_experiment",
        [](const Model& model, Geometry geometry, const std::vector<std::pair<UnitAxis, UnitAxis>>& pairs,
           std::uint64_t trials, std::uint64_t seed, bool doubled, unsigned shards) {
            ExperimentSpec spec;
            spec.model = model;
            spec.geometry = geometry;
            spec.doubled = doubled;
            for (const auto& [a, b] : pairs) spec.analyzer_pairs.push_back({a, b});
            spec.trials_per_pair = trials;
            spec.seed = seed;
            CoincidenceCounts counts;
            {
                py::gil_scoped_release release;
                counts = run_experiment(spec, shards);
            }
            std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>> out;
            for (const auto& c : counts) out.emplace_back(c.n_pp, c.n_pm, c.n_mp, c.n_mm);
            return out;
        },
        py::arg("model"), py::arg("geometry"), py::arg("analyzer_pairs"), py::arg("trials"), py::arg("seed"),
        py::arg("doubled") = false, py::arg("shards") = 1,
        "Coincidence counts (n_pp, n_pm, n_mp, n_mm) per analyzer pair.");
    m.def(
        "estimate_correlation",
        [](std::uint64_t pp, std::uint64_t pm, std::uint64_t mp, std::uint64_t mm) {
            const CorrelationEstimate e = estimate_correlation(PairCounts{pp, pm, mp, mm});
            return std::make_pair(e.e_hat, e.std_err);
        },
        "(e_hat, std_err) from four coincidence counts.");

    // teleport
    m.def("predict", &predict, py::arg("kind"), py::arg("x"), py::arg("branch"), py::arg("model"));
    m.def(
        "synth_dataset",
        [](ExperimentKind kind, const Model& model, const std::vector<double>& x, std::uint64_t counts,
           std::uint64_t seed, Sign branch) {
            std::vector<std::tuple<double, double, double>> out;
            for (const auto& d : synth_dataset(kind, model, x, counts, seed, branch)) {
                out.emplace_back(d.x, d.rate, d.std_err);
            }
            return out;
        },
        py::arg("kind"), py::arg("model"), py::arg("x"), py::arg("counts"), py::arg("seed"),
        py::arg("branch") = Sign::Plus);
    m.def(
        "fit_mixture",
        [](ExperimentKind kind, const std::vector<std::tuple<double, double, double>>& rows, bool fit_background,
           Sign branch) {
            Dataset data;
            for (const auto& [x, r, s] : rows) data.push_back({x, r, s, branch});
            const FitResult f = fit_mixture(kind, data, fit_background);
            py::dict d;
            d["lambda_hat"] = f.lambda_hat;
            d["amplitude_hat"] = f.amplitude_hat;
            d["background_hat"] = f.background_hat;
            d["sse"] = f.sse;
            d["lambda_err"] = f.lambda_err;
            d["amplitude_err"] = f.amplitude_err;
            d["background_err"] = f.background_err;
            return d;
        },
        py::arg("kind"), py::arg("data"), py::arg("fit_background") = false, py::arg("branch") = Sign::Plus);
}
