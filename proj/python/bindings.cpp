#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "cocycle/asym.hpp"
#include "cocycle/family_io.hpp"
#include "cocycle/presets.hpp"
#include "cocycle/regularity.hpp"
#include "cocycle/thouless.hpp"

namespace py = pybind11;
using namespace cocycle;

namespace {

py::dict estimate(const ScalarEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["std_error"] = e.std_error;
    d["n"] = e.n_steps;
    d["samples"] = e.n_samples;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = COCYCLE_VERSION;

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<AffineFamily>(m, "Family")
        .def_static("preset", &make_preset, py::arg("name"), py::arg("seed") = 1)
        .def_static("from_json", [](const std::string& s) { return family_from_json(nlohmann::json::parse(s)); })
        .def_static("load", &load_family)
        .def("to_json", [](const AffineFamily& f) { return family_to_json(f).dump(); })
        .def("save", [](const AffineFamily& f, const std::string& p) { save_family(f, p); })
        .def_property_readonly("kappa", &AffineFamily::kappa)
        .def_property_readonly("bernoulli", &AffineFamily::bernoulli_base)
        .def("matrix", [](const AffineFamily& f, uint32_t s, double t) {
            if (s >= static_cast<uint32_t>(f.kappa())) throw py::index_error("symbol out of range");
            Mat2d a = evaluate(f, s, t);
            return std::vector<std::vector<double>>{{a.a11, a.a12}, {a.a21, a.a22}};
        });

    m.def("preset_names", &preset_names);

    m.def(
        "check_assumptions",
        [](const AffineFamily& f, double J_lo, double J_hi, int t_points) {
            AssumptionOptions o;
            o.J_lo = J_lo;
            o.J_hi = J_hi;
            o.t_points = t_points;
            AssumptionReport r = check_assumptions(f, o);
            py::dict d;
            d["invertibility"] = r.invertibility.holds;
            d["winding_sign"] = r.winding.sign;
            d["dominated_splitting"] = r.dominated_splitting.holds;
            d["rank1"] = r.dominated_splitting.rank1;
            d["c_star"] = r.strict_winding.c_star;
            d["all_hold"] = r.all_hold();
            return d;
        },
        py::arg("family"), py::arg("J_lo") = -3.0, py::arg("J_hi") = 3.0, py::arg("t_points") = 101);

    m.def(
        "lyapunov",
        [](const AffineFamily& f, cplx t, size_t n, size_t samples, int workers, uint64_t stream_offset) {
            McOptions o;
            o.workers = workers;
            o.stream_offset = stream_offset;
            py::gil_scoped_release nogil;
            auto e = lyapunov(f, t, n, samples, o);
            py::gil_scoped_acquire gil;
            return estimate(e);
        },
        py::arg("family"), py::arg("t"), py::arg("n") = 10000, py::arg("samples") = 100, py::arg("workers") = 0,
        py::arg("stream_offset") = 0);

    m.def("lyapunov_B_exact", &lyapunov_rank1_exact, py::arg("family"));

    m.def(
        "rotation",
        [](const AffineFamily& f, const std::vector<double>& ts, size_t n, size_t samples, const std::string& conv,
           int workers) {
            RotationOptions o;
            o.convention = parse_convention(conv);
            o.workers = workers;
            RhoGrid g;
            {
                py::gil_scoped_release nogil;
                g = rotation_grid(f, ts, n, samples, o);
            }
            py::dict d;
            d["t"] = g.t;
            d["rho"] = g.rho;
            d["se"] = g.se;
            d["rel_se"] = g.rel_se;
            d["guard_flags"] = g.guard_flags;
            return d;
        },
        py::arg("family"), py::arg("t"), py::arg("n") = 10000, py::arg("samples") = 50,
        py::arg("convention") = "polar", py::arg("workers") = 0);

    m.def(
        "roots",
        [](const AffineFamily& f, const std::vector<uint32_t>& word, double v_angle, double w_angle) {
            return roots_of_entry(f, word, dir(v_angle), dir(w_angle)).roots;
        },
        py::arg("family"), py::arg("word"), py::arg("v_angle") = 0.0, py::arg("w_angle") = 0.0);

    m.def(
        "trace_roots", [](const AffineFamily& f, const std::vector<uint32_t>& word) { return trace_roots(f, word).roots; },
        py::arg("family"), py::arg("word"));

    m.def(
        "winding_length",
        [](const AffineFamily& f, const std::vector<uint32_t>& word, double v_angle) {
            return winding_length_line(word_orbit(f, word), dir(v_angle)).length;
        },
        py::arg("family"), py::arg("word"), py::arg("v_angle") = 0.0);

    m.def(
        "thouless",
        [](const AffineFamily& f, cplx t, size_t n, size_t samples, const std::string& source, int workers) {
            ThoulessOptions o;
            o.n = n;
            o.samples = samples;
            o.workers = workers;
            if (source == "roots")
                o.source = DrhoSource::Roots;
            else if (source == "rotation")
                o.source = DrhoSource::Rotation;
            else
                throw DomainError("source must be 'roots' or 'rotation'");
            ThoulessReport r;
            {
                py::gil_scoped_release nogil;
                r = thouless_residual(f, t, o);
            }
            py::dict d;
            d["lhs"] = r.lhs.value;
            d["lhs_se"] = r.lhs.std_error;
            d["l1b"] = r.l1b;
            d["l1b_method"] = r.l1b_method;
            d["potential"] = r.potential;
            d["residual"] = r.residual;
            d["residual_se"] = r.residual_se;
            return d;
        },
        py::arg("family"), py::arg("t"), py::arg("n") = 10000, py::arg("samples") = 400,
        py::arg("source") = "rotation", py::arg("workers") = 0);

    m.def(
        "tangency",
        [](const AffineFamily& f, double t0, int max_len) -> py::object {
            auto r = tangency_finder(f, t0, max_len);
            if (!r) return py::none();
            py::dict d;
            d["found"] = r->found;
            d["distance"] = r->distance;
            d["B"] = r->B;
            d["C"] = r->C;
            d["A"] = r->A;
            return d;
        },
        py::arg("family"), py::arg("t0") = 0.0, py::arg("max_len") = 6);

    m.def(
        "matchings",
        [](const AffineFamily& f, double gamma, int k, double J_lo, double J_hi, double max_step) {
            MatchingOptions o;
            o.max_step = max_step;
            MatchingResult r;
            {
                py::gil_scoped_release nogil;
                r = detect_matchings(f, gamma, k, J_lo, J_hi, o);
            }
            py::list events;
            for (const auto& e : r.events) events.append(event_to_json_line(e));
            py::dict d;
            d["mu_sigma"] = r.mu_sigma;
            d["words"] = r.words;
            d["events"] = events;
            return d;
        },
        py::arg("family"), py::arg("gamma"), py::arg("k"), py::arg("J_lo"), py::arg("J_hi"),
        py::arg("max_step") = 0.0);
}
