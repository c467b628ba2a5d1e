#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>

#include "sigma/artifact_io.hpp"
#include "sigma/errors.hpp"
#include "sigma/foliation_core.hpp"
#include "sigma/hs_dynamics.hpp"
#include "sigma/oracle_verify.hpp"
#include "sigma/phase_analysis.hpp"
#include "sigma/profile_curves.hpp"

namespace py = pybind11;
using namespace sigma;

namespace {

py::array_t<std::complex<double>> to_complex(const ComplexPoint& p) {
    py::array_t<std::complex<double>> out(p.dim());
    auto v = out.mutable_unchecked<1>();
    for (int i = 0; i < p.dim(); ++i) v(i) = {p.re(i), p.im(i)};
    return out;
}

py::dict phase_dict(const PhaseResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["divergent"] = r.divergent;
    d["error_estimate"] = r.error_estimate;
    d["plus"] = r.plus ? py::cast(*r.plus) : py::none();
    d["minus"] = r.minus ? py::cast(*r.minus) : py::none();
    return d;
}

Vec direction(const FoliatedSpec& spec, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != spec.n()) throw ValidationError("x: expected n components");
    return normalize_direction(Eigen::Map<const Vec>(x.data(), spec.n()));
}

FormulaVariant variant_of(const std::string& s) {
    if (s == "geometric") return FormulaVariant::Geometric;
    if (s == "alternate") return FormulaVariant::Alternate;
    throw ValidationError("variant: expected geometric or alternate");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lagrangian submanifolds foliated by round spheres";

    // translators run newest first: bad input becomes ValueError, any other
    // library failure SigmaError
    py::register_exception<Error>(m, "SigmaError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<FoliatedSpec>(m, "FoliatedSpec")
        .def_property_readonly("n", &FoliatedSpec::n)
        .def_property_readonly("name", &FoliatedSpec::name)
        .def_property_readonly("domain", [](const FoliatedSpec& s) { return py::make_tuple(s.domain().lo, s.domain().hi); })
        .def_property_readonly("centered", &FoliatedSpec::centered)
        .def("__repr__", [](const FoliatedSpec& s) { return "<FoliatedSpec " + s.name() + " n=" + std::to_string(s.n()) + ">"; });

    m.def("preset_names", &preset_names);
    m.def("make_preset", &make_preset, py::arg("name"), py::arg("params") = std::map<std::string, double>{});
    m.def("random_spec", &random_spec, py::arg("n"), py::arg("seed"), py::arg("centered") = false);

    m.def("profile", [](const FoliatedSpec& spec, double s) {
        const auto st = eval_profile(spec.curve(), s);
        py::dict d;
        d["r"] = st.r;
        d["phi"] = st.phi;
        d["theta"] = st.theta;
        d["alpha"] = st.alpha;
        d["k"] = st.k;
        return d;
    });
    m.def("immersion", [](const FoliatedSpec& spec, double s, const std::vector<double>& x) {
        return to_complex(eval_immersion(spec, s, direction(spec, x)));
    });
    m.def("lagrangian_angle", [](const FoliatedSpec& spec, double s, const std::vector<double>& x) {
        return lagrangian_angle(spec, s, direction(spec, x));
    });
    m.def(
        "mean_curvature",
        [](const FoliatedSpec& spec, double s, const std::vector<double>& x, const std::string& variant) {
            const Vec d = direction(spec, x);
            const auto cd = mean_curvature_coeffs(spec, s, tangent_frame(d), variant_of(variant));
            const auto db = delta_beta_poly_f(spec, s, d, variant_of(variant));
            py::dict out;
            out["a"] = cd.a;
            out["a_j"] = Vec(cd.aj);
            out["B"] = cd.B;
            out["f"] = db.f;
            out["delta_beta"] = db.delta_beta;
            return out;
        },
        py::arg("spec"), py::arg("s"), py::arg("x"), py::arg("variant") = "geometric");

    m.def(
        "verify",
        [](const FoliatedSpec& spec, int samples, std::uint64_t seed) {
            const auto plan = make_sample_plan(spec.n(), spec.domain(), samples, seed);
            py::list out;
            for (const auto& c : verify_spec(spec, plan)) {
                py::dict d;
                d["check"] = c.check;
                d["pass"] = c.pass;
                d["sup"] = c.sup;
                d["tol"] = c.tol;
                d["samples"] = c.samples;
                out.append(d);
            }
            return out;
        },
        py::arg("spec"), py::arg("samples") = 20, py::arg("seed") = 1);

    m.def(
        "mesh",
        [](const FoliatedSpec& spec, int s_steps, int sphere_steps, bool slice) {
            const Mesh mesh = sample_mesh(spec, s_steps, sphere_steps, slice);
            py::array_t<double> V({mesh.vertices.size(), static_cast<std::size_t>(2 * mesh.n)});
            auto v = V.mutable_unchecked<2>();
            for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
                for (std::size_t j = 0; j < mesh.vertices[i].size(); ++j) v(i, j) = mesh.vertices[i][j];
            py::array_t<std::uint32_t> F({mesh.faces.size(), std::size_t{3}});
            auto f = F.mutable_unchecked<2>();
            for (std::size_t i = 0; i < mesh.faces.size(); ++i)
                for (int j = 0; j < 3; ++j) f(i, j) = mesh.faces[i][j];
            return py::make_tuple(V, F);
        },
        py::arg("spec"), py::arg("s_steps") = 16, py::arg("sphere_steps") = 16, py::arg("slice") = false);

    // -- orbits
    m.def("energy", [](int n, double C, double alpha, double r) { return energy({alpha, r}, HSParams(n, C)); });
    m.def("critical_energy", [](int n, double C) { return critical_energy(HSParams(n, C)); });
    m.def("fixed_point", [](int n, double C) {
        const auto fp = fixed_points(HSParams(n, C));
        return py::make_tuple(fp.state.alpha, fp.state.r, fp.E0);
    });
    m.def("classify", [](int n, double C, double E) {
        std::vector<std::string> tags;
        for (auto t : classify(HSParams(n, C), E).components) tags.push_back(to_string(t));
        return tags;
    });
    m.def(
        "integrate",
        [](int n, double C, double alpha, double r, double s_end, int samples) {
            if (samples < 2) throw ValidationError("samples: at least 2");
            const auto norm = normalize_flux(n, C, {alpha, r});
            const auto t = integrate(norm.params, norm.state, 0.0, s_end);
            const double hi = t.s_hi(), lo = t.s_lo();
            const double start = s_end >= 0 ? lo : hi, stop = s_end >= 0 ? hi : lo;
            py::array_t<double> out({static_cast<std::size_t>(samples), std::size_t{4}});
            auto o = out.mutable_unchecked<2>();
            for (int i = 0; i < samples; ++i) {
                const double s = start + (stop - start) * i / (samples - 1);
                const auto y = t.state_at(s);
                o(i, 0) = s;
                o(i, 1) = y.alpha;
                o(i, 2) = y.r;
                o(i, 3) = energy(y, norm.params);
            }
            py::dict d;
            d["table"] = out;
            d["termination"] = to_string(t.termination());
            d["max_energy_drift"] = t.max_energy_drift();
            d["reversed"] = norm.reversed;
            return d;
        },
        py::arg("n"), py::arg("C"), py::arg("alpha"), py::arg("r"), py::arg("s_end"), py::arg("samples") = 201);

    // -- phase
    m.def("phi_type1_lambda", [](int n, double lambda) { return phase_dict(phi_type1_lambda(n, lambda)); });
    m.def("phi_type2", [](int n, double C, double E) { return phase_dict(phi_type2_energy(HSParams(n, C), E)); });
    m.def("phi_type3", [](int n, double C, double E) { return phase_dict(phi_type3(HSParams(n, C), E)); });
    m.def(
        "phase",
        [](int n, double C, double E, bool bounded) { return phase_dict(phase_for_energy(HSParams(n, C), E, bounded)); },
        py::arg("n"), py::arg("C"), py::arg("E"), py::arg("bounded") = false);
    m.def("closure", [](double phi) {
        const auto c = closure_test(phi);
        return py::make_tuple(c.closes, c.p, c.q);
    });
    m.def("catalog", [](int n, double C) {
        py::list out;
        for (const auto& e : catalog_rows(HSParams(n, C))) {
            py::dict d;
            d["family"] = to_string(e.family);
            d["orbit"] = to_string(e.tag);
            d["E"] = e.E;
            d["phase"] = phase_dict(e.phi);
            d["embedded"] = e.embedded ? py::cast(*e.embedded) : py::none();
            d["self_intersections"] = e.crossings.size();
            out.append(d);
        }
        return out;
    });

    m.def("cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "sigma");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return cli_main(static_cast<int>(argv.size()), argv.data());
    });
}
