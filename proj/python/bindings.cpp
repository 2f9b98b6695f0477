#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pwfold/report.hpp"
#include "pwfold/verify.hpp"

namespace py = pybind11;
using namespace pwfold;

namespace {

// Reports go through JSON text; the package decodes them into dicts.
std::string dump(const nlohmann::json& j) { return j.dump(); }

IntegratorConfig integrator_for(const PiecewiseSystem& z) {
    IntegratorConfig cfg;
    cfg.box = z.box;
    return cfg;
}

Side side_of(const std::string& s) {
    if (s == "X") return Side::X;
    if (s == "Y") return Side::Y;
    throw Error(ErrorCode::Precondition, "side must be 'X' or 'Y'");
}

} // namespace

PYBIND11_MODULE(_pwfold, m) {
    m.doc() = "Fold-fold singularities of Filippov systems with a planar switching surface.";

    static py::exception<Error> exc(m, "PwfoldError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::handle(exc.ptr())(e.what());
            inst.attr("code") = py::str(to_string(e.code()));
            PyErr_SetObject(exc.ptr(), inst.ptr());
        }
    });

    py::class_<NormalParameters>(m, "NormalParameters")
        .def(py::init(&NormalParameters::make), py::arg("alpha"), py::arg("beta"), py::arg("gamma"),
             py::arg("delta"))
        .def_readonly("alpha", &NormalParameters::alpha)
        .def_readonly("beta", &NormalParameters::beta)
        .def_readonly("gamma", &NormalParameters::gamma)
        .def_readonly("delta", &NormalParameters::delta)
        .def_property_readonly("subtype", [](const NormalParameters& p) { return to_string(p.subtype); })
        .def("rescaled", &NormalParameters::rescaled)
        .def("__repr__", [](const NormalParameters& p) {
            return "NormalParameters(" + std::to_string(p.alpha) + ", " + std::to_string(p.beta) + ", " +
                   std::to_string(p.gamma) + ", " + std::to_string(p.delta) + ")";
        });

    py::class_<PiecewiseSystem>(m, "System")
        .def_static("from_json", [](const std::string& s) { return load_system(s); })
        .def_static("from_file", [](const std::string& s) { return load_system_file(s); })
        .def_static("normal_form", [](double a, double b, double g, int d) { return build_normal_form(a, b, g, d); },
                    py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("delta"))
        .def_readwrite("name", &PiecewiseSystem::name)
        .def("to_json", [](const PiecewiseSystem& z) { return serialize(z); })
        .def_property_readonly("box", [](const PiecewiseSystem& z) {
            const Box& b = z.box;
            return std::vector<double>{b.xmin, b.xmax, b.ymin, b.ymax, b.zmin, b.zmax};
        });

    m.def("_classify", [](const PiecewiseSystem& z, std::array<double, 3> p, std::optional<double> tol) {
        const Vec3 q{p[0], p[1], p[2]};
        return dump(classify_report(z, q, tol ? *tol : default_tolerance(z)));
    });

    m.def("normal_parameters", [](const PiecewiseSystem& z, std::array<double, 3> p) {
        return normal_parameters(z, {p[0], p[1], p[2]});
    });

    m.def("_verdict", [](const NormalParameters& p) {
        nlohmann::json j = to_json(stability_verdict(p));
        const SlidingRegion r = sliding_region_class(p);
        j["region"] = to_string(r.tag);
        j["claim"] = r.claim;
        return dump(j);
    });

    m.def("region", [](const NormalParameters& p) {
        const SlidingRegion r = sliding_region_class(p);
        return py::make_tuple(to_string(r.tag), r.claim);
    });

    m.def("_return_map", [](const NormalParameters& p) { return dump(to_json(return_map_analysis(p))); });

    m.def("fold_map", [](const PiecewiseSystem& z, const std::string& side, std::array<double, 2> q) {
        const Vec2 r = fold_map_numeric(z, side_of(side), {q[0], q[1]}, integrator_for(z));
        return std::array<double, 2>{r.x, r.y};
    });

    m.def("return_map", [](const PiecewiseSystem& z, std::array<double, 2> q) {
        const Vec2 r = return_map_numeric(z, {q[0], q[1]}, integrator_for(z));
        return std::array<double, 2>{r.x, r.y};
    });

    m.def("_simulate", [](const PiecewiseSystem& z, std::array<double, 3> p0, double T) {
        const Trajectory tr = filippov_trajectory(z, {p0[0], p0[1], p0[2]}, T, integrator_for(z));
        nlohmann::json segs = nlohmann::json::array();
        for (const auto& s : tr.segments) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& q : s.samples) {
                pts.push_back({q.t, q.p.x, q.p.y, q.p.z, q.v.x, q.v.y, q.v.z});
            }
            segs.push_back({{"mode", to_string(s.mode)}, {"event", to_string(s.event)}, {"samples", pts}});
        }
        return dump({{"status", to_string(tr.status)}, {"detail", tr.detail}, {"segments", segs}});
    });

    m.def("_sweep", [](double gamma, int delta, std::array<double, 3> a, std::array<double, 3> b,
                       unsigned threads) {
        SweepSpec spec;
        spec.gamma = gamma;
        spec.delta = delta;
        spec.alpha = {a[0], a[1], static_cast<int>(a[2])};
        spec.beta = {b[0], b[1], static_cast<int>(b[2])};
        std::vector<SweepRow> rows;
        {
            py::gil_scoped_release release;
            rows = sweep(spec, threads);
        }
        std::string csv = sweep_csv_header() + "\n";
        for (const auto& r : rows) csv += to_csv(r) + "\n";
        return csv;
    });

    m.def("_verify", [](const PiecewiseSystem& z, std::vector<std::string> suites, std::array<double, 3> p,
                        std::optional<NormalParameters> expect, std::uint64_t seed, int samples) {
        VerifyOptions o;
        o.suites = std::move(suites);
        o.point = {p[0], p[1], p[2]};
        o.expect = expect;
        o.seed = seed;
        o.samples = samples;
        o.integrator = integrator_for(z);
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r : run_verification(z, o)) {
            out.push_back({{"suite", r.suite},
                           {"property", r.name},
                           {"passed", r.passed},
                           {"residual", r.residual},
                           {"detail", r.detail}});
        }
        return dump(out);
    });
}
