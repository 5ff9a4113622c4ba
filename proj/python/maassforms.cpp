// Python bindings for the main operations: parameter optimization, ball
// arithmetic views, test functions, traces, and the staged pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maass/fricke.hpp"
#include "maass/pipeline.hpp"

namespace py = pybind11;
using namespace maass;

namespace {

py::dict ball_dict(const Ball& b) {
    py::dict d;
    d["mid"] = b.mid_d();
    d["rad"] = b.rad_d();
    d["mid_str"] = b.mid_string();
    d["rad_str"] = b.rad_string();
    return d;
}

}  // namespace

PYBIND11_MODULE(maassforms, m) {
    m.doc() = "rigorous Maass cusp form computations for squarefree level";

    py::class_<OptimizedParams>(m, "OptimizedParams")
        .def_readonly("R_max", &OptimizedParams::R_max)
        .def_readonly("X", &OptimizedParams::X)
        .def_readonly("d", &OptimizedParams::d)
        .def_readonly("twoB", &OptimizedParams::twoB)
        .def("__repr__", [](const OptimizedParams& p) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "OptimizedParams(R_max=%.5f, X=%.5f, d=%d, 2B=%.2f)", p.R_max, p.X,
                          p.d, p.twoB);
            return std::string(buf);
        });

    m.def("optimize_params", &optimize_params, py::arg("level"), py::arg("forms"), py::arg("d_max"),
          "test-function parameters (R_max, X, d, 2B) for a level/form-count/discriminant budget");
    m.def("kronecker", &kronecker, py::arg("d"), py::arg("m"));
    m.def("decompose_discriminant", [](long D) {
        Discriminant dec = decompose_discriminant(D);
        return py::make_tuple(dec.d, dec.l);
    });
    m.def("class_record", [](long d) {
        ClassRecord r = compute_class_record(d);
        py::dict out;
        out["d"] = r.d;
        out["h"] = r.h;
        out["w"] = r.w;
        out["L1"] = ball_dict(r.L1);
        if (r.d > 0) out["regulator"] = ball_dict(r.reg);
        return out;
    });
    m.def("sato_tate_density", &sato_tate_density, py::arg("p"), py::arg("x"),
          "mu_p density at x; p = 0 means p = infinity");
    m.def(
        "eval_h",
        [](double X, int d, double r) {
            TestFunctionPackage pkg = make_package(X, d);
            return ball_dict(pkg.h_eval_r(Ball::exact(r)));
        },
        py::arg("X"), py::arg("d"), py::arg("r"), "h_d(X r / d) as a mid/rad enclosure");
    m.def("set_precision", [](long bits) { precision::set_default_bits(bits); });

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("level", &RunConfig::level)
        .def_readwrite("M", &RunConfig::M)
        .def_readwrite("n_max", &RunConfig::n_max)
        .def_readwrite("D_max", &RunConfig::D_max)
        .def_readwrite("prec", &RunConfig::prec)
        .def_readwrite("parity", &RunConfig::parity)
        .def_readwrite("threads", &RunConfig::threads)
        .def_readwrite("cache_dir", &RunConfig::cache_dir)
        .def_readwrite("force", &RunConfig::force)
        .def_readwrite("verbose", &RunConfig::verbose);

    py::class_<Pipeline>(m, "Pipeline")
        .def(py::init<RunConfig>())
        .def("run", &Pipeline::run, py::arg("stage"))
        .def("run_all", &Pipeline::run_all)
        .def("params", &Pipeline::params)
        .def("working_prec", &Pipeline::working_prec)
        .def("trace",
             [](Pipeline& p, long n) {
                 TraceTable& t = p.traces(0);
                 return ball_dict(t.get(n));
             })
        .def("forms", [](Pipeline& p) {
            py::list out;
            for (const VerifiedForm& f : p.load_forms()) {
                py::dict d;
                d["level"] = f.level;
                d["parity"] = f.parity;
                d["lambda"] = ball_dict(f.lambda);
                d["R"] = ball_dict(f.R());
                d["epsilon"] = ball_dict(f.epsilon);
                d["delta"] = ball_dict(f.delta);
                d["complete"] = f.complete;
                d["fricke_w"] = f.fricke_w;
                d["signs_rigorous"] = f.signs_rigorous;
                py::dict a;
                for (auto& [n, v] : f.a) a[py::int_(n)] = ball_dict(v);
                d["a"] = a;
                py::dict signs;
                for (auto& [pp, s] : f.signs) signs[py::int_(pp)] = s;
                d["signs"] = signs;
                out.append(d);
            }
            return out;
        });
}
