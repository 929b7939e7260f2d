#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlat/acceptance.hpp"
#include "qlat/experiments.hpp"
#include "qlat/obstruction.hpp"
#include "qlat/spectra.hpp"

namespace py = pybind11;
using namespace qlat;

namespace {

ChainGeometry geometry(int sites, int dim, const std::string& boundary) {
    return ChainGeometry(sites, dim, boundary_from_string(boundary));
}

HamiltonianSpec model(const std::string& name, int sites, int dim, const std::string& boundary, int j, int k,
                      std::uint64_t seed) {
    ModelSpec m;
    m.name = name;
    m.j = j;
    m.k = k;
    const auto specs = build_models({m}, geometry(sites, dim, boundary), seed);
    return specs.front();
}

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

py::dict table_dict(const ResultTable& t) {
    py::dict d = json_to_py(t.to_json());
    d["csv"] = t.to_csv();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-chain probes of asymptotic abelianness";
    m.attr("__version__") = code_version();
    m.attr("schema_version") = kSchemaVersion;

    py::register_exception<Error>(m, "QlatError");

    m.def("weyl_matrix", [](int r1, int r2, int d) { return weyl_matrix(WeylIndex(r1, r2, d)); },
          py::arg("r1"), py::arg("r2"), py::arg("d"));
    m.def("commutation_phase",
          [](int a1, int a2, int b1, int b2, int d) { return commutation_phase({a1, a2, d}, {b1, b2, d}); },
          py::arg("a1"), py::arg("a2"), py::arg("b1"), py::arg("b2"), py::arg("d"));

    m.def("list_models", [] {
        std::vector<std::string> out;
        for (const auto& info : model_catalog()) out.push_back(info.name);
        return out;
    });
    m.def(
        "hamiltonian",
        [](const std::string& name, int sites, int dim, const std::string& boundary, int j, int k, std::uint64_t seed) {
            return assemble(model(name, sites, dim, boundary, j, k, seed)).dense();
        },
        py::arg("name"), py::arg("sites"), py::arg("dim") = 2, py::arg("boundary") = "periodic", py::arg("j") = 0,
        py::arg("k") = 1, py::arg("seed") = 0);

    m.def(
        "obstruction",
        [](const std::string& name, int sites, int site, int dim, const std::string& boundary, int j, int k,
           std::uint64_t seed) {
            const auto r = obstruction(model(name, sites, dim, boundary, j, k, seed), site);
            py::dict d;
            d["model"] = r.model;
            d["site"] = r.site;
            d["obs_norm"] = r.obs_norm;
            d["obs_hs"] = r.obs_hs;
            d["block_sum"] = r.block_sum;
            d["min_eigenvalue"] = r.min_eigenvalue;
            d["classification"] = std::string(to_string(r.classification));
            return d;
        },
        py::arg("name"), py::arg("sites"), py::arg("site") = 0, py::arg("dim") = 2, py::arg("boundary") = "periodic",
        py::arg("j") = 0, py::arg("k") = 1, py::arg("seed") = 0);

    m.def(
        "covariance_defect",
        [](const std::string& name, int sites, double g, int dim, int j, int k) {
            const auto spec = model(name, sites, dim, "periodic", j, k, 0);
            return covariance_defect(spec, {default_twist_generator(spec, j, k), {}, g}).max_defect;
        },
        py::arg("name"), py::arg("sites"), py::arg("g"), py::arg("dim") = 2, py::arg("j") = 0, py::arg("k") = 1);

    m.def(
        "evolve",
        [](const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& a, double t, int dim) {
            int sites = 0;
            for (Eigen::Index n = 1; n < h.rows(); n *= dim) ++sites;
            const ChainGeometry g(std::max(sites, 1), dim);
            require(g.hilbert_dim() == h.rows(), "evolve: matrix size is not a power of dim");
            const Propagator p(LatticeOperator(g, Matrix(h)));
            return p.evolve_matrix(a, t);
        },
        py::arg("h"), py::arg("a"), py::arg("t"), py::arg("dim") = 2,
        "tau_t(a) = e^{iht} a e^{-iht} for a chain Hamiltonian given as a dense matrix");

    m.def(
        "light_cone",
        [](const std::string& name, int sites, const std::vector<int>& xs, const std::vector<double>& ts) {
            const ChainGeometry g(sites, 2);
            const Propagator p(assemble(model(name, sites, 2, "periodic", 0, 1, 0)));
            const LatticeOperator x0 = embed_at(pauli_x(), 0, g);
            return light_cone_scan(p, x0, x0, xs, ts).values;
        },
        py::arg("name"), py::arg("sites"), py::arg("xs"), py::arg("ts"),
        "||[tau_t(X_x), X_0]|| for x in xs (columns) and t in ts (rows)");

    m.def("parse_config", [](const std::string& text) { return serialize_config(parse_config_string(text)); },
          py::arg("yaml"), "Fully resolved config document");
    m.def("config_hash", [](const std::string& text) { return config_hash(parse_config_string(text)); },
          py::arg("yaml"));
    m.def(
        "run",
        [](const std::string& text) {
            const auto cfg = parse_config_string(text);
            ResultTable t;
            {
                py::gil_scoped_release nogil;
                t = run_experiment(cfg);
            }
            return table_dict(t);
        },
        py::arg("yaml"), "Run an experiment config; returns columns, rows, summary, provenance and csv text");
    m.def(
        "run_and_write",
        [](const std::string& text, const std::string& output) {
            auto cfg = parse_config_string(text);
            if (!output.empty()) cfg.output = output;
            py::gil_scoped_release nogil;
            return run_and_write(cfg);
        },
        py::arg("yaml"), py::arg("output") = "");
    m.def(
        "verify",
        [](const std::string& suite, const std::string& config_dir) {
            AcceptanceOptions opts;
            opts.config_dir = config_dir;
            std::vector<CriterionResult> results;
            {
                py::gil_scoped_release nogil;
                results = run_acceptance(suite, opts);
            }
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("suite") = "all", py::arg("config_dir") = "configs/acceptance");
}
