#include "qlat/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "qlat/obstruction.hpp"
#include "qlat/spectra.hpp"

namespace qlat {

namespace fs = std::filesystem;

namespace {

struct Setup {
    ChainGeometry geom;
    PropagatorOptions popts;
    NormOptions nopts;
};

Setup setup(const ExperimentConfig& cfg) {
    return {make_geometry(cfg.geometry), make_propagator_options(cfg.propagator, cfg.precision),
            make_norm_options(cfg.precision, cfg.seed)};
}

void require_config(bool cond, const std::string& msg) {
    if (!cond) throw Error(ErrorKind::InvalidConfig, msg);
}

[[noreturn]] void violation(const std::string& msg) { throw Error(ErrorKind::InvariantViolation, msg); }

}  // namespace

ResultTable run_light_cone(const ExperimentConfig& cfg) {
    const Setup s = setup(cfg);
    require_config(s.geom.sites >= 4, "light_cone: geometry.sites must be at least 4");
    for (int x : cfg.grids.x)
        require_config(x >= 0 && x < s.geom.sites, "light_cone: grids.x value " + std::to_string(x) + " exceeds the chain");
    const LatticeOperator a = build_operator(cfg.observable, s.geom);
    const LatticeOperator b = build_operator(cfg.probe, s.geom);
    ResultTable t("light_cone", {{"model", ""}, {"t", "1/J"}, {"x", "sites"}, {"comm_norm", ""}});
    for (const auto& spec : build_models(cfg.models, s.geom, cfg.seed)) {
        const Propagator p(assemble(spec), s.popts);
        const auto scan = light_cone_scan(p, a, b, cfg.grids.x, cfg.grids.t, s.nopts);
        for (std::size_t it = 0; it < scan.ts.size(); ++it)
            for (std::size_t ix = 0; ix < scan.xs.size(); ++ix)
                t.add_row({spec.name, scan.ts[it], static_cast<long long>(scan.xs[ix]), scan.values[it][ix]});
        t.summary()[spec.name] = {{"method", to_string(p.method())}};
    }
    return t;
}

ResultTable run_obstruction_sweep(const ExperimentConfig& cfg) {
    const Setup s = setup(cfg);
    ResultTable t("obstruction_sweep", {{"model", ""},
                                        {"site", "sites"},
                                        {"obs_norm", "J"},
                                        {"obs_hs", "J"},
                                        {"block_sum", "J^2"},
                                        {"hs_ratio", ""},
                                        {"min_eigenvalue", "J^2"},
                                        {"classification", ""}});
    const double calibrated = calibrate_block_ratio();
    for (const auto& spec : build_models(cfg.models, s.geom, cfg.seed)) {
        const LatticeOperator h = assemble(spec);
        for (int x : cfg.sites) {
            require_config(x >= 0 && x < s.geom.sites, "obstruction_sweep: site out of range");
            const auto r = obstruction(h, x, spec.name);
            const double scale = std::max(1.0, h.hs_norm() * h.hs_norm());
            if (r.min_eigenvalue < -1e-9 * scale)
                violation("obstruction: P H^(1-P) H^ P has negative eigenvalue " + format_double(r.min_eigenvalue));
            const double ratio = r.block_sum > 0.0 && r.classification == Coupling::Coupled
                                     ? r.obs_hs * r.obs_hs / r.block_sum
                                     : std::nan("");
            t.add_row({spec.name, static_cast<long long>(x), r.obs_norm, r.obs_hs, r.block_sum, ratio,
                       r.min_eigenvalue, std::string(to_string(r.classification))});
        }
    }
    t.summary()["calibrated_hs_ratio"] = calibrated;
    return t;
}

ResultTable run_twist_covariance(const ExperimentConfig& cfg) {
    const Setup s = setup(cfg);
    ResultTable t("twist_covariance", {{"model", ""}, {"g", ""}, {"max_defect", "J"}, {"bonds", ""}});
    for (const auto& m : cfg.models) {
        for (const auto& spec : build_models({m}, s.geom, cfg.seed)) {
            TwistSpec tw;
            tw.generator = cfg.twist.generator ? local_operator(*cfg.twist.generator, s.geom.dim)
                                               : default_twist_generator(spec, m.j, m.k);
            tw.weights = cfg.twist.weights;
            for (double g : cfg.grids.g) {
                tw.g = g;
                const auto d = covariance_defect(spec, tw, s.nopts);
                t.add_row({spec.name, g, d.max_defect, static_cast<long long>(d.per_bond.size())});
            }
        }
    }
    return t;
}

ResultTable run_spectrum(const ExperimentConfig& cfg) {
    const Setup s = setup(cfg);
    const std::string probe_label = "overlap";
    ResultTable t("spectrum", {{"model", ""}, {"eigenvalue", "J"}, {"multiplicity", ""}, {"overlap", ""}});
    const LatticeOperator probe = build_operator(cfg.observable, s.geom);
    for (const auto& spec : build_models(cfg.models, s.geom, cfg.seed)) {
        const auto rep = generator_spectrum(spec, {{probe_label, probe}}, cfg.geometry.dense_cap);
        if (rep.difference_set_error > 1e-8)
            violation("spectrum: eigenvalues of H^ deviate from the difference set by " +
                      format_double(rep.difference_set_error));
        if (rep.zero_dim < s.geom.hilbert_dim()) violation("spectrum: zero multiplicity below d^L");
        for (std::size_t i = 0; i < rep.levels.size(); ++i)
            t.add_row({spec.name, rep.levels[i], static_cast<long long>(rep.multiplicities[i]),
                       rep.overlaps[0].weights[i]});
        t.summary()[spec.name] = {{"zero_dim", rep.zero_dim},
                                  {"zero_overlap", rep.overlaps[0].zero_overlap},
                                  {"difference_set_error", rep.difference_set_error},
                                  {"negation_asymmetry", rep.negation_asymmetry},
                                  {"mean_spacing_ratio", rep.mean_spacing_ratio}};
    }
    return t;
}

ResultTable run_return_to_equilibrium(const ExperimentConfig& cfg) {
    const Setup s = setup(cfg);
    const LatticeOperator a = build_operator(cfg.observable, s.geom);
    const LatticeOperator b = build_operator(cfg.perturbation, s.geom);
    ResultTable t("return_to_equilibrium", {{"model", ""},
                                            {"t", "1/J"},
                                            {"value_re", ""},
                                            {"value_im", ""},
                                            {"cesaro_re", ""},
                                            {"cesaro_im", ""}});
    for (const auto& spec : build_models(cfg.models, s.geom, cfg.seed)) {
        const auto r = return_to_equilibrium(spec, b, a, cfg.grids.t);
        for (std::size_t i = 0; i < r.ts.size(); ++i)
            t.add_row({spec.name, r.ts[i], r.series[i].real(), r.series[i].imag(), r.running[i].real(),
                       r.running[i].imag()});
        t.summary()[spec.name] = {{"tracial_re", r.tracial.real()},
                                  {"tracial_im", r.tracial.imag()},
                                  {"limit_re", r.limit.real()},
                                  {"limit_im", r.limit.imag()},
                                  {"offset", r.offset},
                                  {"limit_offset", r.limit_offset},
                                  {"floor", r.floor},
                                  {"band", r.band},
                                  {"horizon", r.horizon},
                                  {"offset_over_floor", r.floor > 0.0 ? r.offset / r.floor : std::nan("")}};
    }
    return t;
}

ResultTable run_projector_dynamics(const ExperimentConfig& cfg) {
    const Setup s = setup(cfg);
    const GnsVector v(build_operator(cfg.observable, s.geom));
    ResultTable t("projector_dynamics", {{"model", ""}, {"site", "sites"}, {"t", "1/J"}, {"leakage", ""}});
    for (const auto& spec : build_models(cfg.models, s.geom, cfg.seed)) {
        const Propagator p(assemble(spec), s.popts);
        for (int x : cfg.sites) {
            require_config(x >= 0 && x < s.geom.sites, "projector_dynamics: site out of range");
            const auto leak = projector_leakage(p, x, v, cfg.grids.t);
            for (std::size_t i = 0; i < leak.size(); ++i)
                t.add_row({spec.name, static_cast<long long>(x), cfg.grids.t[i], leak[i]});
        }
    }
    return t;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ResultTable t;
    if (cfg.experiment == "light_cone") t = run_light_cone(cfg);
    else if (cfg.experiment == "obstruction_sweep") t = run_obstruction_sweep(cfg);
    else if (cfg.experiment == "twist_covariance") t = run_twist_covariance(cfg);
    else if (cfg.experiment == "spectrum") t = run_spectrum(cfg);
    else if (cfg.experiment == "return_to_equilibrium") t = run_return_to_equilibrium(cfg);
    else if (cfg.experiment == "projector_dynamics") t = run_projector_dynamics(cfg);
    else throw Error(ErrorKind::InvalidConfig, "unknown experiment '" + cfg.experiment + "'");
    t.config_hash = config_hash(cfg);
    t.code_version = code_version();
    t.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return t;
}

std::string run_and_write(const ExperimentConfig& cfg) {
    const ResultTable t = run_experiment(cfg);
    const std::string stem = (fs::path(cfg.output) / cfg.experiment).string();
    write_table(t, stem);
    write_atomic(stem + ".config.yaml", serialize_config(cfg));
    return stem + ".csv";
}

// -- sweeps -----------------------------------------------------------------

namespace {

void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i, const YAML::Node& value) {
    if (i + 1 == parts.size()) {
        node[parts[i]] = value;
        return;
    }
    set_path(node[parts[i]], parts, i + 1, value);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

std::string flow(const YAML::Node& n) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::Flow << n;
    return e.c_str();
}

std::map<std::string, SweepCell> load_index(const std::string& path) {
    std::map<std::string, SweepCell> out;
    std::ifstream in(path);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split(line, '\t');
        if (f.size() != 4) continue;
        out[f[0]] = {f[0], f[1], f[2], f[3]};
    }
    return out;
}

std::string index_text(const std::vector<SweepCell>& cells) {
    std::ostringstream os;
    os << "# schema_version: " << kSchemaVersion << "; sweep index (tab separated)\n";
    os << "hash\tlabel\tstatus\tcsv\n";
    for (const auto& c : cells) os << c.hash << '\t' << c.label << '\t' << c.status << '\t' << c.csv << '\n';
    return os.str();
}

}  // namespace

std::vector<std::pair<std::string, ExperimentConfig>> expand_sweep(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("config: YAML syntax error: ") + e.what());
    }
    if (!root.IsMap()) throw Error(ErrorKind::InvalidConfig, "config: expected a mapping");
    std::vector<std::pair<std::string, std::vector<YAML::Node>>> axes;
    YAML::Node base = YAML::Clone(root);
    if (root["sweep"]) {
        const YAML::Node sw = root["sweep"];
        if (!sw.IsMap()) throw Error(ErrorKind::InvalidConfig, "sweep: expected a mapping of key paths to lists");
        for (const auto& kv : sw) {
            const auto key = kv.first.as<std::string>();
            if (!kv.second.IsSequence() || kv.second.size() == 0)
                throw Error(ErrorKind::InvalidConfig, "sweep." + key + ": expected a non-empty list");
            std::vector<YAML::Node> vals;
            for (const auto& v : kv.second) vals.push_back(v);
            axes.emplace_back(key, std::move(vals));
        }
        base.remove("sweep");
    }
    std::vector<std::pair<std::string, ExperimentConfig>> out;
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        YAML::Node cell = YAML::Clone(base);
        std::string label;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const YAML::Node& v = axes[a].second[idx[a]];
            set_path(cell, split(axes[a].first, '.'), 0, YAML::Clone(v));
            label += (a ? ";" : "") + axes[a].first + "=" + flow(v);
        }
        out.emplace_back(label, parse_config(cell));
        // odometer, last axis fastest
        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < axes[a].second.size()) break;
            idx[a] = 0;
            if (a == 0) return out;
        }
        if (axes.empty()) return out;
    }
}

SweepResult run_sweep(const std::string& config_path, const SweepOptions& opts) {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read config file '" + config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    auto cells = expand_sweep(ss.str());
    require_config(!cells.empty(), "sweep: no cells");
    const std::string root = opts.output.empty() ? cells.front().second.output : opts.output;

    SweepResult res;
    res.index_path = (fs::path(root) / "index.tsv").string();
    const auto previous = load_index(res.index_path);
    res.cells.resize(cells.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto& cfg = cells[i].second;
        if (opts.seed) cfg.seed = *opts.seed;
        if (!opts.precision.empty()) cfg.precision = opts.precision;
        const std::string hash = config_hash(cfg);
        cfg.output = (fs::path(root) / (cfg.experiment + "_" + hash)).string();
        const std::string csv = (fs::path(cfg.output) / (cfg.experiment + ".csv")).string();
        res.cells[i] = {hash, cells[i].first, "pending", csv};
        const auto it = previous.find(hash);
        if (it != previous.end() && (it->second.status == "ok" || it->second.status == "skipped") && fs::exists(csv))
            res.cells[i].status = "skipped";
        else
            todo.push_back(i);
    }

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto publish = [&] { write_atomic(res.index_path, index_text(res.cells)); };
    {
        std::lock_guard<std::mutex> lk(mu);
        publish();
    }
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= todo.size()) return;
            const std::size_t i = todo[k];
            std::string status = "ok";
            try {
                run_and_write(cells[i].second);
            } catch (const Error& e) {
                status = "error:" + std::to_string(exit_code(e.kind()));
            } catch (const std::exception&) {
                status = "error:1";
            }
            std::lock_guard<std::mutex> lk(mu);
            res.cells[i].status = status;
            if (status != "ok") ++res.failures;
            publish();
        }
    };
    const int n = std::max(1, std::min<int>(opts.workers, static_cast<int>(todo.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return res;
}

}  // namespace qlat
