#include "qlat/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qlat/weyl.hpp"

namespace qlat {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    throw Error(ErrorKind::InvalidConfig, (path.empty() ? std::string("config") : path) + ": " + msg);
}

// Map reader that remembers which keys were consumed so leftovers can be
// reported as unknown.
class Section {
public:
    Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.IsMap()) bad(path_, "expected a mapping");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return static_cast<bool>(node_[key]);
    }
    YAML::Node get(const std::string& key) {
        seen_.insert(key);
        return node_[key];
    }
    std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    template <class T>
    T scalar(const std::string& key, const T& fallback) {
        const YAML::Node n = get(key);
        if (!n) return fallback;
        return as<T>(n, path(key));
    }

    void finish() const {
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.count(key)) bad(path(key), "unknown key");
        }
    }

    template <class T>
    static T as(const YAML::Node& n, const std::string& where) {
        if (!n.IsScalar()) bad(where, "expected a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            bad(where, "cannot interpret '" + n.Scalar() + "'");
        }
    }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class T>
std::vector<T> scalar_list(const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence()) bad(where, "expected a list");
    std::vector<T> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(Section::as<T>(n[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

cplx parse_complex(const YAML::Node& n, const std::string& where) {
    if (n.IsScalar()) return {Section::as<double>(n, where), 0.0};
    if (n.IsSequence() && n.size() == 2)
        return {Section::as<double>(n[0], where + "[0]"), Section::as<double>(n[1], where + "[1]")};
    bad(where, "expected a number or [re, im]");
}

MatrixEntries parse_matrix(const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence() || n.size() == 0) bad(where, "expected a non-empty list of rows");
    MatrixEntries m;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::string rw = where + "[" + std::to_string(i) + "]";
        if (!n[i].IsSequence()) bad(rw, "expected a row list");
        std::vector<cplx> row;
        for (std::size_t j = 0; j < n[i].size(); ++j) row.push_back(parse_complex(n[i][j], rw + "[" + std::to_string(j) + "]"));
        if (!m.empty() && row.size() != m[0].size()) bad(rw, "ragged matrix");
        m.push_back(std::move(row));
    }
    if (m.size() != m[0].size()) bad(where, "matrix must be square");
    return m;
}

std::vector<double> parse_real_grid(const YAML::Node& n, const std::string& where) {
    if (n.IsSequence()) return scalar_list<double>(n, where);
    if (n.IsScalar()) return {Section::as<double>(n, where)};
    Section s(n, where);
    const double start = s.scalar<double>("start", 0.0);
    const double stop = s.scalar<double>("stop", start);
    const int num = s.scalar<int>("num", 1);
    s.finish();
    if (num < 1) bad(s.path("num"), "must be at least 1");
    std::vector<double> out;
    for (int i = 0; i < num; ++i) out.push_back(num == 1 ? start : start + (stop - start) * i / (num - 1));
    return out;
}

std::vector<int> parse_int_grid(const YAML::Node& n, const std::string& where) {
    if (n.IsSequence()) return scalar_list<int>(n, where);
    if (n.IsScalar()) return {Section::as<int>(n, where)};
    Section s(n, where);
    const int start = s.scalar<int>("start", 0);
    const int stop = s.scalar<int>("stop", start);
    const int step = s.scalar<int>("step", 1);
    s.finish();
    if (step <= 0) bad(s.path("step"), "must be positive");
    std::vector<int> out;
    for (int v = start; v <= stop; v += step) out.push_back(v);
    return out;
}

OperatorSpec parse_operator(const YAML::Node& n, const std::string& where) {
    Section s(n, where);
    OperatorSpec op;
    op.kind = s.scalar<std::string>("kind", op.kind);
    static const std::set<std::string> kinds = {"identity", "pauli", "weyl", "level", "matrix"};
    if (!kinds.count(op.kind)) bad(s.path("kind"), "unknown operator kind '" + op.kind + "'");
    op.label = s.scalar<std::string>("label", op.kind == "pauli" ? "X" : "");
    if (s.has("r")) op.r = scalar_list<int>(s.get("r"), s.path("r"));
    if (s.has("levels")) op.levels = scalar_list<int>(s.get("levels"), s.path("levels"));
    if (s.has("matrix")) op.matrix = parse_matrix(s.get("matrix"), s.path("matrix"));
    if (s.has("sites")) op.sites = parse_int_grid(s.get("sites"), s.path("sites"));
    if (s.has("site")) op.sites = {s.scalar<int>("site", 0)};
    op.transform = s.scalar<std::string>("transform", op.transform);
    op.coefficient = s.scalar<double>("coefficient", op.coefficient);
    s.finish();

    if (op.kind == "pauli" && op.label != "X" && op.label != "Y" && op.label != "Z")
        bad(s.path("label"), "pauli label must be X, Y or Z");
    if (op.kind == "weyl" && op.r.size() != 2) bad(s.path("r"), "weyl operators need r: [r1, r2]");
    if (op.kind == "level" && op.levels.size() != 2) bad(s.path("levels"), "level operators need levels: [j, k]");
    if (op.kind == "matrix" && op.matrix.empty()) bad(s.path("matrix"), "matrix operators need entries");
    if (op.transform != "none" && op.transform != "exp" && op.transform != "exp_i")
        bad(s.path("transform"), "transform must be none, exp or exp_i");
    if (op.sites.empty()) bad(s.path("sites"), "need at least one site");
    return op;
}

ModelSpec parse_model(const YAML::Node& n, const std::string& where) {
    ModelSpec m;
    if (n.IsScalar()) {
        m.name = Section::as<std::string>(n, where);
    } else {
        Section s(n, where);
        m.name = s.scalar<std::string>("name", m.name);
        m.j = s.scalar<int>("j", m.j);
        m.k = s.scalar<int>("k", m.k);
        if (s.has("on_site")) m.on_site = parse_operator(s.get("on_site"), s.path("on_site"));
        if (s.has("coupling")) m.coupling = parse_matrix(s.get("coupling"), s.path("coupling"));
        m.count = s.scalar<int>("count", m.count);
        s.finish();
    }
    static const std::set<std::string> names = {"heisenberg", "xy", "emch_radin", "exchange", "pair",
                                                "pair_diagonal", "onsite", "custom", "random_onsite",
                                                "random_coupled"};
    if (!names.count(m.name)) bad(where, "unknown model '" + m.name + "'");
    if (m.name == "onsite" && !m.on_site) bad(where, "onsite model needs on_site");
    if (m.name == "custom" && m.coupling.empty()) bad(where, "custom model needs coupling");
    if (m.count < 1) bad(where, "count must be at least 1");
    return m;
}

// -- emission ---------------------------------------------------------------

void emit_complex(YAML::Emitter& e, cplx z) {
    e << YAML::Flow << YAML::BeginSeq << z.real() << z.imag() << YAML::EndSeq;
}

void emit_matrix(YAML::Emitter& e, const MatrixEntries& m) {
    e << YAML::BeginSeq;
    for (const auto& row : m) {
        e << YAML::Flow << YAML::BeginSeq;
        for (cplx z : row) emit_complex(e, z);
        e << YAML::EndSeq;
    }
    e << YAML::EndSeq;
}

template <class T>
void emit_list(YAML::Emitter& e, const std::vector<T>& v) {
    e << YAML::Flow << YAML::BeginSeq;
    for (const auto& x : v) e << x;
    e << YAML::EndSeq;
}

void emit_operator(YAML::Emitter& e, const OperatorSpec& op) {
    e << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << op.kind;
    e << YAML::Key << "label" << YAML::Value << op.label;
    e << YAML::Key << "r" << YAML::Value;
    emit_list(e, op.r);
    e << YAML::Key << "levels" << YAML::Value;
    emit_list(e, op.levels);
    if (!op.matrix.empty()) {
        e << YAML::Key << "matrix" << YAML::Value;
        emit_matrix(e, op.matrix);
    }
    e << YAML::Key << "sites" << YAML::Value;
    emit_list(e, op.sites);
    e << YAML::Key << "transform" << YAML::Value << op.transform;
    e << YAML::Key << "coefficient" << YAML::Value << op.coefficient;
    e << YAML::EndMap;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Matrix pauli_by_label(const std::string& l) {
    if (l == "X") return pauli_x();
    if (l == "Y") return pauli_y();
    return pauli_z();
}

Matrix apply_transform(const Matrix& a, const std::string& transform, double c) {
    if (transform == "none") return c == 1.0 ? a : Matrix(c * a);
    const bool herm = (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-12;
    if (!herm) fail("operator transform '" + transform + "' needs a self-adjoint operator");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    Vector f(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const double l = es.eigenvalues()(i);
        f(i) = transform == "exp" ? cplx(std::exp(c * l), 0.0) : std::exp(cplx(0.0, c * l));
    }
    return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds = {"light_cone", "obstruction_sweep", "twist_covariance",
                                                   "spectrum", "return_to_equilibrium", "projector_dynamics"};
    return kinds;
}

ExperimentConfig parse_config(const YAML::Node& root) {
    Section s(root, "");
    ExperimentConfig c;
    c.experiment = s.scalar<std::string>("experiment", c.experiment);
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.experiment) == kinds.end())
        bad("experiment", "unknown experiment kind '" + c.experiment + "'");
    c.seed = s.scalar<std::uint64_t>("seed", c.seed);
    c.precision = s.scalar<std::string>("precision", c.precision);
    if (c.precision != "double" && c.precision != "high") bad("precision", "must be double or high");
    c.output = s.scalar<std::string>("output", c.output);

    if (s.has("geometry")) {
        Section g(s.get("geometry"), "geometry");
        c.geometry.sites = g.scalar<int>("sites", c.geometry.sites);
        c.geometry.dim = g.scalar<int>("dim", c.geometry.dim);
        c.geometry.boundary = g.scalar<std::string>("boundary", c.geometry.boundary);
        c.geometry.dense_cap = g.scalar<std::int64_t>("dense_cap", c.geometry.dense_cap);
        g.finish();
        if (c.geometry.sites < 1) bad("geometry.sites", "must be at least 1");
        if (c.geometry.dim < 2) bad("geometry.dim", "must be at least 2");
        if (c.geometry.boundary != "open" && c.geometry.boundary != "periodic")
            bad("geometry.boundary", "must be open or periodic");
        if (c.geometry.dense_cap < 1) bad("geometry.dense_cap", "must be positive");
    }
    if (s.has("models")) {
        const YAML::Node m = s.get("models");
        if (!m.IsSequence() || m.size() == 0) bad("models", "expected a non-empty list");
        c.models.clear();
        for (std::size_t i = 0; i < m.size(); ++i) c.models.push_back(parse_model(m[i], "models[" + std::to_string(i) + "]"));
    }
    if (s.has("observable")) c.observable = parse_operator(s.get("observable"), "observable");
    if (s.has("probe")) c.probe = parse_operator(s.get("probe"), "probe");
    if (s.has("perturbation")) c.perturbation = parse_operator(s.get("perturbation"), "perturbation");
    if (s.has("sites")) c.sites = parse_int_grid(s.get("sites"), "sites");
    if (s.has("grids")) {
        Section g(s.get("grids"), "grids");
        if (g.has("x")) c.grids.x = parse_int_grid(g.get("x"), "grids.x");
        if (g.has("t")) c.grids.t = parse_real_grid(g.get("t"), "grids.t");
        if (g.has("g")) c.grids.g = parse_real_grid(g.get("g"), "grids.g");
        g.finish();
    }
    if (s.has("twist")) {
        Section t(s.get("twist"), "twist");
        if (t.has("generator")) {
            const YAML::Node gen = t.get("generator");
            if (gen.IsScalar() && gen.Scalar() == "auto")
                c.twist.generator.reset();
            else
                c.twist.generator = parse_operator(gen, "twist.generator");
        }
        if (t.has("weights")) c.twist.weights = scalar_list<int>(t.get("weights"), "twist.weights");
        t.finish();
    }
    if (s.has("propagator")) {
        Section p(s.get("propagator"), "propagator");
        c.propagator.method = p.scalar<std::string>("method", c.propagator.method);
        c.propagator.krylov_threshold = p.scalar<std::int64_t>("krylov_threshold", c.propagator.krylov_threshold);
        c.propagator.krylov_tol = p.scalar<double>("krylov_tol", c.propagator.krylov_tol);
        c.propagator.krylov_max_dim = p.scalar<int>("krylov_max_dim", c.propagator.krylov_max_dim);
        p.finish();
        if (c.propagator.method != "auto" && c.propagator.method != "exact" && c.propagator.method != "krylov")
            bad("propagator.method", "must be auto, exact or krylov");
        if (c.propagator.krylov_tol <= 0.0) bad("propagator.krylov_tol", "must be positive");
        if (c.propagator.krylov_max_dim < 4) bad("propagator.krylov_max_dim", "must be at least 4");
    }
    s.finish();
    return c;
}

ExperimentConfig parse_config_string(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("config: YAML syntax error: ") + e.what());
    }
    if (!root || root.IsNull()) throw Error(ErrorKind::InvalidConfig, "config: empty document");
    return parse_config(root);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    e << YAML::Key << "experiment" << YAML::Value << c.experiment;
    e << YAML::Key << "seed" << YAML::Value << c.seed;
    e << YAML::Key << "precision" << YAML::Value << c.precision;
    e << YAML::Key << "output" << YAML::Value << c.output;

    e << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "sites" << YAML::Value << c.geometry.sites;
    e << YAML::Key << "dim" << YAML::Value << c.geometry.dim;
    e << YAML::Key << "boundary" << YAML::Value << c.geometry.boundary;
    e << YAML::Key << "dense_cap" << YAML::Value << c.geometry.dense_cap;
    e << YAML::EndMap;

    e << YAML::Key << "models" << YAML::Value << YAML::BeginSeq;
    for (const auto& m : c.models) {
        e << YAML::BeginMap;
        e << YAML::Key << "name" << YAML::Value << m.name;
        e << YAML::Key << "j" << YAML::Value << m.j;
        e << YAML::Key << "k" << YAML::Value << m.k;
        if (m.on_site) {
            e << YAML::Key << "on_site" << YAML::Value;
            emit_operator(e, *m.on_site);
        }
        if (!m.coupling.empty()) {
            e << YAML::Key << "coupling" << YAML::Value;
            emit_matrix(e, m.coupling);
        }
        e << YAML::Key << "count" << YAML::Value << m.count;
        e << YAML::EndMap;
    }
    e << YAML::EndSeq;

    e << YAML::Key << "observable" << YAML::Value;
    emit_operator(e, c.observable);
    e << YAML::Key << "probe" << YAML::Value;
    emit_operator(e, c.probe);
    e << YAML::Key << "perturbation" << YAML::Value;
    emit_operator(e, c.perturbation);
    e << YAML::Key << "sites" << YAML::Value;
    emit_list(e, c.sites);

    e << YAML::Key << "grids" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "x" << YAML::Value;
    emit_list(e, c.grids.x);
    e << YAML::Key << "t" << YAML::Value;
    emit_list(e, c.grids.t);
    e << YAML::Key << "g" << YAML::Value;
    emit_list(e, c.grids.g);
    e << YAML::EndMap;

    e << YAML::Key << "twist" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "generator" << YAML::Value;
    if (c.twist.generator)
        emit_operator(e, *c.twist.generator);
    else
        e << "auto";
    e << YAML::Key << "weights" << YAML::Value;
    emit_list(e, c.twist.weights);
    e << YAML::EndMap;

    e << YAML::Key << "propagator" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "method" << YAML::Value << c.propagator.method;
    e << YAML::Key << "krylov_threshold" << YAML::Value << c.propagator.krylov_threshold;
    e << YAML::Key << "krylov_tol" << YAML::Value << c.propagator.krylov_tol;
    e << YAML::Key << "krylov_max_dim" << YAML::Value << c.propagator.krylov_max_dim;
    e << YAML::EndMap;

    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.output.clear();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(serialize_config(c))));
    return buf;
}

// -- builders ---------------------------------------------------------------

ChainGeometry make_geometry(const GeometrySpec& g) {
    try {
        return ChainGeometry(g.sites, g.dim, boundary_from_string(g.boundary), g.dense_cap);
    } catch (const Error& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("geometry: ") + e.what());
    }
}

Matrix entries_to_matrix(const MatrixEntries& e) {
    const auto n = static_cast<Eigen::Index>(e.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        require(static_cast<Eigen::Index>(e[i].size()) == n, "matrix entries must be square");
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = e[i][j];
    }
    return m;
}

MatrixEntries matrix_to_entries(const Matrix& m) {
    MatrixEntries e(m.rows(), std::vector<cplx>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) e[i][j] = m(i, j);
    return e;
}

Matrix local_operator(const OperatorSpec& op, int d) {
    Matrix m;
    if (op.kind == "identity") {
        m = Matrix::Identity(d, d);
    } else if (op.kind == "pauli") {
        require(d == 2, "pauli operators need site dimension 2");
        m = pauli_by_label(op.label);
    } else if (op.kind == "weyl") {
        m = weyl_matrix(WeylIndex(op.r.at(0), op.r.at(1), d));
    } else if (op.kind == "level") {
        const int j = op.levels.at(0), k = op.levels.at(1);
        require(j >= 0 && j < d && k >= 0 && k < d, "level operator outside [0, d)");
        m = Matrix::Zero(d, d);
        m(j, k) = 1.0;
    } else {
        m = entries_to_matrix(op.matrix);
        require(m.rows() == d, "local matrix must be d x d");
    }
    return apply_transform(m, op.transform, op.coefficient);
}

LatticeOperator build_operator(const OperatorSpec& op, const ChainGeometry& g) {
    for (int s : op.sites) require(s >= 0 && s < g.sites, "operator site " + std::to_string(s) + " outside the chain");
    if (op.kind == "identity") return apply_transform(Matrix::Identity(1, 1), op.transform, op.coefficient)(0, 0) *
                                      LatticeOperator::identity(g);
    if (op.kind == "matrix") {
        Matrix m = entries_to_matrix(op.matrix);
        Eigen::Index expect = 1;
        for (std::size_t i = 0; i < op.sites.size(); ++i) expect *= g.dim;
        require(m.rows() == expect, "matrix operator must be d^k x d^k for k listed sites");
        return embed_sites(apply_transform(m, op.transform, op.coefficient), op.sites, g);
    }
    OperatorSpec plain = op;
    plain.transform = "none";
    plain.coefficient = 1.0;
    const Matrix site = local_operator(plain, g.dim);
    LatticeOperator a = embed_at(site, op.sites[0], g);
    for (std::size_t i = 1; i < op.sites.size(); ++i) a = a * embed_at(site, op.sites[i], g);
    if (op.transform == "none" && op.coefficient == 1.0) return a;
    return LatticeOperator(g, apply_transform(a.dense(), op.transform, op.coefficient), a.support());
}

Matrix random_hermitian(int n, std::uint64_t seed) {
    const Vector v = random_vector(static_cast<Eigen::Index>(n) * n, seed);
    const Matrix a = Eigen::Map<const Matrix>(v.data(), n, n);
    return 0.5 * (a + a.adjoint());
}

std::vector<HamiltonianSpec> build_models(const std::vector<ModelSpec>& models, const ChainGeometry& g,
                                          std::uint64_t seed) {
    std::vector<HamiltonianSpec> out;
    try {
        for (std::size_t mi = 0; mi < models.size(); ++mi) {
            const auto& m = models[mi];
            const int d = g.dim;
            if (m.name == "heisenberg") out.push_back(heisenberg(g));
            else if (m.name == "xy") out.push_back(xy_model(g));
            else if (m.name == "emch_radin") out.push_back(emch_radin(g));
            else if (m.name == "exchange") out.push_back(exchange_model(m.j, m.k, g));
            else if (m.name == "pair") out.push_back(pair_model(m.j, m.k, g));
            else if (m.name == "pair_diagonal") out.push_back(pair_diagonal_model(m.j, m.k, g));
            else if (m.name == "onsite") out.push_back(onsite_model(local_operator(*m.on_site, d), g));
            else if (m.name == "custom") {
                std::optional<Matrix> os;
                if (m.on_site) os = local_operator(*m.on_site, d);
                out.push_back(custom_model(os, entries_to_matrix(m.coupling), g));
            } else {
                for (int i = 0; i < m.count; ++i) {
                    const std::uint64_t s = seed * 0x9e3779b97f4a7c15ULL + (mi << 20) + static_cast<std::uint64_t>(i);
                    const Matrix on = random_hermitian(d, s);
                    HamiltonianSpec h = m.name == "random_onsite"
                                            ? onsite_model(on, g)
                                            : custom_model(on, random_hermitian(d * d, s ^ 0xc0ffeeULL), g);
                    h.name = m.name + "_" + std::to_string(i);
                    out.push_back(std::move(h));
                }
            }
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::InvalidConfig, std::string("models: ") + e.what());
        throw;
    }
    return out;
}

PropagatorOptions make_propagator_options(const PropagatorConfig& p, const std::string& precision) {
    PropagatorOptions o;
    o.method = propagator_method_from_string(p.method);
    o.krylov_threshold = p.krylov_threshold;
    o.krylov_tol = precision == "high" ? std::min(p.krylov_tol, 1e-12) : p.krylov_tol;
    o.krylov_max_dim = p.krylov_max_dim;
    return o;
}

NormOptions make_norm_options(const std::string& precision, std::uint64_t seed) {
    NormOptions o;
    if (precision == "high") o.tol = 1e-13;
    o.seed ^= seed;
    return o;
}

}  // namespace qlat
