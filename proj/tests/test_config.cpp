#include "doctest.h"

#include <filesystem>

#include "oracles.hpp"
#include "qlat/config.hpp"

using namespace qlat;

namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::string& yaml) {
    try {
        parse_config_string(yaml);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("defaults round-trip through the serializer") {
    const ExperimentConfig def;
    const ExperimentConfig parsed = parse_config_string("experiment: light_cone\n");
    CHECK(parsed == def);
    CHECK(parse_config_string(serialize_config(def)) == def);
}

TEST_CASE("shipped configs round-trip and hash stably") {
    const fs::path root = QLAT_SOURCE_DIR;
    std::vector<fs::path> files = {root / "configs" / "example.yaml"};
    for (const auto& e : fs::directory_iterator(root / "configs" / "acceptance")) files.push_back(e.path());
    REQUIRE(files.size() >= 5);
    for (const auto& f : files) {
        CAPTURE(f.string());
        const ExperimentConfig c = load_config(f.string());
        const std::string text = serialize_config(c);
        const ExperimentConfig again = parse_config_string(text);
        CHECK(again == c);
        CHECK(serialize_config(again) == text);
        CHECK(config_hash(again) == config_hash(c));
        CHECK(config_hash(c).size() == 16);
    }
}

TEST_CASE("hash ignores the output path and tracks everything else") {
    ExperimentConfig a;
    ExperimentConfig b = a;
    b.output = "/somewhere/else";
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 1;
    CHECK(config_hash(a) != config_hash(b));
    ExperimentConfig c = a;
    c.grids.t = {0.0, 0.5};
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("unknown keys and bad values are invalid configs") {
    CHECK(kind_of("experiment: light_cone\nbogus: 1\n") == ErrorKind::InvalidConfig);
    CHECK(kind_of("geometry: {sites: 4, dimm: 2}\n") == ErrorKind::InvalidConfig);
    CHECK(kind_of("experiment: teleport\n") == ErrorKind::InvalidConfig);
    CHECK(kind_of("precision: quad\n") == ErrorKind::InvalidConfig);
    CHECK(kind_of("geometry: {sites: 0}\n") == ErrorKind::InvalidConfig);
    CHECK(kind_of("models: [{name: heisenberg, spin: 1}]\n") == ErrorKind::InvalidConfig);
    CHECK(kind_of("grids: {t: {start: 0, stop: 1, num: 0}}\n") == ErrorKind::InvalidConfig);
    CHECK(kind_of("experiment: [\n") == ErrorKind::InvalidConfig);
    CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), Error);
}

TEST_CASE("grid forms") {
    const auto c = parse_config_string(
        "grids:\n"
        "  x: {start: 1, stop: 7, step: 2}\n"
        "  t: {start: 0, stop: 1, num: 5}\n"
        "  g: 0.3\n");
    CHECK(c.grids.x == std::vector<int>{1, 3, 5, 7});
    REQUIRE(c.grids.t.size() == 5);
    CHECK(c.grids.t[1] == doctest::Approx(0.25));
    CHECK(c.grids.t.back() == 1.0);
    CHECK(c.grids.g == std::vector<double>{0.3});
    CHECK(parse_config_string("grids: {t: [0, 0.1, 0.4]}\n").grids.t == std::vector<double>{0.0, 0.1, 0.4});
}

TEST_CASE("models are listed by name or by mapping") {
    const auto c = parse_config_string(
        "geometry: {sites: 3, dim: 3}\n"
        "models:\n"
        "  - exchange\n"
        "  - {name: pair, j: 0, k: 2}\n"
        "  - {name: random_coupled, count: 3}\n");
    REQUIRE(c.models.size() == 3);
    CHECK(c.models[1].k == 2);
    const auto specs = build_models(c.models, make_geometry(c.geometry), c.seed);
    CHECK(specs.size() == 5);
    // Seeded expansion is reproducible and distinct per member.
    const auto again = build_models(c.models, make_geometry(c.geometry), c.seed);
    CHECK((specs[2].coupling - again[2].coupling).norm() == 0.0);
    CHECK((specs[2].coupling - specs[3].coupling).norm() > 0.1);
    const auto other = build_models(c.models, make_geometry(c.geometry), c.seed + 1);
    CHECK((specs[2].coupling - other[2].coupling).norm() > 0.1);
}

TEST_CASE("operator specs build chain operators") {
    const ChainGeometry g(4, 2);
    const OperatorSpec zz{"pauli", "Z", {}, {}, {}, {0, 2}, "none", 1.0};
    const LatticeOperator op = build_operator(zz, g);
    const Matrix ref = oracle::embed(oracle::sz(), 0, 4, 2) * oracle::embed(oracle::sz(), 2, 4, 2);
    CHECK((op.dense() - ref).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(op.support() == Support{0, 2});

    const OperatorSpec ex{"pauli", "X", {}, {}, {}, {1}, "exp_i", 0.3};
    CHECK((build_operator(ex, g).dense() - oracle::embed(oracle::expm(cplx(0, 0.3) * oracle::sx()), 1, 4, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    const ChainGeometry g3(2, 3);
    const OperatorSpec lv{"level", "", {}, {0, 2}, {}, {1}, "none", 1.0};
    const Matrix l = build_operator(lv, g3).dense();
    CHECK(l(2, 0) == 0.0);
    CHECK(l(0, 2) == 1.0);
    const OperatorSpec w{"weyl", "", {1, 1}, {}, {}, {0}, "none", 1.0};
    CHECK(build_operator(w, g3).support() == Support{0});
    const OperatorSpec bad{"pauli", "X", {}, {}, {}, {0}, "none", 1.0};
    CHECK_THROWS_AS(build_operator(bad, g3), Error);
}

TEST_CASE("matrix entries accept real and [re, im] forms") {
    const auto c = parse_config_string(
        "geometry: {sites: 2, dim: 2}\n"
        "observable: {kind: matrix, sites: [0], matrix: [[0, [0, -1]], [[0, 1], 0]]}\n");
    const Matrix m = entries_to_matrix(c.observable.matrix);
    CHECK((m - oracle::sy()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(entries_to_matrix(matrix_to_entries(m)) == m);
}

TEST_CASE("precision mode tightens tolerances") {
    const PropagatorConfig p;
    CHECK(make_propagator_options(p, "high").krylov_tol <= 1e-12);
    CHECK(make_propagator_options(p, "double").krylov_tol == p.krylov_tol);
    CHECK(make_norm_options("high", 0).tol < make_norm_options("double", 0).tol);
}
