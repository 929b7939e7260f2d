#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qlat/experiments.hpp"

using namespace qlat;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string l;
    while (std::getline(is, l)) out.push_back(l);
    return out;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("qlat_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("doubles survive the CSV text form bit for bit") {
    for (double v : {0.1, 1.0 / 3.0, 2.0 * std::sqrt(2.0), 1e-300, -6.02214076e23, 0.0}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("CSV layout: provenance, units, header, rows") {
    ResultTable t("demo", {{"model", ""}, {"t", "1/J"}, {"n", ""}, {"label", ""}});
    t.config_hash = "0123456789abcdef";
    t.code_version = "9.9.9";
    t.add_row({std::string("heisenberg"), 0.5, 3LL, std::string("a,b")});
    const auto ls = lines(t.to_csv());
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "# schema_version: 1; experiment: demo; config_hash: 0123456789abcdef; code_version: 9.9.9");
    CHECK(ls[1] == "# units: 1,1/J,1,1");
    CHECK(ls[2] == "model,t,n,label");
    CHECK(ls[3] == "heisenberg,0.5,3,\"a,b\"");
    CHECK_THROWS_AS(t.add_row({1.0}), Error);
}

TEST_CASE("JSON mirror carries rows, summary and provenance") {
    ResultTable t("demo", {{"x", "sites"}, {"v", ""}});
    t.add_row({1LL, 0.25});
    t.summary()["answer"] = 42;
    t.config_hash = "h";
    t.wall_seconds = 1.5;
    const auto j = t.to_json();
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["columns"][0]["unit"] == "sites");
    CHECK(j["rows"][0][1] == 0.25);
    CHECK(j["summary"]["answer"] == 42);
    CHECK(j["provenance"]["config_hash"] == "h");
    CHECK(j["provenance"]["wall_seconds"] == 1.5);
}

TEST_CASE("atomic writes replace files and leave no temporaries") {
    const fs::path dir = scratch("atomic");
    const fs::path f = dir / "sub" / "out.txt";
    write_atomic(f.string(), "first");
    write_atomic(f.string(), "second");
    CHECK(slurp(f) == "second");
    int n = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++n;
    CHECK(n == 1);
}

TEST_CASE("every experiment kind runs on a small chain and is deterministic") {
    const fs::path dir = scratch("kinds");
    for (const auto& kind : experiment_kinds()) {
        CAPTURE(kind);
        ExperimentConfig c;
        c.experiment = kind;
        c.geometry.sites = 4;
        c.output = (dir / kind).string();
        c.grids.x = {1, 2};
        c.grids.t = {0.0, 0.1, 0.2};
        c.grids.g = {0.2};
        c.sites = {0, 1};
        c.models = {ModelSpec{"heisenberg"}, ModelSpec{"random_onsite", 0, 1, std::nullopt, {}, 1}};
        if (kind == "spectrum") c.geometry.sites = 3;
        if (kind == "projector_dynamics") c.observable.sites = {1};
        const std::string csv = run_and_write(c);
        CHECK(fs::exists(csv));
        CHECK(fs::exists(dir / kind / (kind + ".json")));
        CHECK(fs::exists(dir / kind / (kind + ".config.yaml")));
        const ResultTable a = run_experiment(c), b = run_experiment(c);
        CHECK(!a.rows().empty());
        CHECK(a.to_csv() == b.to_csv());
        CHECK(a.to_json()["summary"].dump() == b.to_json()["summary"].dump());
        CHECK(a.config_hash == config_hash(c));
        // The saved config reproduces the run.
        CHECK(load_config((dir / kind / (kind + ".config.yaml")).string()) == c);
    }
}

TEST_CASE("experiments surface size caps and bad inputs as typed errors") {
    ExperimentConfig c;
    c.experiment = "spectrum";
    c.geometry.sites = 7;
    try {
        run_experiment(c);
        FAIL("expected a size cap");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SizeCap);
    }
    ExperimentConfig lc;
    lc.geometry.sites = 4;
    lc.grids.x = {9};
    try {
        run_experiment(lc);
        FAIL("expected an invalid config");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidConfig);
    }
}

TEST_CASE("sweep expansion is a cartesian product with the last axis fastest") {
    const auto cells = expand_sweep(
        "experiment: light_cone\n"
        "geometry: {sites: 4}\n"
        "sweep:\n"
        "  geometry.sites: [4, 5]\n"
        "  seed: [1, 2, 3]\n");
    REQUIRE(cells.size() == 6);
    CHECK(cells[0].first == "geometry.sites=4;seed=1");
    CHECK(cells[1].first == "geometry.sites=4;seed=2");
    CHECK(cells[3].first == "geometry.sites=5;seed=1");
    CHECK(cells[5].second.geometry.sites == 5);
    CHECK(cells[5].second.seed == 3);
    CHECK(expand_sweep("experiment: spectrum\n").size() == 1);
    CHECK_THROWS_AS(expand_sweep("sweep: {seed: []}\n"), Error);
    CHECK_THROWS_AS(expand_sweep("sweep: {geometry.sitez: [1]}\n"), Error);
}

TEST_CASE("sweeps write an index, run in parallel and resume") {
    const fs::path dir = scratch("sweep");
    const fs::path cfg = dir / "sweep.yaml";
    std::ofstream(cfg) << "experiment: obstruction_sweep\n"
                          "geometry: {sites: 2}\n"
                          "models: [heisenberg, xy]\n"
                          "sweep:\n"
                          "  geometry.boundary: [open, periodic]\n"
                          "  sites: [[0], [1]]\n";
    SweepOptions opts;
    opts.output = (dir / "out").string();
    opts.workers = 3;
    const auto first = run_sweep(cfg.string(), opts);
    REQUIRE(first.cells.size() == 4);
    CHECK(first.failures == 0);
    for (const auto& c : first.cells) {
        CHECK(c.status == "ok");
        CHECK(fs::exists(c.csv));
    }
    const auto index = lines(slurp(first.index_path));
    REQUIRE(index.size() == 6);
    CHECK(index[1] == "hash\tlabel\tstatus\tcsv");

    const auto second = run_sweep(cfg.string(), opts);
    for (const auto& c : second.cells) CHECK(c.status == "skipped");

    // Removing one output reruns only that cell.
    fs::remove(first.cells[2].csv);
    const auto third = run_sweep(cfg.string(), opts);
    for (std::size_t i = 0; i < third.cells.size(); ++i) CHECK(third.cells[i].status == (i == 2 ? "ok" : "skipped"));

    // A seed override changes every hash.
    opts.seed = 99;
    const auto fourth = run_sweep(cfg.string(), opts);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(fourth.cells[i].status == "ok");
        CHECK(fourth.cells[i].hash != first.cells[i].hash);
    }
}

TEST_CASE("sweep cells that fail are recorded with their exit code") {
    const fs::path dir = scratch("sweep_fail");
    const fs::path cfg = dir / "sweep.yaml";
    std::ofstream(cfg) << "experiment: spectrum\n"
                          "sweep:\n"
                          "  geometry.sites: [2, 7]\n";
    SweepOptions opts;
    opts.output = (dir / "out").string();
    const auto r = run_sweep(cfg.string(), opts);
    REQUIRE(r.cells.size() == 2);
    CHECK(r.cells[0].status == "ok");
    CHECK(r.cells[1].status == "error:3");
    CHECK(r.failures == 1);
}
