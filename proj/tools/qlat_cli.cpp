#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qlat/acceptance.hpp"
#include "qlat/experiments.hpp"

using namespace qlat;

namespace {

ExperimentConfig with_overrides(ExperimentConfig cfg, const std::string& out, const std::optional<std::uint64_t>& seed,
                                const std::string& precision) {
    if (!out.empty()) cfg.output = out;
    if (seed) cfg.seed = *seed;
    if (!precision.empty()) {
        if (precision != "double" && precision != "high")
            throw Error(ErrorKind::InvalidConfig, "--precision must be double or high");
        cfg.precision = precision;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qlat: finite-chain probes of asymptotic abelianness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", code_version());

    std::string config, out, precision, suite = "all", configs_dir = "configs/acceptance";
    std::optional<std::uint64_t> seed;
    int workers = 1;
    bool print_config = false;

    auto* run = app.add_subcommand("run", "Run one experiment config");
    run->add_option("-c,--config", config, "YAML experiment config")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", out, "Output directory (overrides `output`)");
    run->add_option("--seed", seed, "Seed override");
    run->add_option("--precision", precision, "double | high");
    run->add_flag("--print-config", print_config, "Print the fully resolved config and exit");

    auto* sweep = app.add_subcommand("sweep", "Run the cartesian expansion of a config's `sweep:` block");
    sweep->add_option("-c,--config", config, "YAML experiment config")->required()->check(CLI::ExistingFile);
    sweep->add_option("-o,--out", out, "Output root (overrides `output`)");
    sweep->add_option("-j,--workers", workers, "Concurrent cells")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", seed, "Seed override");
    sweep->add_option("--precision", precision, "double | high");

    auto* verify = app.add_subcommand("verify", "Run acceptance suites");
    verify->add_option("suite", suite, "Suite name or `all`");
    verify->add_option("--configs", configs_dir, "Directory of acceptance configs");
    verify->add_option("-o,--out", out, "Scratch directory for determinism reruns");

    auto* list = app.add_subcommand("list-models", "List the model zoo");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version exit 0; usage errors share the invalid-input code.
        return app.exit(e) == 0 ? 0 : exit_code(ErrorKind::InvalidArgument);
    }

    try {
        if (run->parsed()) {
            const auto cfg = with_overrides(load_config(config), out, seed, precision);
            if (print_config) {
                std::cout << serialize_config(cfg);
                return 0;
            }
            std::cout << run_and_write(cfg) << "\n";
            return 0;
        }
        if (sweep->parsed()) {
            SweepOptions so;
            so.output = out;
            so.workers = workers;
            so.seed = seed;
            so.precision = precision;
            const auto res = run_sweep(config, so);
            for (const auto& c : res.cells) std::cout << c.status << "\t" << c.hash << "\t" << c.label << "\n";
            std::cout << "index: " << res.index_path << "\n";
            if (res.failures) {
                std::cerr << res.failures << " sweep cell(s) failed\n";
                return 1;
            }
            return 0;
        }
        if (verify->parsed()) {
            AcceptanceOptions ao;
            ao.config_dir = configs_dir;
            ao.scratch_dir = out;
            const auto results = run_acceptance(suite, ao, &std::cout);
            int failed = 0;
            for (const auto& r : results) failed += r.pass ? 0 : 1;
            std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
            return failed ? 1 : 0;
        }
        if (list->parsed()) {
            for (const auto& m : model_catalog())
                std::cout << m.name << (m.params.empty() ? "" : " (" + m.params + ")") << ": " << m.description << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
