#include <iostream>
#include <string>

#include "qlat/acceptance.hpp"

// Usage: qlat_acceptance [suite] [config_dir] [scratch_dir]
int main(int argc, char** argv) {
    const std::string suite = argc > 1 ? argv[1] : "all";
    qlat::AcceptanceOptions opts;
    if (argc > 2) opts.config_dir = argv[2];
    if (argc > 3) opts.scratch_dir = argv[3];
    try {
        const auto results = qlat::run_acceptance(suite, opts, &std::cout);
        int failed = 0;
        for (const auto& r : results) failed += r.pass ? 0 : 1;
        std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
        return failed == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
