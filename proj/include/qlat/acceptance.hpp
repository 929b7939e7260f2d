#pragma once

// Acceptance suites: one pass/fail line per headline property.

#include <ostream>
#include <string>
#include <vector>

namespace qlat {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    // Directory holding the acceptance configs for the determinism check.
    std::string config_dir = "configs/acceptance";
    // Scratch directory for determinism reruns.
    std::string scratch_dir;
};

const std::vector<std::string>& acceptance_suites();

// suite "all" runs everything in order. Unknown names throw.
std::vector<CriterionResult> run_acceptance(const std::string& suite, const AcceptanceOptions& opts,
                                            std::ostream* live = nullptr);

std::string format_criterion(const CriterionResult& r);

}  // namespace qlat
