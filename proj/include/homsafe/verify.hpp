#pragma once

// Verification suite: every release gate of the library expressed as a
// runnable criterion with pinned tolerances. The CLI `verify` subcommand and
// the acceptance test binary both drive this list.

#include <string>
#include <vector>

#include "homsafe/sim.hpp"

namespace homsafe {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // margins and measured values
    double seconds = 0;
};

struct VerifyOptions {
    double tol_scale = 1.0;  // < 1 tightens every tolerance, > 1 loosens
    unsigned seed = 20240817;
};

std::vector<CriterionResult> run_verification(const VerifyOptions& opts = {});

}  // namespace homsafe
