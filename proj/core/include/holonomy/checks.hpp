#pragma once

#include <string>
#include <vector>

namespace holonomy {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;  // measured <= threshold
};

/// The full verification suite over the built-in reference scenarios.
/// Every threshold is pinned here; `checks` in the CLI and the acceptance
/// test binary run exactly this list.
std::vector<CheckResult> run_acceptance_checks();

std::string checks_report_json(const std::vector<CheckResult>& results);

}  // namespace holonomy
