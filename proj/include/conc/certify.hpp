#pragma once
// The acceptance suite: every headline claim as a pass/fail check with its
// tolerance and runtime budget pinned in code.  Shared between the
// `acceptance` test binary and `conc certify-all`.

#include <string>
#include <vector>

namespace conc {

struct CriterionResult {
    std::string id;      // "1".."11", "1S" for the full-range stretch
    std::string name;
    bool pass = false;
    double seconds = 0;
    double budget_seconds = 0;  // 0 = no runtime budget
    std::string detail;
};

// The eleven standard criteria (runtime-budget checks included).
std::vector<CriterionResult> run_acceptance(int workers = 0);

// Stretch: interval-mode confirmation s_max(m)/m >= 6 for m in {31..150}
// and refutation at m = 151.
CriterionResult run_stretch(int workers = 0);

std::string criteria_to_json(const std::vector<CriterionResult>& results,
                             bool deterministic = false, int indent = 2);

}  // namespace conc
