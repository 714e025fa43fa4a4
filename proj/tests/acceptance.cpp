// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  `--stretch-only` runs the long full-range confirmation
// instead of the standard eleven.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "conc/certify.hpp"

int main(int argc, char** argv) {
    bool stretch_only = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--stretch-only") == 0) {
            stretch_only = true;
        } else {
            std::fprintf(stderr, "usage: %s [--stretch-only]\n", argv[0]);
            return 64;
        }
    }

    std::vector<conc::CriterionResult> results;
    try {
        if (stretch_only) {
            results.push_back(conc::run_stretch());
        } else {
            results = conc::run_acceptance();
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    int failures = 0;
    for (const auto& r : results) {
        if (!r.pass) ++failures;
        std::printf("[%s] %s %s (%.2f s): %s\n", r.pass ? "PASS" : "FAIL",
                    r.id.c_str(), r.name.c_str(), r.seconds, r.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n",
                static_cast<int>(results.size()) - failures, results.size());
    return failures == 0 ? 0 : 1;
}
