#pragma once
// Exhaustive small-scale verification (Hall's condition over all input
// subsets up to size q, with a hard subset budget), seeded random search
// over permutations, and the census of bad events (A,B) that the union
// bound counts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conc/graph.hpp"
#include "conc/rational.hpp"

namespace conc {

struct VerificationResult {
    enum class Status { Concentrator, NotConcentrator, BudgetExceeded };
    Status status = Status::BudgetExceeded;
    // Minimal failing input set (sizes are scanned in increasing order).
    std::optional<std::vector<uint32_t>> counterexample;
    uint64_t subsets_checked = 0;

    bool is_concentrator() const { return status == Status::Concentrator; }
    bool decided() const { return status != Status::BudgetExceeded; }
    std::string to_json(int indent = 2) const;
};

// Hall check |N(A)| >= |A| for every input subset with |A| <= q (equivalent
// to the k-disjoint-edges property by Hall's theorem).  Budget exhaustion is
// an explicit refusal, never a silent pass.
VerificationResult verify_concentrator(const BipartiteGraph& g, long q,
                                       uint64_t subset_budget = 10'000'000);

struct SearchReport {
    long m = 0, s = 0, q = 0;
    uint64_t seed = 0;
    uint64_t trials = 0;
    uint64_t good_count = 0;
    std::optional<uint64_t> first_good_trial;
    std::optional<uint64_t> first_good_seed;  // derived stream seed of that trial
    double empirical_bad_rate = 0;
    double ci_half_width = 0;  // 95% Wilson half-width
    Rational union_bound;      // exact triple-sum value (capped at 1)
    bool any_budget_refusal = false;
    std::string to_json(bool deterministic = false, int indent = 2) const;
};

// trials seeded permutations; each trial derives its own stream from
// (seed, trial index), builds G(pi) and verifies exhaustively.
SearchReport random_search(long m, long s, long q, uint64_t trials, uint64_t seed,
                           uint64_t subset_budget = 10'000'000);

struct BadEvent {
    long k = 0;
    long l = 0;  // degree-5 inputs in A
    long r = 0;  // degree-7 outputs in B
    std::vector<uint32_t> A;
    std::vector<uint32_t> B;
};

// Every pair (A, B), |A| = |B| = k <= 3m, with all edges from A landing in
// B; B runs over all size-k supersets of N(A), matching what the union
// bound counts.  Throws std::runtime_error when the budget is exceeded.
std::vector<BadEvent> bad_event_census(long m, long s, const BipartiteGraph& g,
                                       uint64_t budget = 10'000'000);

std::string census_to_json(long m, long s, const std::vector<BadEvent>& events,
                           int indent = 2);

}  // namespace conc
