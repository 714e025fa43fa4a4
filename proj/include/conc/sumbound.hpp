#pragma once
// The union-bound triple sum: for a random permutation construction with 6m
// inputs, 4m outputs and N = 36m - s edge slots, the probability that some
// k <= 3m inputs have all their edges inside some k outputs is at most
//
//   sum_{k=1}^{3m} sum_{l=0}^{k} sum_{r=0}^{k}
//     C(s,l) C(6m-s,k-l) C(s-4m,r) C(8m-s,k-r) * C(8k-r,6k-l) / C(36m-s,6k-l)
//
// and "sum < 1" certifies that a good permutation exists.  Exact mode is the
// ground truth (one big rational); interval mode works in log space off a
// cached ln-factorial table and is what makes the m ~ 150 scans cheap.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conc/binomial.hpp"
#include "conc/interval.hpp"
#include "conc/rational.hpp"

namespace conc {

enum class Mode { Exact, IntervalMode };

struct SumTermIndex {
    long k = 0;  // 1..3m
    long l = 0;  // 0..k
    long r = 0;  // 0..k
};

struct SumBudget {
    uint64_t max_terms = UINT64_MAX;  // nonzero terms evaluated
    double max_seconds = 0;           // 0 = unlimited
};

struct SumReport {
    long m = 0;
    long s = 0;
    Mode mode = Mode::Exact;
    Rational total_exact;          // valid in exact mode
    Interval total_interval;       // valid in interval mode
    std::vector<std::pair<long, Rational>> per_k_exact;
    std::vector<std::pair<long, Interval>> per_k_interval;
    SumTermIndex max_term_index;
    double max_term_value = 0;     // float approximation of the largest term
    uint64_t term_count = 0;       // nonzero terms
    double wall_time_s = 0;
    bool complete = true;          // false when a budget cut the run short

    // Certification verdict for "sum < 1": +1 below, -1 at-or-above,
    // 0 undecided (interval straddles 1, or incomplete run).
    int below_one() const;
    double total_as_double() const;
    std::string to_json(bool deterministic = false, int indent = 2) const;
    std::string per_k_csv() const;
};

// One term a(m,s,k,l,r), exact.  s may be anything in [0, 6m]; out-of-range
// binomials make the value 0 (for s < 4m every term vanishes this way).
Rational term_exact(long m, long s, const SumTermIndex& idx);

// Shared ln-factorial enclosures for interval-mode evaluation.
class LnFactCache {
  public:
    explicit LnFactCache(long max_n);
    Interval ln_factorial(long n) const;      // enclosure of ln(n!)
    Interval ln_binom(long n, long m) const;  // requires 0 <= m <= n
    long max_n() const { return static_cast<long>(table_.size()) - 1; }

  private:
    std::vector<Interval> table_;
};

Interval term_interval(long m, long s, const SumTermIndex& idx, const LnFactCache& lf);

// C(8k-r,6k-l)/C(36m-s,6k-l), cross-checked against the independent
// falling-factorial form prod_{i<j}(8k-r-i) / prod_{i<j}(N-i), j = 6k-l.
// Throws std::logic_error if the two disagree.
Rational probability_factor(long m, long s, const SumTermIndex& idx);

// Full triple sum.  workers = 0 picks CONC_WORKERS or hardware concurrency;
// the per-k partial is the parallel unit and the result is independent of
// scheduling (exact rational addition per preassigned slot).
SumReport lhs_sum(long m, long s, Mode mode, int workers = 0, SumBudget budget = {});

enum class Scan { Descending, Full };

struct SmaxResult {
    long m = 0;
    long s_max = -1;      // largest s in [0,6m] with sum < 1; -1 if none/undecided
    bool decided = true;
    bool escalated = false;  // an interval straddle forced exact re-evaluation
    std::vector<SumReport> reports;
    std::string to_json(bool deterministic = false, int indent = 2) const;
};

// Largest s with lhs_sum(m,s) < 1.  Descending scan stops at the first
// certified s from the top (monotonicity in s is empirical, not claimed);
// full scan evaluates every s in [0, 6m] and takes the true maximum.
// escalate: straddling interval enclosures re-run in exact mode instead of
// returning undecided.
SmaxResult s_max(long m, Mode mode, Scan scan = Scan::Descending, int workers = 0,
                 SumBudget budget = {}, bool escalate = true);

struct SmallKBound {
    Rational collapsed;  // sum_{k<=ceil(2.6m)} C(6m,k) C(4m,k) C(8k,5k)/C(30m,5k)
    Rational original;   // matching partial of the true triple sum
};

// Vandermonde-collapsed upper bound for the small-k range; asserts
// original <= collapsed (throws std::logic_error otherwise).
SmallKBound small_k_bound(long m, long s);

}  // namespace conc
