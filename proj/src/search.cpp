#include "conc/search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "conc/rng.hpp"
#include "conc/sumbound.hpp"

namespace conc {

namespace {

// Lexicographically next k-combination over {0..n-1}; false when exhausted.
bool next_combination(std::vector<uint32_t>& idx, long n) {
    long k = static_cast<long>(idx.size());
    long i = k - 1;
    while (i >= 0 && idx[i] == static_cast<uint32_t>(n - k + i)) --i;
    if (i < 0) return false;
    ++idx[i];
    for (long j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

}  // namespace

VerificationResult verify_concentrator(const BipartiteGraph& g, long q,
                                       uint64_t subset_budget) {
    if (q < 0 || q > std::min(g.num_inputs, g.num_outputs))
        throw std::invalid_argument(
            "verify_concentrator: q outside [0, min(inputs, outputs)]");
    auto masks = g.neighbor_masks();
    VerificationResult res;
    res.status = VerificationResult::Status::Concentrator;
    uint64_t checked = 0;
    for (long k = 1; k <= q; ++k) {
        std::vector<uint32_t> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        do {
            if (checked >= subset_budget) {
                res.status = VerificationResult::Status::BudgetExceeded;
                res.counterexample.reset();
                res.subsets_checked = checked;
                return res;
            }
            ++checked;
            uint64_t u = 0;
            for (uint32_t a : idx) u |= masks[a];
            if (std::popcount(u) < k) {
                res.status = VerificationResult::Status::NotConcentrator;
                res.counterexample = idx;
                res.subsets_checked = checked;
                return res;
            }
        } while (next_combination(idx, g.num_inputs));
    }
    res.subsets_checked = checked;
    return res;
}

SearchReport random_search(long m, long s, long q, uint64_t trials, uint64_t seed,
                           uint64_t subset_budget) {
    SearchReport rep;
    rep.m = m;
    rep.s = s;
    rep.q = q;
    rep.seed = seed;
    rep.trials = trials;
    long N = 36 * m - s;
    uint64_t decided = 0, bad = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        uint64_t stream = derive_stream(seed, t);
        SplitMix64 rng(stream);
        Permutation pi = Permutation::identity(N);
        fisher_yates(pi.map, rng);
        BipartiteGraph g = build_graph(m, s, pi);
        VerificationResult v = verify_concentrator(g, q, subset_budget);
        if (!v.decided()) {
            rep.any_budget_refusal = true;
            continue;
        }
        ++decided;
        if (v.is_concentrator()) {
            ++rep.good_count;
            if (!rep.first_good_trial) {
                rep.first_good_trial = t;
                rep.first_good_seed = stream;
            }
        } else {
            ++bad;
        }
    }
    if (decided > 0) {
        double n = static_cast<double>(decided);
        double p = static_cast<double>(bad) / n;
        rep.empirical_bad_rate = p;
        const double z = 1.959963984540054;  // two-sided 95%
        double denom = 1 + z * z / n;
        rep.ci_half_width =
            z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    }
    Rational ub = lhs_sum(m, s, Mode::Exact).total_exact;
    rep.union_bound = ub < 1 ? ub : Rational(1);
    return rep;
}

std::vector<BadEvent> bad_event_census(long m, long s, const BipartiteGraph& g,
                                       uint64_t budget) {
    auto masks = g.neighbor_masks();
    std::vector<BadEvent> events;
    uint64_t steps = 0;
    auto charge = [&](uint64_t n) {
        steps += n;
        if (steps > budget)
            throw std::runtime_error("bad_event_census: budget exceeded");
    };
    long deg5_start = s == 0 ? g.num_inputs : 6 * m - s;   // inputs >= this have degree 5
    long deg7_start = s == 0 ? g.num_outputs : 8 * m - s;  // outputs >= this have degree 7
    for (long k = 1; k <= 3 * m; ++k) {
        if (k > g.num_inputs || k > g.num_outputs) break;
        std::vector<uint32_t> A(k);
        std::iota(A.begin(), A.end(), 0);
        do {
            charge(1);
            uint64_t u = 0;
            for (uint32_t a : A) u |= masks[a];
            int j = std::popcount(u);
            if (j > k) continue;
            // B = N(A) plus any k-j outputs not in N(A)
            std::vector<uint32_t> base, rest;
            for (long o = 0; o < g.num_outputs; ++o) {
                if (u >> o & 1) base.push_back(static_cast<uint32_t>(o));
                else rest.push_back(static_cast<uint32_t>(o));
            }
            long extra = k - j;
            std::vector<uint32_t> pick(extra);
            std::iota(pick.begin(), pick.end(), 0);
            bool more = true;
            while (more) {
                charge(1);
                BadEvent ev;
                ev.k = k;
                ev.A = A;
                ev.B = base;
                for (long i = 0; i < extra; ++i) ev.B.push_back(rest[pick[i]]);
                std::sort(ev.B.begin(), ev.B.end());
                for (uint32_t a : ev.A)
                    if (a >= static_cast<uint32_t>(deg5_start)) ++ev.l;
                for (uint32_t b : ev.B)
                    if (b >= static_cast<uint32_t>(deg7_start)) ++ev.r;
                events.push_back(std::move(ev));
                more = extra > 0 &&
                       next_combination(pick, static_cast<long>(rest.size()));
            }
        } while (next_combination(A, g.num_inputs));
    }
    return events;
}

std::string VerificationResult::to_json(int indent) const {
    nlohmann::json j;
    switch (status) {
        case Status::Concentrator: j["status"] = "concentrator"; break;
        case Status::NotConcentrator: j["status"] = "not_concentrator"; break;
        case Status::BudgetExceeded: j["status"] = "budget_exceeded"; break;
    }
    j["subsets_checked"] = subsets_checked;
    j["counterexample"] =
        counterexample ? nlohmann::json(*counterexample) : nlohmann::json(nullptr);
    return j.dump(indent);
}

std::string SearchReport::to_json(bool deterministic, int indent) const {
    (void)deterministic;
    nlohmann::json j;
    j["m"] = m;
    j["s"] = s;
    j["q"] = q;
    j["seed"] = seed;
    j["trials"] = trials;
    j["good_count"] = good_count;
    j["first_good_trial"] = first_good_trial ? nlohmann::json(*first_good_trial)
                                             : nlohmann::json(nullptr);
    j["first_good_seed"] = first_good_seed ? nlohmann::json(*first_good_seed)
                                           : nlohmann::json(nullptr);
    j["empirical_bad_rate"] = empirical_bad_rate;
    j["ci_half_width"] = ci_half_width;
    j["union_bound"] = {{"num", union_bound.get_num().get_str()},
                        {"den", union_bound.get_den().get_str()},
                        {"decimal", union_bound.get_d()}};
    j["any_budget_refusal"] = any_budget_refusal;
    return j.dump(indent);
}

std::string census_to_json(long m, long s, const std::vector<BadEvent>& events,
                           int indent) {
    nlohmann::json j;
    j["m"] = m;
    j["s"] = s;
    j["count"] = events.size();
    nlohmann::json arr = nlohmann::json::array();
    for (auto& ev : events) {
        arr.push_back({{"k", ev.k},
                       {"l", ev.l},
                       {"r", ev.r},
                       {"A", ev.A},
                       {"B", ev.B}});
    }
    j["events"] = arr;
    return j.dump(indent);
}

}  // namespace conc
