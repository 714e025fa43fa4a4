#include "conc/sumbound.hpp"

#include <mpfr.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace conc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("CONC_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void check_domain(long m, long s) {
    if (m < 1) throw std::domain_error("lhs_sum: m must be >= 1");
    if (s < 0 || s > 6 * m) throw std::domain_error("lhs_sum: need 0 <= s <= 6m");
}

// Index ranges with every structurally-zero rectangle removed; for
// s in [4m, 6m] the ranges are exactly the nonzero support.
struct KRanges {
    long lmin, lmax, rmin, rmax;
};

KRanges pruned(long m, long s, long k) {
    return KRanges{std::max(0L, k - (6 * m - s)), std::min(k, s),
                   std::max(0L, k - (8 * m - s)), std::min(k, s - 4 * m)};
}

struct PartialExact {
    Rational sum;
    Rational max_val;
    SumTermIndex max_idx;
    uint64_t count = 0;
};

// Exact sum over one k.  Denominator C(36m-s, 6k-l) is shared along each
// (k,l) row: the inner r-loop accumulates an integer numerator and a single
// rational addition happens per row.
PartialExact partial_k_exact(long m, long s, long k, BinomialTable& tbl) {
    PartialExact out;
    auto [lmin, lmax, rmin, rmax] = pruned(m, s, k);
    if (lmin > lmax || rmin > rmax) return out;
    long N = 36 * m - s;
    for (long l = lmin; l <= lmax; ++l) {
        long j = 6 * k - l;
        mpz_class c1 = binom(s, l) * binom(6 * m - s, k - l);
        if (c1 == 0) continue;
        const mpz_class& den = tbl.row(N, j)[j];
        mpz_class acc = 0;
        long best_r = -1;
        mpz_class best_num = 0;
        for (long r = rmin; r <= rmax; ++r) {
            mpz_class t = binom(s - 4 * m, r) * binom(8 * m - s, k - r) *
                          binom(8 * k - r, j);
            if (t == 0) continue;
            ++out.count;
            if (t > best_num) {
                best_num = t;
                best_r = r;
            }
            acc += t;
        }
        if (acc == 0) continue;
        Rational row(c1 * acc, den);
        row.canonicalize();
        out.sum += row;
        Rational cand(c1 * best_num, den);
        cand.canonicalize();
        if (best_r >= 0 && cand > out.max_val) {
            out.max_val = cand;
            out.max_idx = SumTermIndex{k, l, best_r};
        }
    }
    return out;
}

struct PartialInterval {
    Interval sum;
    double max_hi = 0;
    SumTermIndex max_idx;
    uint64_t count = 0;
};

PartialInterval partial_k_interval(long m, long s, long k, const LnFactCache& lf) {
    PartialInterval out;
    auto [lmin, lmax, rmin, rmax] = pruned(m, s, k);
    if (lmin > lmax || rmin > rmax) return out;
    long N = 36 * m - s;
    for (long l = lmin; l <= lmax; ++l) {
        long j = 6 * k - l;
        Interval ln_c1 = lf.ln_binom(s, l) + lf.ln_binom(6 * m - s, k - l) -
                         lf.ln_binom(N, j);
        for (long r = rmin; r <= rmax; ++r) {
            Interval ln_t = ln_c1 + lf.ln_binom(s - 4 * m, r) +
                            lf.ln_binom(8 * m - s, k - r) +
                            lf.ln_binom(8 * k - r, j);
            Interval t = exp(ln_t);
            ++out.count;
            out.sum += t;
            if (t.hi > out.max_hi) {
                out.max_hi = t.hi;
                out.max_idx = SumTermIndex{k, l, r};
            }
        }
    }
    return out;
}

nlohmann::json rational_json(const Rational& q) {
    return {{"num", q.get_num().get_str()},
            {"den", q.get_den().get_str()},
            {"decimal", q.get_d()}};
}

nlohmann::json interval_json(const Interval& v) {
    return {{"lo", v.lo}, {"hi", v.hi}};
}

}  // namespace

Rational term_exact(long m, long s, const SumTermIndex& idx) {
    check_domain(m, s);
    if (idx.k < 1 || idx.k > 3 * m || idx.l < 0 || idx.l > idx.k || idx.r < 0 ||
        idx.r > idx.k)
        throw std::domain_error("term: index out of range");
    long k = idx.k, l = idx.l, r = idx.r, j = 6 * k - l;
    mpz_class num = binom(s, l) * binom(6 * m - s, k - l) * binom(s - 4 * m, r) *
                    binom(8 * m - s, k - r) * binom(8 * k - r, j);
    if (num == 0) return Rational(0);
    Rational q(num, binom(36 * m - s, j));
    q.canonicalize();
    return q;
}

LnFactCache::LnFactCache(long max_n) {
    if (max_n < 0) throw std::invalid_argument("LnFactCache: negative size");
    table_.resize(max_n + 1);
    mpfr_t t, x;
    mpfr_init2(t, 53);
    mpfr_init2(x, 64);
    for (long n = 0; n <= max_n; ++n) {
        mpfr_set_si(x, n + 1, MPFR_RNDN);  // exact
        mpfr_lngamma(t, x, MPFR_RNDD);
        double lo = mpfr_get_d(t, MPFR_RNDD);
        mpfr_lngamma(t, x, MPFR_RNDU);
        double hi = mpfr_get_d(t, MPFR_RNDU);
        table_[n] = Interval(lo, hi);
    }
    mpfr_clear(t);
    mpfr_clear(x);
}

Interval LnFactCache::ln_factorial(long n) const {
    if (n < 0 || n > max_n())
        throw std::out_of_range("LnFactCache: n outside cached range");
    return table_[n];
}

Interval LnFactCache::ln_binom(long n, long m) const {
    if (m < 0 || m > n)
        throw std::domain_error("ln_binom: zero binomial has no logarithm");
    return ln_factorial(n) - ln_factorial(m) - ln_factorial(n - m);
}

Interval term_interval(long m, long s, const SumTermIndex& idx, const LnFactCache& lf) {
    check_domain(m, s);
    Rational probe = term_exact(m, s, idx);  // cheap way to honor the convention
    if (probe == 0) return Interval(0.0);
    long k = idx.k, l = idx.l, r = idx.r, j = 6 * k - l;
    Interval ln_t = lf.ln_binom(s, l) + lf.ln_binom(6 * m - s, k - l) +
                    lf.ln_binom(s - 4 * m, r) + lf.ln_binom(8 * m - s, k - r) +
                    lf.ln_binom(8 * k - r, j) - lf.ln_binom(36 * m - s, j);
    return exp(ln_t);
}

Rational probability_factor(long m, long s, const SumTermIndex& idx) {
    check_domain(m, s);
    long k = idx.k, l = idx.l, r = idx.r;
    long j = 6 * k - l, top = 8 * k - r, N = 36 * m - s;
    Rational via_binom;
    {
        mpz_class num = binom(top, j);
        if (num == 0) {
            via_binom = 0;
        } else {
            via_binom = Rational(num, binom(N, j));
            via_binom.canonicalize();
        }
    }
    // Independent form: (8k-r)(8k-r-1)...((8k-r)-(6k-l)+1) * (N-j)! / N!
    // computed as the ratio of falling factorials.
    if (j > N) throw std::domain_error("probability_factor: 6k-l exceeds N");
    mpz_class num_ff = 1, den_ff = 1;
    for (long i = 0; i < j; ++i) {
        num_ff *= (top - i);  // hits zero (or goes negative past it) if j > top
        den_ff *= (N - i);
        if (num_ff == 0) break;
    }
    Rational via_ff;
    if (num_ff <= 0) {
        via_ff = 0;  // the falling factorial crossed zero: C(top, j) = 0
    } else {
        via_ff = Rational(num_ff, den_ff);
        via_ff.canonicalize();
    }
    if (via_binom != via_ff)
        throw std::logic_error("probability_factor: the two algebraic forms disagree");
    return via_binom;
}

int SumReport::below_one() const {
    if (!complete) return 0;
    if (mode == Mode::Exact) return total_exact < 1 ? 1 : -1;
    if (total_interval.hi < 1) return 1;
    if (total_interval.lo >= 1) return -1;
    return 0;
}

double SumReport::total_as_double() const {
    return mode == Mode::Exact ? total_exact.get_d() : total_interval.mid();
}

SumReport lhs_sum(long m, long s, Mode mode, int workers, SumBudget budget) {
    check_domain(m, s);
    auto t0 = Clock::now();
    SumReport rep;
    rep.m = m;
    rep.s = s;
    rep.mode = mode;

    long kmax = 3 * m;
    int W = std::min<long>(resolve_workers(workers), kmax);
    std::atomic<uint64_t> terms_used{0};
    std::atomic<bool> cut_short{false};

    auto over_budget = [&](uint64_t added) {
        uint64_t used = terms_used.fetch_add(added) + added;
        if (used > budget.max_terms ||
            (budget.max_seconds > 0 && seconds_since(t0) > budget.max_seconds)) {
            cut_short.store(true);
            return true;
        }
        return false;
    };

    if (mode == Mode::Exact) {
        BinomialTable tbl;
        // Warm the shared denominator row so workers only read it.
        long jmax = 0;
        for (long k = 1; k <= kmax; ++k)
            jmax = std::max(jmax, 6 * k - pruned(m, s, k).lmin);
        tbl.row(36 * m - s, std::min(jmax, 36 * m - s));

        std::vector<PartialExact> parts(kmax + 1);
        std::exception_ptr err;
        std::mutex err_mu;
        auto work = [&](int w) {
            try {
                for (long k = 1 + w; k <= kmax; k += W) {
                    if (cut_short.load()) return;
                    parts[k] = partial_k_exact(m, s, k, tbl);
                    if (over_budget(parts[k].count)) return;
                }
            } catch (...) {
                std::scoped_lock lk(err_mu);
                if (!err) err = std::current_exception();
            }
        };
        if (W <= 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < W; ++w) pool.emplace_back(work, w);
            for (auto& th : pool) th.join();
        }
        if (err) std::rethrow_exception(err);

        Rational max_val;
        for (long k = 1; k <= kmax; ++k) {
            if (parts[k].count == 0) continue;
            rep.per_k_exact.emplace_back(k, parts[k].sum);
            rep.total_exact += parts[k].sum;
            rep.term_count += parts[k].count;
            if (parts[k].max_val > max_val) {
                max_val = parts[k].max_val;
                rep.max_term_index = parts[k].max_idx;
            }
        }
        rep.max_term_value = max_val.get_d();
    } else {
        LnFactCache lf(36 * m - s);
        std::vector<PartialInterval> parts(kmax + 1);
        std::exception_ptr err;
        std::mutex err_mu;
        auto work = [&](int w) {
            try {
                for (long k = 1 + w; k <= kmax; k += W) {
                    if (cut_short.load()) return;
                    parts[k] = partial_k_interval(m, s, k, lf);
                    if (over_budget(parts[k].count)) return;
                }
            } catch (...) {
                std::scoped_lock lk(err_mu);
                if (!err) err = std::current_exception();
            }
        };
        if (W <= 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < W; ++w) pool.emplace_back(work, w);
            for (auto& th : pool) th.join();
        }
        if (err) std::rethrow_exception(err);

        double max_hi = 0;
        for (long k = 1; k <= kmax; ++k) {
            if (parts[k].count == 0) continue;
            rep.per_k_interval.emplace_back(k, parts[k].sum);
            rep.total_interval += parts[k].sum;
            rep.term_count += parts[k].count;
            if (parts[k].max_hi > max_hi) {
                max_hi = parts[k].max_hi;
                rep.max_term_index = parts[k].max_idx;
            }
        }
        rep.max_term_value = max_hi;
    }

    rep.complete = !cut_short.load();
    rep.wall_time_s = seconds_since(t0);
    return rep;
}

SmaxResult s_max(long m, Mode mode, Scan scan, int workers, SumBudget budget,
                 bool escalate) {
    if (m < 1) throw std::domain_error("s_max: m must be >= 1");
    SmaxResult res;
    res.m = m;

    auto classify = [&](long s) {
        SumReport rep = lhs_sum(m, s, mode, workers, budget);
        int verdict = rep.below_one();
        if (verdict == 0 && rep.complete && mode == Mode::IntervalMode && escalate) {
            rep = lhs_sum(m, s, Mode::Exact, workers, budget);
            verdict = rep.below_one();
            res.escalated = true;
        }
        res.reports.push_back(std::move(rep));
        return verdict;
    };

    if (scan == Scan::Descending) {
        for (long s = 6 * m; s >= 0; --s) {
            int verdict = classify(s);
            if (verdict == 1) {
                res.s_max = s;
                return res;
            }
            if (verdict == 0) {
                res.decided = false;
                return res;
            }
        }
        res.s_max = -1;  // unreachable in practice: s < 4m sums are 0
        return res;
    }

    long best = -1;
    bool undecided_above = false;
    for (long s = 0; s <= 6 * m; ++s) {
        int verdict = classify(s);
        if (verdict == 1) best = s;
        else if (verdict == 0) undecided_above = true;
    }
    res.s_max = best;
    res.decided = !undecided_above || best == 6 * m;
    return res;
}

SmallKBound small_k_bound(long m, long s) {
    check_domain(m, s);
    if (s < 1) throw std::domain_error("small_k_bound: need s >= 1");
    long q = (13 * m + 4) / 5;  // ceil(2.6 m)
    SmallKBound out;
    BinomialTable tbl;
    for (long k = 1; k <= q; ++k) {
        Rational c(binom(6 * m, k) * binom(4 * m, k) * binom(8 * k, 5 * k),
                   binom(30 * m, 5 * k));
        c.canonicalize();
        out.collapsed += c;
        out.original += partial_k_exact(m, s, k, tbl).sum;
    }
    if (!(out.original <= out.collapsed))
        throw std::logic_error("small_k_bound: collapsed bound fails to dominate");
    return out;
}

std::string SumReport::to_json(bool deterministic, int indent) const {
    nlohmann::json j;
    j["m"] = m;
    j["s"] = s;
    j["mode"] = mode == Mode::Exact ? "exact" : "interval";
    if (mode == Mode::Exact) {
        j["total"] = rational_json(total_exact);
        nlohmann::json pk = nlohmann::json::array();
        for (auto& [k, v] : per_k_exact) {
            nlohmann::json e = rational_json(v);
            e["k"] = k;
            pk.push_back(e);
        }
        j["per_k"] = pk;
    } else {
        j["total"] = interval_json(total_interval);
        nlohmann::json pk = nlohmann::json::array();
        for (auto& [k, v] : per_k_interval) {
            nlohmann::json e = interval_json(v);
            e["k"] = k;
            pk.push_back(e);
        }
        j["per_k"] = pk;
    }
    j["max_term"] = {{"k", max_term_index.k},
                     {"l", max_term_index.l},
                     {"r", max_term_index.r},
                     {"value", max_term_value}};
    j["term_count"] = term_count;
    j["complete"] = complete;
    int verdict = below_one();
    j["below_one"] = verdict == 1 ? "certified" : verdict == -1 ? "refuted" : "undecided";
    if (!deterministic) j["wall_time_s"] = wall_time_s;
    return j.dump(indent);
}

std::string SumReport::per_k_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "k,partial,partial_lo,partial_hi\n";
    if (mode == Mode::Exact) {
        for (auto& [k, v] : per_k_exact)
            os << k << "," << v.get_d() << ",,\n";
    } else {
        for (auto& [k, v] : per_k_interval)
            os << k << "," << v.mid() << "," << v.lo << "," << v.hi << "\n";
    }
    return os.str();
}

std::string SmaxResult::to_json(bool deterministic, int indent) const {
    nlohmann::json j;
    j["m"] = m;
    j["s_max"] = s_max;
    j["decided"] = decided;
    j["escalated"] = escalated;
    if (s_max > 0) j["ratio"] = static_cast<double>(s_max) / static_cast<double>(m);
    nlohmann::json reps = nlohmann::json::array();
    for (auto& r : reports)
        reps.push_back(nlohmann::json::parse(r.to_json(deterministic, indent)));
    j["reports"] = reps;
    return j.dump(indent);
}

}  // namespace conc
