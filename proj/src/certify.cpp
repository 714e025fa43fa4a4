#include "conc/certify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "conc/binomial.hpp"
#include "conc/constants.hpp"
#include "conc/entropy.hpp"
#include "conc/extended.hpp"
#include "conc/phi.hpp"
#include "conc/rng.hpp"
#include "conc/search.hpp"
#include "conc/sumbound.hpp"

namespace conc {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

CriterionResult finish(CriterionResult res, const Timer& t, bool pass,
                       std::string detail) {
    res.seconds = t.elapsed();
    res.pass = pass && (res.budget_seconds == 0 || res.seconds <= res.budget_seconds);
    if (pass && !res.pass) detail += "; runtime budget exceeded";
    res.detail = std::move(detail);
    return res;
}

CriterionResult crit_smax_small(int workers) {
    CriterionResult res{"1", "union bound certifies s = 6m for m = 1..30", false, 0,
                        600, ""};
    Timer t;
    bool ok = true;
    std::ostringstream det;
    for (long m = 1; m <= 30 && ok; ++m) {
        SmaxResult r = s_max(m, Mode::Exact, Scan::Descending, workers);
        if (!r.decided || r.s_max != 6 * m) {
            ok = false;
            det << "m=" << m << ": s_max=" << r.s_max
                << (r.decided ? "" : " (undecided)");
        }
    }
    if (ok) det << "s_max(m) = 6m for every m in 1..30 (exact mode)";
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_sum_c57(int workers) {
    CriterionResult res{"2", "exact sum < 1 at s = ceil(5.7 m), m in {20,30,40}",
                        false, 0, 0, ""};
    Timer t;
    bool ok = true;
    std::ostringstream det;
    for (long m : {20L, 30L, 40L}) {
        long s = (57 * m + 9) / 10;  // ceil(5.7 m)
        SumReport r = lhs_sum(m, s, Mode::Exact, workers);
        bool below = r.complete && r.total_exact < 1;
        if (!below) ok = false;
        det << "m=" << m << " s=" << s << " sum=" << fmt(r.total_as_double())
            << (below ? " < 1; " : " NOT < 1; ");
    }
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_critical_point() {
    CriterionResult res{"3", "stationary point of phi(5.7,3,.,.)", false, 0, 1, ""};
    Timer t;
    bool ok = false;
    std::ostringstream det;
    try {
        auto cps = critical_points(5.7);
        for (const auto& cp : cps) {
            if (std::fabs(cp.l - 2.8959102) < 1e-6 &&
                std::fabs(cp.r - 1.078108) < 1e-6 &&
                cp.phi_value < -0.004 + 2e-6) {
                ok = true;
                det << "l*=" << fmt(cp.l) << " r*=" << fmt(cp.r)
                    << " phi=" << fmt(cp.phi_value) << " (< -0.004 + 2e-6)";
            }
        }
        if (!ok) det << "no critical point within tolerance (found " << cps.size()
                     << ")";
    } catch (const std::exception& e) {
        det << "exception: " << e.what();
    }
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_c_star() {
    CriterionResult res{"4", "zero crossing of max phi in c", false, 0, 10, ""};
    Timer t;
    bool ok = false;
    std::ostringstream det;
    try {
        CStarReport r = c_star(1e-7);
        ok = r.value > 5.724889 && r.value < 5.72489;
        det << "c*=" << fmt(r.value) << " bracket=[" << fmt(r.bracket_lo) << ", "
            << fmt(r.bracket_hi) << "] iterations=" << r.iterations
            << (ok ? " inside (5.724889, 5.72489)" : " OUTSIDE (5.724889, 5.72489)");
    } catch (const std::exception& e) {
        det << "exception: " << e.what();
    }
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_log_constants() {
    CriterionResult res{"5", "three logarithmic constants, wide intervals", false, 0,
                        0, ""};
    Timer t;
    WideInterval a =
        log(WideInterval(Rational(15, 41))) +
        WideInterval(Rational(161, 10)) / WideInterval(Rational(11651, 100));
    WideInterval b =
        WideInterval(5L) * log(WideInterval(Rational(41, 2)) /
                               WideInterval(Rational(173, 10))) +
        WideInterval(2L) * log(WideInterval(Rational(41, 2)) /
                               WideInterval(Rational(15, 2)));
    WideInterval c = log(WideInterval(Rational(27, 30))) -
                     WideInterval(4L) / exp(WideInterval(1L)) + WideInterval(2L);
    bool pa = a.entirely_below(-1e-3);
    bool pb = b.entirely_above(2 + 1e-3);
    bool pc = c.entirely_above(1e-3);
    std::ostringstream det;
    det << "ln(15/41)+16.1/116.51 in " << a.str(20) << (pa ? " < -1e-3" : " FAIL")
        << "; 5ln(20.5/17.3)+2ln(20.5/7.5) in " << b.str(20)
        << (pb ? " > 2+1e-3" : " FAIL") << "; ln(2.7/3)-4/e+2 in " << c.str(20)
        << (pc ? " > 1e-3" : " FAIL");
    return finish(std::move(res), t, pa && pb && pc, det.str());
}

CriterionResult crit_limit_constant() {
    CriterionResult res{"6", "small-k limit constant below -0.07", false, 0, 0, ""};
    Timer t;
    Rational x26(13, 5), x208(104, 5);
    WideInterval L = h_wide(Rational(6), x26) + h_wide(Rational(4), x26) +
                     h_wide(x208, Rational(13)) - h_wide(Rational(30), Rational(13));
    bool ok = L.entirely_below(-0.07 - 1e-4);
    std::ostringstream det;
    det << "h(6,2.6)+h(4,2.6)+h(20.8,13)-h(30,13) in " << L.str(20)
        << (ok ? " < -0.07 - 1e-4" : " margin FAIL");
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_stirling() {
    CriterionResult res{"7", "Stirling sandwich for all n <= 1000", false, 0, 30, ""};
    Timer t;
    uint64_t checked = 0;
    std::ostringstream det;
    bool ok = true;
    try {
        for (long n = 1; n <= 1000; ++n)
            for (long m = 0; m <= n; ++m) {
                stirling_sandwich(n, m);  // throws std::logic_error on violation
                ++checked;
            }
        det << checked << " (n,m) pairs sandwiched";
    } catch (const std::exception& e) {
        ok = false;
        det << "violation after " << checked << " pairs: " << e.what();
    }
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_identities() {
    CriterionResult res{"8", "Vandermonde and probability-factor identities, m <= 4",
                        false, 0, 0, ""};
    Timer t;
    uint64_t vandermonde = 0, factors = 0;
    std::ostringstream det;
    bool ok = true;
    try {
        for (long m = 1; m <= 4 && ok; ++m)
            for (long s = 4 * m; s <= 6 * m && ok; ++s) {
                for (long k = 1; k <= 3 * m; ++k) {
                    mpz_class left = 0, right = 0;
                    for (long l = 0; l <= k; ++l)
                        left += binom(s, l) * binom(6 * m - s, k - l);
                    for (long r = 0; r <= k; ++r)
                        right += binom(s - 4 * m, r) * binom(8 * m - s, k - r);
                    if (left != binom(6 * m, k) || right != binom(4 * m, k)) {
                        ok = false;
                        det << "Vandermonde fails at m=" << m << " s=" << s
                            << " k=" << k;
                        break;
                    }
                    vandermonde += 2;
                    for (long l = 0; l <= k; ++l)
                        for (long r = 0; r <= k; ++r) {
                            probability_factor(m, s, {k, l, r});  // throws on mismatch
                            ++factors;
                        }
                }
            }
        if (ok)
            det << vandermonde << " Vandermonde identities, " << factors
                << " probability factors cross-checked";
    } catch (const std::exception& e) {
        ok = false;
        det << "mismatch: " << e.what();
    }
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_search() {
    CriterionResult res{"9", "seeded search at m = 1, s in {0, 6}", false, 0, 60, ""};
    Timer t;
    bool ok = true;
    std::ostringstream det;
    for (long s : {0L, 6L}) {
        SearchReport r = random_search(1, s, 3, 1000, 20260814, 10'000'000);
        double ub = r.union_bound.get_d();
        double n = static_cast<double>(r.trials);
        double p = r.empirical_bad_rate;
        double sigma = std::sqrt(p * (1 - p) / n);
        bool good = r.good_count >= 1 && !r.any_budget_refusal &&
                    p <= ub + 3 * sigma;
        if (!good) ok = false;
        det << "s=" << s << ": good=" << r.good_count << "/" << r.trials
            << " bad_rate=" << fmt(p) << " union_bound=" << fmt(ub)
            << (good ? " ok; " : " FAIL; ");
    }
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_gradients() {
    CriterionResult res{"10", "analytic derivatives vs central differences", false, 0,
                        0, ""};
    Timer t;
    SplitMix64 rng(0x5eedULL);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng.next() >> 11) * 0x1.0p-53);
    };
    double worst = 0;
    std::string worst_what;
    const double tol = 1e-5;
    auto check = [&](const char* what, double analytic, double fd) {
        double err = std::fabs(analytic - fd) / std::max(1.0, std::fabs(analytic));
        if (err > worst) {
            worst = err;
            worst_what = what;
        }
    };
    for (int i = 0; i < 1000; ++i) {
        double c = uniform(5.71, 5.95);  // keeps every inset box below nonempty
        double l = uniform(c - 3 + 0.02, 3 - 0.02);
        double r = uniform(c - 5 + 0.02, c - 4 - 0.02);
        const double hstep = 1e-5;
        check("dphi_dl", dphi_dl(c, l, r),
              (phi(c, 3.0, l + hstep, r) - phi(c, 3.0, l - hstep, r)) / (2 * hstep));
        check("dphi_dr", dphi_dr(c, l, r),
              (phi(c, 3.0, l, r + hstep) - phi(c, 3.0, l, r - hstep)) / (2 * hstep));
        double k = uniform(2.65, 2.95);
        double x = uniform(0.02, (6 - c) - 0.02);
        double y = uniform(0.05, 0.95);
        auto phik = [&](double kk) {
            return phi(c, kk, kk - x, c - 4 - (4 - kk) * y);
        };
        check("dphi_dk", dphi_dk_decomposition(c, k, x, y).total,
              (phik(k + hstep) - phik(k - hstep)) / (2 * hstep));
    }
    bool ok = worst <= tol;
    std::ostringstream det;
    det << "3000 derivative checks at 1000 points; worst guarded relative error "
        << fmt(worst) << " (" << worst_what << ")";
    return finish(std::move(res), t, ok, det.str());
}

CriterionResult crit_constants() {
    CriterionResult res{"11", "downstream constants, exact rationals", false, 0, 0,
                        ""};
    Timer t;
    ConstantsReport a = constants(Rational(101, 20));
    ConstantsReport b = constants(Rational(6));
    bool ok = a.K == Rational(194, 5) && a.K_tilde == Rational(179, 5) &&
              a.w2 == Rational(363, 5) && b.K == Rational(89, 2);
    std::ostringstream det;
    det << "K(5.05)=" << to_string(a.K) << " K~(5.05)=" << to_string(a.K_tilde)
        << " w2(5.05)=" << to_string(a.w2) << " K(6)=" << to_string(b.K);
    return finish(std::move(res), t, ok, det.str());
}

}  // namespace

std::vector<CriterionResult> run_acceptance(int workers) {
    std::vector<CriterionResult> out;
    out.push_back(crit_smax_small(workers));
    out.push_back(crit_sum_c57(workers));
    out.push_back(crit_critical_point());
    out.push_back(crit_c_star());
    out.push_back(crit_log_constants());
    out.push_back(crit_limit_constant());
    out.push_back(crit_stirling());
    out.push_back(crit_identities());
    out.push_back(crit_search());
    out.push_back(crit_gradients());
    out.push_back(crit_constants());
    return out;
}

CriterionResult run_stretch(int workers) {
    CriterionResult res{"1S", "interval scan m = 31..150 plus refutation at 151",
                        false, 0, 7200, ""};
    Timer t;
    bool ok = true;
    std::ostringstream det;
    for (long m = 31; m <= 150 && ok; ++m) {
        SmaxResult r = s_max(m, Mode::IntervalMode, Scan::Descending, workers);
        if (!r.decided || r.s_max != 6 * m) {
            ok = false;
            det << "m=" << m << ": s_max=" << r.s_max
                << (r.decided ? "" : " (undecided)");
        }
    }
    if (ok) {
        SumReport r = lhs_sum(151, 906, Mode::IntervalMode, workers);
        if (r.below_one() == -1) {
            det << "s = 6m certified for m in 31..150; at m=151, s=906 the sum is "
                << fmt(r.total_as_double()) << " >= 1 (refuted)";
        } else {
            ok = false;
            det << "m=151 s=906 expected refutation, got verdict "
                << r.below_one();
        }
    }
    return finish(std::move(res), t, ok, det.str());
}

std::string criteria_to_json(const std::vector<CriterionResult>& results,
                             bool deterministic, int indent) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json j;
        j["id"] = r.id;
        j["name"] = r.name;
        j["pass"] = r.pass;
        if (!deterministic) j["seconds"] = r.seconds;
        j["budget_seconds"] = r.budget_seconds;
        j["detail"] = r.detail;
        arr.push_back(j);
    }
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    nlohmann::json top;
    top["criteria"] = arr;
    top["all_pass"] = all;
    return top.dump(indent);
}

}  // namespace conc
