#include "conc/entropy.hpp"

#include <mpfr.h>

#include <algorithm>

#include "conc/binomial.hpp"

namespace conc {

namespace {

Interval g_point(double x) {
    if (x == 0.0) return Interval(0.0);
    Interval xi(x);
    return xi * log(xi);
}

}  // namespace

// Outward rounding can push an enclosure of an exactly-zero difference a few
// ulps below 0; intersect such dust with the domain [0, inf) instead of
// rejecting it.  Anything below -kDomainDust is a genuine caller error.
constexpr double kDomainDust = 1e-9;

Interval g(const Interval& x) {
    if (x.lo < -kDomainDust) throw std::domain_error("g: negative argument");
    Interval xx(std::max(x.lo, 0.0), std::max(x.hi, 0.0));
    if (xx.hi == 0) return Interval(0.0);
    Interval a = g_point(xx.lo);
    Interval b = g_point(xx.hi);
    double lo = std::min(a.lo, b.lo);
    double hi = std::max(a.hi, b.hi);
    // t ln t dips to -1/e at t = 1/e; include it when x may straddle.
    Interval nie = neg_inv_e();
    Interval ie = -nie;  // enclosure of 1/e
    if (xx.lo < ie.hi && xx.hi > ie.lo) lo = std::min(lo, nie.lo);
    return Interval(lo, hi);
}

WideInterval g(const WideInterval& x) {
    if (!x.nonnegative()) {
        if (mpfr_cmp_d(x.lo_raw(), -kDomainDust) < 0)
            throw std::domain_error("g: negative argument");
        // dust below zero: intersect with the domain
        if (mpfr_sgn(x.hi_raw()) <= 0) return WideInterval(0L);
        return g(WideInterval::hull(WideInterval(0L), x.upper_endpoint()));
    }
    if (x.zero()) return WideInterval(0L);
    auto g_pt = [](const WideInterval& e) {
        if (e.zero()) return WideInterval(0L);
        return e * log(e);
    };
    WideInterval res = WideInterval::hull(g_pt(x.lower_endpoint()),
                                          g_pt(x.upper_endpoint()));
    WideInterval ie = exp(WideInterval(-1.0));  // 1/e
    if (mpfr_cmp(x.lo_raw(), ie.hi_raw()) < 0 &&
        mpfr_cmp(x.hi_raw(), ie.lo_raw()) > 0) {
        res = WideInterval::hull(res, -ie);
    }
    return res;
}

StirlingSandwich stirling_sandwich(long n, long m) {
    if (n < 1 || m < 0 || m > n)
        throw std::invalid_argument("stirling_sandwich: need 1 <= n, 0 <= m <= n");
    Interval H = h(Interval(static_cast<double>(n)), Interval(static_cast<double>(m)));
    Interval U = exp(H);
    if (!std::isfinite(U.hi))
        throw std::invalid_argument("stirling_sandwich: n too large for float64 range");
    Interval L = U / (Interval(5.0) * sqrt(Interval(static_cast<double>(n))));
    StirlingSandwich out;
    out.lower = L.lo;
    out.upper = U.hi;
    out.value = binom(n, m);
    if (cmp(out.value, out.lower) < 0 || cmp(out.value, out.upper) > 0)
        throw std::logic_error("stirling sandwich violated: bug in h or binom");
    return out;
}

}  // namespace conc
