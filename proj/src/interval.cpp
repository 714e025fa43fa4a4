#include "conc/interval.hpp"

#include <mpfr.h>

#include <algorithm>
#include <sstream>

namespace conc {

namespace {

// One mpfr scratch register per rounding direction, 53 bits: results are the
// correctly rounded double bounds.  thread_local so parallel sweeps don't
// contend or race.
struct Scratch {
    mpfr_t t;
    Scratch() { mpfr_init2(t, 53); }
    ~Scratch() { mpfr_clear(t); }
};

double mpfr_unary(double x, int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t),
                  mpfr_rnd_t rnd) {
    thread_local Scratch s;
    mpfr_set_d(s.t, x, MPFR_RNDN);  // exact, x is already a double
    fn(s.t, s.t, rnd);
    return mpfr_get_d(s.t, rnd);
}

}  // namespace

Interval Interval::from_rational(const mpq_class& q) {
    thread_local Scratch s;
    mpfr_set_q(s.t, q.get_mpq_t(), MPFR_RNDD);
    double lo = mpfr_get_d(s.t, MPFR_RNDD);
    mpfr_set_q(s.t, q.get_mpq_t(), MPFR_RNDU);
    double hi = mpfr_get_d(s.t, MPFR_RNDU);
    return Interval(lo, hi);
}

Interval Interval::from_integer(const mpz_class& z) {
    thread_local Scratch s;
    mpfr_set_z(s.t, z.get_mpz_t(), MPFR_RNDD);
    double lo = mpfr_get_d(s.t, MPFR_RNDD);
    mpfr_set_z(s.t, z.get_mpz_t(), MPFR_RNDU);
    double hi = mpfr_get_d(s.t, MPFR_RNDU);
    return Interval(lo, hi);
}

bool Interval::contains(const mpq_class& q) const {
    // exact: doubles convert to rationals losslessly
    return mpq_class(lo) <= q && q <= mpq_class(hi);
}

Interval operator*(const Interval& a, const Interval& b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    double lo = std::min(std::min(p1, p2), std::min(p3, p4));
    double hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return Interval(ulp_down(lo), ulp_up(hi));
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0 && b.hi >= 0)
        throw std::domain_error("interval division by interval containing 0");
    double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
    double lo = std::min(std::min(q1, q2), std::min(q3, q4));
    double hi = std::max(std::max(q1, q2), std::max(q3, q4));
    return Interval(ulp_down(lo), ulp_up(hi));
}

Interval log(const Interval& x) {
    if (x.lo <= 0) throw std::domain_error("interval log: argument not > 0");
    return Interval(mpfr_unary(x.lo, mpfr_log, MPFR_RNDD),
                    mpfr_unary(x.hi, mpfr_log, MPFR_RNDU));
}

Interval exp(const Interval& x) {
    return Interval(mpfr_unary(x.lo, mpfr_exp, MPFR_RNDD),
                    mpfr_unary(x.hi, mpfr_exp, MPFR_RNDU));
}

Interval sqrt(const Interval& x) {
    if (x.lo < 0) throw std::domain_error("interval sqrt: negative argument");
    // IEEE sqrt is correctly rounded; widen by an ulp each way.
    return Interval(x.lo == 0 ? 0.0 : ulp_down(std::sqrt(x.lo)),
                    ulp_up(std::sqrt(x.hi)));
}

Interval pow_int(const Interval& x, long e) {
    if (e == 0) return Interval(1.0);
    if (e < 0) return Interval(1.0) / pow_int(x, -e);
    Interval acc(1.0), base = x;
    for (long n = e; n > 0; n >>= 1) {
        if (n & 1) acc *= base;
        if (n > 1) base *= base;
    }
    return acc;
}

Interval neg_inv_e() {
    thread_local Scratch s;
    // -1/e rounded down: e rounded down -> 1/e rounded up -> negate.
    mpfr_set_ui(s.t, 1, MPFR_RNDN);
    mpfr_exp(s.t, s.t, MPFR_RNDD);
    mpfr_ui_div(s.t, 1, s.t, MPFR_RNDU);
    double lo = -mpfr_get_d(s.t, MPFR_RNDU);
    mpfr_set_ui(s.t, 1, MPFR_RNDN);
    mpfr_exp(s.t, s.t, MPFR_RNDU);
    mpfr_ui_div(s.t, 1, s.t, MPFR_RNDD);
    double hi = -mpfr_get_d(s.t, MPFR_RNDD);
    return Interval(lo, hi);
}

std::string Interval::str() const {
    std::ostringstream os;
    os.precision(17);
    os << "[" << lo << ", " << hi << "]";
    return os.str();
}

}  // namespace conc
