#include "conc/extended.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace conc {

namespace {
std::atomic<mpfr_prec_t> g_default_prec{256};
}

void WideInterval::set_default_precision_bits(mpfr_prec_t bits) {
    if (bits < 170) bits = 170;  // >= ~50 decimal digits, always
    g_default_prec.store(bits);
}

mpfr_prec_t WideInterval::default_precision_bits() {
    return g_default_prec.load();
}

void WideInterval::set_default_precision_digits(int digits) {
    if (digits < 50) digits = 50;
    set_default_precision_bits(static_cast<mpfr_prec_t>(digits * 3.3220) + 16);
}

void WideInterval::init() {
    mpfr_prec_t p = default_precision_bits();
    mpfr_init2(lo_, p);
    mpfr_init2(hi_, p);
}

WideInterval::WideInterval() {
    init();
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

WideInterval::WideInterval(double x) {
    init();
    mpfr_set_d(lo_, x, MPFR_RNDN);  // exact: precision >= 53
    mpfr_set_d(hi_, x, MPFR_RNDN);
}

WideInterval::WideInterval(long x) {
    init();
    mpfr_set_si(lo_, x, MPFR_RNDN);
    mpfr_set_si(hi_, x, MPFR_RNDN);
}

WideInterval::WideInterval(const mpq_class& q) {
    init();
    mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

WideInterval::WideInterval(const WideInterval& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

WideInterval::WideInterval(WideInterval&& o) noexcept {
    lo_[0] = o.lo_[0];
    hi_[0] = o.hi_[0];
    // leave the source valid for its destructor
    mpfr_init2(o.lo_, MPFR_PREC_MIN);
    mpfr_init2(o.hi_, MPFR_PREC_MIN);
}

WideInterval& WideInterval::operator=(const WideInterval& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
        mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

WideInterval& WideInterval::operator=(WideInterval&& o) noexcept {
    if (this != &o) {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    return *this;
}

WideInterval::~WideInterval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

double WideInterval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double WideInterval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double WideInterval::width() const {
    mpfr_t d;
    mpfr_init2(d, 64);
    mpfr_sub(d, hi_, lo_, MPFR_RNDU);
    double w = mpfr_get_d(d, MPFR_RNDU);
    mpfr_clear(d);
    return w;
}

bool WideInterval::entirely_below(double x) const { return mpfr_cmp_d(hi_, x) < 0; }
bool WideInterval::entirely_above(double x) const { return mpfr_cmp_d(lo_, x) > 0; }

bool WideInterval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool WideInterval::zero() const {
    return mpfr_zero_p(lo_) && mpfr_zero_p(hi_);
}

bool WideInterval::nonnegative() const { return mpfr_sgn(lo_) >= 0; }

WideInterval operator+(const WideInterval& a, const WideInterval& b) {
    WideInterval r;
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

WideInterval operator-(const WideInterval& a, const WideInterval& b) {
    WideInterval r;
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

WideInterval WideInterval::operator-() const {
    WideInterval r;
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

WideInterval operator*(const WideInterval& a, const WideInterval& b) {
    WideInterval r;
    mpfr_t t;
    mpfr_init2(t, WideInterval::default_precision_bits());
    // lo: min of the four products rounded down
    mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDD);
    if (mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
    if (mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDD);
    if (mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
    // hi: max of the four rounded up
    mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
    mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDU);
    if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDU);
    if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
    if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

WideInterval operator/(const WideInterval& a, const WideInterval& b) {
    if (b.contains_zero())
        throw std::domain_error("WideInterval division by interval containing 0");
    WideInterval r;
    mpfr_t t;
    mpfr_init2(t, WideInterval::default_precision_bits());
    mpfr_div(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_div(t, a.lo_, b.hi_, MPFR_RNDD);
    if (mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
    mpfr_div(t, a.hi_, b.lo_, MPFR_RNDD);
    if (mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
    mpfr_div(t, a.hi_, b.hi_, MPFR_RNDD);
    if (mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
    mpfr_div(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
    mpfr_div(t, a.lo_, b.hi_, MPFR_RNDU);
    if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
    mpfr_div(t, a.hi_, b.lo_, MPFR_RNDU);
    if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
    mpfr_div(t, a.hi_, b.hi_, MPFR_RNDU);
    if (mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

WideInterval log(const WideInterval& x) {
    if (mpfr_sgn(x.lo_) <= 0)
        throw std::domain_error("WideInterval log: argument not > 0");
    WideInterval r;
    mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

WideInterval exp(const WideInterval& x) {
    WideInterval r;
    mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

WideInterval sqrt(const WideInterval& x) {
    if (mpfr_sgn(x.lo_) < 0)
        throw std::domain_error("WideInterval sqrt: negative argument");
    WideInterval r;
    mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

WideInterval WideInterval::lower_endpoint() const {
    WideInterval r;
    mpfr_set(r.lo_, lo_, MPFR_RNDD);
    mpfr_set(r.hi_, lo_, MPFR_RNDU);
    return r;
}

WideInterval WideInterval::upper_endpoint() const {
    WideInterval r;
    mpfr_set(r.lo_, hi_, MPFR_RNDD);
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

WideInterval WideInterval::hull(const WideInterval& a, const WideInterval& b) {
    WideInterval r;
    mpfr_set(r.lo_, mpfr_cmp(a.lo_, b.lo_) <= 0 ? a.lo_ : b.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_cmp(a.hi_, b.hi_) >= 0 ? a.hi_ : b.hi_, MPFR_RNDU);
    return r;
}

std::string WideInterval::str(int digits) const {
    char* lo_s = nullptr;
    char* hi_s = nullptr;
    mpfr_asprintf(&lo_s, "%.*Rg", digits, lo_);
    mpfr_asprintf(&hi_s, "%.*Rg", digits, hi_);
    std::string out = std::string("[") + lo_s + ", " + hi_s + "]";
    mpfr_free_str(lo_s);
    mpfr_free_str(hi_s);
    return out;
}

}  // namespace conc
