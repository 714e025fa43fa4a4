#pragma once
// Wide directed-rounding intervals over MPFR, for the certifications whose
// margins sit far below float64 noise (the -0.004 maximum, the bracket
// endpoints around c*, the closed-form log constants).  Default working
// precision is 256 bits (~77 decimal digits); anything >= 50 digits is
// accepted.  Semantics mirror conc::Interval: every operation encloses the
// true result, invalid domains throw.

#include <gmpxx.h>
#include <mpfr.h>
#include <string>

namespace conc {

class WideInterval {
  public:
    WideInterval();                       // [0,0] at default precision
    explicit WideInterval(double x);      // exact (precision >= 53)
    explicit WideInterval(long x);        // exact
    WideInterval(const mpq_class& q);     // outward by one ulp at working precision
    WideInterval(const WideInterval&);
    WideInterval(WideInterval&&) noexcept;
    WideInterval& operator=(const WideInterval&);
    WideInterval& operator=(WideInterval&&) noexcept;
    ~WideInterval();

    // Working precision for newly constructed values, in bits.
    static void set_default_precision_bits(mpfr_prec_t bits);
    static mpfr_prec_t default_precision_bits();
    // Convenience: decimal digits -> bits (with guard), clamped to >= 170
    // bits so the >= 50-digit floor always holds.
    static void set_default_precision_digits(int digits);

    double lo_double() const;  // rounded down
    double hi_double() const;  // rounded up
    double width() const;      // upper bound on hi - lo
    bool entirely_below(double x) const;  // hi < x
    bool entirely_above(double x) const;  // lo > x
    bool contains_zero() const;

    friend WideInterval operator+(const WideInterval&, const WideInterval&);
    friend WideInterval operator-(const WideInterval&, const WideInterval&);
    friend WideInterval operator*(const WideInterval&, const WideInterval&);
    friend WideInterval operator/(const WideInterval&, const WideInterval&);
    WideInterval operator-() const;

    friend WideInterval log(const WideInterval&);   // requires lo > 0
    friend WideInterval exp(const WideInterval&);
    friend WideInterval sqrt(const WideInterval&);  // requires lo >= 0

    bool zero() const;          // exactly [0,0]
    bool nonnegative() const;   // lo >= 0
    WideInterval lower_endpoint() const;  // degenerate [lo, lo]
    WideInterval upper_endpoint() const;  // degenerate [hi, hi]
    static WideInterval hull(const WideInterval&, const WideInterval&);
    std::string str(int digits = 25) const;

    const mpfr_t& lo_raw() const { return lo_; }
    const mpfr_t& hi_raw() const { return hi_; }

  private:
    mpfr_t lo_, hi_;
    void init();
};

}  // namespace conc
