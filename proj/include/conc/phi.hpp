#pragma once
// The continuous side of the argument.  Scaling the sum index by m and the
// degree budget by c = s/m turns the largest-term exponent into
//
//   phi(c,k,l,r) = h(c,l) + h(6-c,k-l) + h(c-4,r) + h(8-c,k-r)
//                  + h(8k-r,6k-l) - h(36-c,6k-l)
//
// on the domain k in [2.6,3], k+c-6 <= l <= k, k+c-8 <= r <= c-4.  Negativity
// of its maximum at k = 3 drives the whole large-m estimate; the maximum is
// located through the stationarity system (a quintic in l after eliminating
// r) and the zero crossing of the max in c is the threshold ratio c*.
//
// psi(m,s,k,l,r) is the finite-m analog with arguments
// (s, 6m-s, s-4m, 8m-s, 36m-s); each sum term is < 30 sqrt(m) exp(psi).

#include <array>
#include <string>
#include <vector>

#include "conc/entropy.hpp"
#include "conc/interval.hpp"
#include "conc/rational.hpp"

namespace conc {

// f(k,m) = h(6m,k) + h(4m,k) + h(8k,5k) - h(30m,5k): the exponent of the
// Vandermonde-collapsed small-k bound.  Real k, real m (for limit checks).
double f_small(double k, double m);
// d^2 f / dk^2 = 3/k + 4/(6m-k) - 1/(4m-k)  (positive on (0,3m]).
double f_small_d2(double k, double m);

template <class T>
T phi(const T& c, const T& k, const T& l, const T& r) {
    T six(6.0), eight(8.0), thirtysix(36.0), four(4.0);
    return h(c, l) + h(six - c, k - l) + h(c - four, r) + h(eight - c, k - r) +
           h(eight * k - r, six * k - l) - h(thirtysix - c, six * k - l);
}

double phi(double c, double k, double l, double r);  // with (dom) validation

// phi at k = 3 evaluated in wide interval arithmetic from exact rationals;
// used for the tight negativity certifications.
WideInterval phi_k3_wide(const Rational& c, const Rational& l, const Rational& r);

double psi(long m, long s, double k, double l, double r);
// Certified upper bound 30 sqrt(m) exp(psi), rounded outward.
Interval psi_term_bound(long m, long s, long k, long l, long r);

// Partial derivatives of phi(c,3,l,r).  d/dl has the (18-c+l) factor: the
// printed source has (18-c-l) there, but that variant fails the
// finite-difference check and sends the eliminated r outside its domain
// (see decisions log), so the corrected sign is used throughout.
double dphi_dl(double c, double l, double r);
double dphi_dr(double c, double l, double r);

struct DkParts {
    double D1 = 0, D2 = 0, D3 = 0, D4 = 0;
    double total = 0;  // = d phi / dk at fixed (x, y)
};

// d phi/dk under the substitution x = k - l, y = (c-4-r)/(4-k), split into
// the four summands whose individual lower bounds make the total positive.
DkParts dphi_dk_decomposition(double c, double k, double x, double y);

struct QuinticPoly {
    // coefficients a[5]..a[0] for a5 l^5 + ... + a0, each polynomial in c
    std::array<double, 6> a{};
    double eval(double l) const;
};

QuinticPoly quintic(double c);

// All real roots in (lo, hi): sign changes on a grid, refined by bisection
// to tol; the count must be stable when the grid is refined (throws
// std::runtime_error on an unresolved cluster).
std::vector<double> quintic_roots_in(double c, double lo, double hi,
                                     double tol = 1e-10, int grid = 4096);

// The unique r with dphi_dl(c,l,r) = 0 (linear in r):
//   r = 6 + l - (c-l)(3-l)(18-c+l) / (l (3-c+l)).
double r_from_l(double c, double l);

struct CriticalPoint {
    double l = 0, r = 0;
    double phi_value = 0;
    double residual_l = 0;  // dphi_dl at the point
    double residual_r = 0;  // dphi_dr at the point
};

// Interior critical points of phi(c,3,.,.): quintic roots in (c-3,3), r by
// back-substitution, kept only if r lands inside (c-5,c-4) with a small
// dphi_dr residual, then polished by 2-D Newton.  Spurious algebraic roots
// of the eliminated system are filtered here.
std::vector<CriticalPoint> critical_points(double c);

struct MaxPhiReport {
    double c = 0;
    double max_value = 0;        // phi at the critical point (or line max at c=6)
    CriticalPoint witness;
    double grid_max = 0;         // best value seen on the certification grid
    double grid_margin = 0;      // max_value - grid_max (>= 0 expected)
    double lip_dl_max = 0;       // sampled |dphi_dl| bound near the witness
    double lip_dr_max = 0;
    bool degenerate_line = false;  // c = 6: l is pinned at 3, 1-D max in r
    std::string to_json(bool deterministic = false, int indent = 2) const;
};

// Maximum of phi(c,3,l,r) over the closed (dom) rectangle, c in [5.7, 6].
// Critical-point route plus a dense grid sweep as certification; throws if
// the grid beats the critical value by more than float slack (wrong or
// missed critical point).
MaxPhiReport max_phi_k3(double c, double grid_step = 1e-3);

struct CStarReport {
    double value = 0;
    double bracket_lo = 0, bracket_hi = 0;
    int iterations = 0;
    std::string to_json(bool deterministic = false, int indent = 2) const;
};

// Bisection of c -> max phi(c,3,.,.) on [5.7, 6] down to tol (>= 1e-8).
// Aborts with diagnostics if the tracked critical point is lost.
CStarReport c_star(double tol);

}  // namespace conc
