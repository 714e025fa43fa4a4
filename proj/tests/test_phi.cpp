#include "doctest.h"

#include <cmath>

#include "conc/phi.hpp"
#include "conc/rng.hpp"
#include "conc/sumbound.hpp"

using namespace conc;

namespace {

double uni(SplitMix64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng.next() >> 11) * 0x1.0p-53);
}

// Frozen reference numbers, computed independently at high precision.
const double kLStar = 2.89591019913736948832;
const double kRStar = 1.07810801202266772921;
const double kPhiAtStar = -0.00429532177204693664927;
const double kPhiAtPublished = -0.00429532177204736182174;
const double kSpuriousRoot = 2.86299144080733943553;
const double kCStar = 5.72488912243201714116;

}  // namespace

TEST_CASE("f_small: curvature formula, convexity, k=1 constant") {
    // second derivative against central differences
    double k = 1.7, m = 3, h0 = 1e-4;
    double fd2 = (f_small(k + h0, m) - 2 * f_small(k, m) + f_small(k - h0, m)) /
                 (h0 * h0);
    CHECK(f_small_d2(k, m) == doctest::Approx(1.9130172767182994).epsilon(1e-12));
    CHECK(fd2 == doctest::Approx(f_small_d2(k, m)).epsilon(1e-5));

    SplitMix64 rng(3);
    for (int i = 0; i < 200; ++i) {
        double mm = uni(rng, 1.0, 50.0);
        double kk = uni(rng, 1e-3, 3 * mm);
        CHECK(f_small_d2(kk, mm) > 0);
    }

    // m^3 exp(f(1,m)) settles to a constant near 0.03055
    CHECK(1e6 * std::exp(f_small(1, 1e2)) ==
          doctest::Approx(0.0306184).epsilon(1e-4));
    CHECK(1e9 * std::exp(f_small(1, 1e3)) ==
          doctest::Approx(0.0305610).epsilon(1e-4));
    CHECK(1e12 * std::exp(f_small(1, 1e4)) ==
          doctest::Approx(0.0305553).epsilon(1e-4));

    CHECK_THROWS_AS(f_small(0, 3), std::domain_error);
    CHECK_THROWS_AS(f_small(10, 3), std::domain_error);
}

TEST_CASE("f_small limit: h(6,2.6)+h(4,2.6)+h(20.8,13)-h(30,13)") {
    double limit = h(6.0, 2.6) + h(4.0, 2.6) + h(20.8, 13.0) - h(30.0, 13.0);
    CHECK(limit == doctest::Approx(-0.0712604533026515858).epsilon(1e-13));
    CHECK(limit < -0.07);
    // f(2.6m, m)/m approaches it from either side as m grows
    CHECK(f_small(2.6 * 1000, 1000) / 1000 == doctest::Approx(limit).epsilon(1e-9));
}

TEST_CASE("phi: frozen values, boundary zeros, domain checks") {
    CHECK(phi(5.7, 3.0, 2.8959102, 1.078108) ==
          doctest::Approx(kPhiAtPublished).epsilon(1e-12));
    CHECK(phi(5.7, 3.0, kLStar, kRStar) ==
          doctest::Approx(kPhiAtStar).epsilon(1e-12));
    CHECK(phi(5.7, 3.0, 2.8959102, 1.078108) < -0.004);

    // x = 0 boundary: the h(6-c, k-l) part contributes g-style zero
    double border = phi(5.7, 3.0, 3.0, 1.0);
    CHECK(std::isfinite(border));

    CHECK_THROWS_AS(phi(5.7, 3.0, 2.0, 1.0), std::domain_error);   // l < k+c-6
    CHECK_THROWS_AS(phi(5.7, 3.0, 3.2, 1.0), std::domain_error);   // l > k
    CHECK_THROWS_AS(phi(5.7, 3.0, 2.9, 2.0), std::domain_error);   // r > c-4
    CHECK_THROWS_AS(phi(5.7, 2.0, 2.0, 1.0), std::domain_error);   // k < 2.6
    CHECK_THROWS_AS(phi(7.0, 3.0, 3.0, 1.0), std::domain_error);   // c > 6
}

TEST_CASE("phi: interval template encloses the double value") {
    SplitMix64 rng(17);
    for (int i = 0; i < 200; ++i) {
        double c = uni(rng, 5.71, 5.95);
        double l = uni(rng, c - 3 + 0.02, 3 - 0.02);
        double r = uni(rng, c - 5 + 0.02, c - 4 - 0.02);
        Interval iv = phi(Interval(c), Interval(3.0), Interval(l), Interval(r));
        CHECK(iv.contains(phi(c, 3.0, l, r)));
        CHECK(iv.width() < 1e-11);
    }
}

TEST_CASE("phi_k3_wide: certified enclosures at the frozen points") {
    Rational c(57, 10);
    WideInterval published = phi_k3_wide(c, parse_rational("2.8959102"),
                                         parse_rational("1.078108"));
    CHECK(published.entirely_below(kPhiAtPublished + 1e-15));
    CHECK(published.entirely_above(kPhiAtPublished - 1e-15));
    CHECK(published.entirely_below(-0.004));
    CHECK(published.width() < 1e-40);

    WideInterval at_star =
        phi_k3_wide(c, parse_rational("2.89591019913736948832053390742822928789"),
                    parse_rational("1.07810801202266772921384142794104858836"));
    CHECK(at_star.entirely_below(kPhiAtStar + 1e-15));
    CHECK(at_star.entirely_above(kPhiAtStar - 1e-15));
}

TEST_CASE("psi: homogeneity anchor and limit toward phi") {
    // psi(m, 5.7m, 3m, lm, rm) = m * phi(5.7, 3, l, r) exactly by homogeneity
    for (long m : {10L, 20L, 40L}) {
        long s = (57 * m) / 10;
        if (10 * s != 57 * m) continue;  // need 5.7 m integral
        double l = 2.89, r = 1.07;
        double lhs = psi(m, s, 3.0 * m, l * m, r * m) / m;
        double rhs = phi(5.7, 3.0, l, r);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
    // and with non-integer ratios the scaled psi converges to phi
    double target = phi(5.7, 3.0, 2.9, 1.1);
    double prev_gap = 1e9;
    for (long m : {100L, 1000L, 10000L}) {
        long s = (57 * m + 9) / 10;
        double v = psi(m, s, 3.0 * m, 2.9 * m, 1.1 * m) / m;
        double gap = std::fabs(v - target);
        CHECK(gap < prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);
}

TEST_CASE("psi: measured negativity of the large-k exponent at s = ceil(5.7m)") {
    auto max_scaled_psi = [](long m) {
        long s = (57 * m + 9) / 10;
        double best = -1e18;
        long k_lo = static_cast<long>(std::floor(2.6 * m)) + 1;
        for (long k = k_lo; k <= 3 * m; ++k) {
            long lmin = std::max(0L, k - (6 * m - s)), lmax = std::min(k, s);
            long rmin = std::max(0L, k - (8 * m - s)), rmax = std::min(k, s - 4 * m);
            for (long l = lmin; l <= lmax; ++l)
                for (long r = rmin; r <= rmax; ++r)
                    best = std::max(best, psi(m, s, k, l, r) / m);
        }
        return best;
    };
    CHECK(max_scaled_psi(20) == doctest::Approx(-0.005792).epsilon(1e-3));
    CHECK(max_scaled_psi(40) == doctest::Approx(-0.004455).epsilon(1e-3));

    // with delta_1 = 0.004 (safe limit of the measurements above), the tail
    // envelope 0.4 * 9 * 30 * m^{7/2} exp(-delta_1 m) dies out
    auto envelope = [](double m) {
        return 0.4 * 9 * 30 * std::pow(m, 3.5) * std::exp(-0.004 * m);
    };
    for (double m = 4000; m <= 64000; m *= 2) CHECK(envelope(2 * m) < envelope(m));
    CHECK(envelope(100000.0) < 1e-100);
}

TEST_CASE("psi_term_bound: dominates the exact term everywhere, m <= 6") {
    for (long m = 1; m <= 6; ++m)
        for (long s : {4 * m, 5 * m, 6 * m})
            for (long k = 1; k <= 3 * m; ++k) {
                long lmin = std::max(0L, k - (6 * m - s)), lmax = std::min(k, s);
                long rmin = std::max(0L, k - (8 * m - s)),
                     rmax = std::min(k, s - 4 * m);
                for (long l = lmin; l <= lmax; ++l)
                    for (long r = rmin; r <= rmax; ++r) {
                        Rational t = term_exact(m, s, {k, l, r});
                        if (t == 0) continue;
                        Interval b = psi_term_bound(m, s, k, l, r);
                        CHECK(t < Rational(b.lo));  // certified domination
                    }
            }
}

TEST_CASE("dphi_dl / dphi_dr: zeros at the critical point and FD agreement") {
    CHECK(std::fabs(dphi_dl(5.7, kLStar, kRStar)) < 1e-12);
    CHECK(std::fabs(dphi_dr(5.7, kLStar, kRStar)) < 1e-12);

    SplitMix64 rng(23);
    for (int i = 0; i < 300; ++i) {
        double c = uni(rng, 5.71, 5.95);
        double l = uni(rng, c - 3 + 0.02, 3 - 0.02);
        double r = uni(rng, c - 5 + 0.02, c - 4 - 0.02);
        double h0 = 1e-6;
        double fd_l = (phi(c, 3.0, l + h0, r) - phi(c, 3.0, l - h0, r)) / (2 * h0);
        double fd_r = (phi(c, 3.0, l, r + h0) - phi(c, 3.0, l, r - h0)) / (2 * h0);
        CHECK(std::fabs(dphi_dl(c, l, r) - fd_l) <= 1e-5);
        CHECK(std::fabs(dphi_dr(c, l, r) - fd_r) <= 1e-5);
    }
}

TEST_CASE("dphi_dl: divergence toward the l-boundaries") {
    double prev_lo = -1e18, prev_hi = 1e18;
    for (double eps = 1e-2; eps >= 1e-8; eps /= 10) {
        double at_lo = dphi_dl(5.7, 2.7 + eps, 1.2);
        double at_hi = dphi_dl(5.7, 3.0 - eps, 1.2);
        CHECK(at_lo > prev_lo);   // climbs to +infinity
        CHECK(at_hi < prev_hi);   // falls to -infinity
        prev_lo = at_lo;
        prev_hi = at_hi;
    }
    CHECK(prev_lo > 10);
    CHECK(prev_hi < -10);
    CHECK_THROWS_AS(dphi_dl(5.7, 2.7, 1.2), std::domain_error);
}

TEST_CASE("quintic: coefficient anchors and evaluation at zero") {
    QuinticPoly p = quintic(5.7);
    CHECK(p.a[5] == doctest::Approx(2 * 5.7 - 18));
    double c = 5.7, c2 = c * c, c3 = c2 * c, c4 = c3 * c;
    CHECK(p.a[0] == doctest::Approx(126 * c4 - 4536 * c3 + 40824 * c2));
    CHECK(p.eval(0.0) == doctest::Approx(p.a[0]));
}

TEST_CASE("quintic roots in (2.7, 3) at c = 5.7: the root pair and stability") {
    auto roots = quintic_roots_in(5.7, 2.7, 3.0);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(kSpuriousRoot).epsilon(1e-9));
    CHECK(roots[1] == doctest::Approx(kLStar).epsilon(1e-9));
    CHECK(std::fabs(roots[1] - 2.8959102) < 1e-7);

    // stability under a 10x denser starting grid
    auto fine = quintic_roots_in(5.7, 2.7, 3.0, 1e-10, 40960);
    REQUIRE(fine.size() == 2);
    CHECK(fine[0] == doctest::Approx(roots[0]).epsilon(1e-9));
    CHECK(fine[1] == doctest::Approx(roots[1]).epsilon(1e-9));

    QuinticPoly p = quintic(5.7);
    for (double root : roots) CHECK(std::fabs(p.eval(root)) < 1e-4);
}

TEST_CASE("r_from_l: back-substitution and the spurious branch") {
    double r = r_from_l(5.7, kLStar);
    CHECK(r == doctest::Approx(kRStar).epsilon(1e-10));
    CHECK(std::fabs(r - 1.078108) < 1e-7);
    // substituting back solves (dl) = 0 for any valid l
    SplitMix64 rng(29);
    for (int i = 0; i < 100; ++i) {
        double l = uni(rng, 2.75, 2.95);
        double rr = r_from_l(5.7, l);
        if (rr <= 0.7 || rr >= 1.7) continue;  // outside the r box: no (dl) value
        CHECK(std::fabs(dphi_dl(5.7, l, rr)) < 1e-10);
    }
    // the other quintic root back-substitutes far outside the r box
    CHECK(r_from_l(5.7, kSpuriousRoot) ==
          doctest::Approx(-3.76715501696388).epsilon(1e-6));
    CHECK_THROWS_AS(r_from_l(5.7, 2.7), std::domain_error);
}

TEST_CASE("critical_points(5.7): exactly one survivor with tiny residuals") {
    auto cps = critical_points(5.7);
    REQUIRE(cps.size() == 1);
    CHECK(cps[0].l == doctest::Approx(kLStar).epsilon(1e-12));
    CHECK(cps[0].r == doctest::Approx(kRStar).epsilon(1e-12));
    CHECK(cps[0].phi_value == doctest::Approx(kPhiAtStar).epsilon(1e-12));
    CHECK(std::fabs(cps[0].residual_l) < 1e-10);
    CHECK(std::fabs(cps[0].residual_r) < 1e-10);
    // inside the published boxes
    CHECK(cps[0].l > 2.7);
    CHECK(cps[0].l < 3.0);
    CHECK(cps[0].r > 0.7);
    CHECK(cps[0].r < 1.7);
}

TEST_CASE("max_phi_k3(5.7): negative with margin, grid dominated, Lipschitz") {
    MaxPhiReport rep = max_phi_k3(5.7);
    CHECK(!rep.degenerate_line);
    CHECK(rep.max_value == doctest::Approx(kPhiAtStar).epsilon(1e-12));
    CHECK(rep.max_value < -0.004 + 20e-7);
    CHECK(rep.max_value <= -0.003);  // required margin
    CHECK(rep.grid_max <= rep.max_value + 1e-9);
    CHECK(rep.grid_margin >= -1e-9);
    // sampled derivative bounds on [2.89, 2.9] x [1.07, 1.08] stay far below
    // the coarse Lipschitz constant 10 (frozen: ~0.092 and ~0.048)
    CHECK(rep.lip_dl_max < 10.0);
    CHECK(rep.lip_dr_max < 10.0);
    CHECK(rep.lip_dl_max == doctest::Approx(0.0913).epsilon(0.05));
    CHECK(rep.lip_dr_max == doctest::Approx(0.0480).epsilon(0.05));

    std::string j = rep.to_json(true);
    CHECK(j.find("\"negative_certified\": true") != std::string::npos);
}

TEST_CASE("max_phi_k3: sign along the c-axis and the degenerate c = 6 line") {
    CHECK(max_phi_k3(5.72).max_value ==
          doctest::Approx(-8.40078e-4).epsilon(1e-4));
    CHECK(max_phi_k3(5.75).max_value == doctest::Approx(4.2864e-3).epsilon(1e-4));
    CHECK(max_phi_k3(5.9).max_value == doctest::Approx(2.89129e-2).epsilon(1e-4));
    CHECK(max_phi_k3(5.724889).max_value < 0);
    CHECK(max_phi_k3(5.72489).max_value > 0);

    MaxPhiReport at6 = max_phi_k3(6.0);
    CHECK(at6.degenerate_line);
    CHECK(at6.witness.l == 3.0);
    CHECK(at6.max_value >= 0);
    CHECK(at6.max_value == doctest::Approx(0.0444090672738792).epsilon(1e-6));
    CHECK(at6.witness.r == doctest::Approx(1.30555).epsilon(1e-3));
}

TEST_CASE("grid dominance in k: phi is maximal at k = 3 at matched (x, y)") {
    const double c = 5.7;
    for (int ik = 0; ik <= 8; ++ik) {
        double k = 2.6 + 0.05 * ik;
        for (int ix = 0; ix <= 6; ++ix) {
            double x = (6 - c) * ix / 6;
            for (int iy = 0; iy <= 8; ++iy) {
                double y = iy / 8.0;
                double at_k = phi(c, k, k - x, c - 4 - (4 - k) * y);
                double at_3 = phi(c, 3.0, 3.0 - x, c - 4 - 1.0 * y);
                CHECK(at_k <= at_3 + 1e-12);
            }
        }
    }
}

TEST_CASE("c_star: bracket, bisection consistency, tolerance floor") {
    CStarReport rep = c_star(1e-7);
    CHECK(rep.value > 5.724889);
    CHECK(rep.value < 5.72489);
    CHECK(rep.value == doctest::Approx(kCStar).epsilon(1e-7));
    CHECK(rep.bracket_hi - rep.bracket_lo <= 1e-7);
    CHECK(rep.iterations >= 20);
    // phi* straddles zero at +-10 tolerance around the root
    CHECK(max_phi_k3(rep.value - 10 * 1e-7).max_value < 0);
    CHECK(max_phi_k3(rep.value + 10 * 1e-7).max_value > 0);
    CHECK_THROWS_AS(c_star(1e-9), std::invalid_argument);
}

TEST_CASE("c_star vs bound-evaluator: s_max ratio stays above c*") {
    SmaxResult m20 = s_max(20, Mode::IntervalMode, Scan::Descending);
    REQUIRE(m20.decided);
    CHECK(static_cast<double>(m20.s_max) / 20 >= kCStar);
    SmaxResult m50 = s_max(50, Mode::IntervalMode, Scan::Descending);
    REQUIRE(m50.decided);
    CHECK(static_cast<double>(m50.s_max) / 50 >= kCStar);
}

TEST_CASE("dphi_dk decomposition: frozen sample, edge limits, positivity grid") {
    DkParts d = dphi_dk_decomposition(5.7, 2.8, 0.15, 0.4);
    CHECK(d.total == doctest::Approx(3.51904669051925638).epsilon(1e-12));
    CHECK(d.total == doctest::Approx(d.D1 + d.D2 + d.D3 + d.D4).epsilon(1e-15));

    CHECK(dphi_dk_decomposition(5.7, 2.8, 0.15, 0.0).D2 == 0.0);
    CHECK(dphi_dk_decomposition(5.7, 2.8, 0.15, 1.0).D3 == 0.0);

    // FD agreement in k at fixed (x, y)
    SplitMix64 rng(31);
    for (int i = 0; i < 200; ++i) {
        double c = uni(rng, 5.71, 5.95);
        double k = uni(rng, 2.65, 2.95);
        double x = uni(rng, 0.02, (6 - c) - 0.02);
        double y = uni(rng, 0.05, 0.95);
        double h0 = 1e-6;
        auto phik = [&](double kk) {
            return phi(c, kk, kk - x, c - 4 - (4 - kk) * y);
        };
        double fd = (phik(k + h0) - phik(k - h0)) / (2 * h0);
        CHECK(std::fabs(dphi_dk_decomposition(c, k, x, y).total - fd) <= 1e-5);
    }

    // positivity on the published 50x50x50 grid at c = 5.7 (closed box)
    double min_total = 1e18;
    for (int ik = 0; ik <= 50; ++ik)
        for (int ix = 0; ix <= 50; ++ix)
            for (int iy = 0; iy <= 50; ++iy) {
                DkParts dd = dphi_dk_decomposition(5.7, 2.6 + 0.4 * ik / 50,
                                                   0.3 * ix / 50, iy / 50.0);
                min_total = std::min(min_total, dd.total);
            }
    CHECK(min_total > 0);
    CHECK(min_total > 2.5);  // frozen coarse-grid value was ~2.9266
}

TEST_CASE("dphi_dk decomposition: D2 and D3 obey the -1/e style floors") {
    SplitMix64 rng(37);
    for (int i = 0; i < 500; ++i) {
        double c = uni(rng, 5.7, 5.999);
        double k = uni(rng, 2.6, 3.0);
        double x = uni(rng, 0.0, 6 - c);
        double y = uni(rng, 0.001, 0.999);
        DkParts d = dphi_dk_decomposition(c, k, x, y);
        CHECK(d.D2 >= -(c - 4) / (std::exp(1.0) * (4 - k)) - 1e-12);
        CHECK(d.D3 >= -(8 - c) / (std::exp(1.0) * (4 - k)) - 1e-12);
    }
}
