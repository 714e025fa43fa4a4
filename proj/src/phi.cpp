#include "conc/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace conc {

namespace {

constexpr double kDustEps = 1e-12;  // float-dust slack for domain checks

double lg(double x, const char* what) {
    if (!(x > 0)) {
        std::ostringstream os;
        os << what << ": log argument " << x << " not positive";
        throw std::domain_error(os.str());
    }
    return std::log(x);
}

}  // namespace

double f_small(double k, double m) {
    if (!(k > 0) || k > 3 * m)
        throw std::domain_error("f_small: need 0 < k <= 3m");
    return h(6 * m, k) + h(4 * m, k) + h(8 * k, 5 * k) - h(30 * m, 5 * k);
}

double f_small_d2(double k, double m) {
    return 3 / k + 4 / (6 * m - k) - 1 / (4 * m - k);
}

double phi(double c, double k, double l, double r) {
    if (!(c > 4 && c <= 6)) throw std::domain_error("phi: c outside (4, 6]");
    if (k < 2.6 - kDustEps || k > 3 + kDustEps)
        throw std::domain_error("phi: k outside [2.6, 3]");
    if (l < k + c - 6 - kDustEps || l > k + kDustEps)
        throw std::domain_error("phi: l outside [k+c-6, k]");
    if (r < k + c - 8 - kDustEps || r > c - 4 + kDustEps)
        throw std::domain_error("phi: r outside [k+c-8, c-4]");
    // clamp away float dust so the h calls never see a negative difference
    k = std::clamp(k, 2.6, 3.0);
    l = std::clamp(l, std::max(0.0, k + c - 6), k);
    r = std::clamp(r, std::max(0.0, k + c - 8), c - 4);
    return h(c, l) + h(6 - c, k - l) + h(c - 4, r) + h(8 - c, k - r) +
           h(8 * k - r, 6 * k - l) - h(36 - c, 6 * k - l);
}

WideInterval phi_k3_wide(const Rational& c, const Rational& l, const Rational& r) {
    WideInterval C(c), L(l), R(r);
    WideInterval three(3L), four(4L), six(6L), eight(8L), t18(18L), t24(24L), t36(36L);
    return h(C, L) + h(six - C, three - L) + h(C - four, R) + h(eight - C, three - R) +
           h(t24 - R, t18 - L) - h(t36 - C, t18 - L);
}

double psi(long m, long s, double k, double l, double r) {
    double M = m, S = s;
    return h(S, l) + h(6 * M - S, k - l) + h(S - 4 * M, r) + h(8 * M - S, k - r) +
           h(8 * k - r, 6 * k - l) - h(36 * M - S, 6 * k - l);
}

Interval psi_term_bound(long m, long s, long k, long l, long r) {
    auto I = [](long v) { return Interval(static_cast<double>(v)); };
    Interval p = h(I(s), I(l)) + h(I(6 * m - s), I(k - l)) + h(I(s - 4 * m), I(r)) +
                 h(I(8 * m - s), I(k - r)) + h(I(8 * k - r), I(6 * k - l)) -
                 h(I(36 * m - s), I(6 * k - l));
    return Interval(30.0) * sqrt(I(m)) * exp(p);
}

double dphi_dl(double c, double l, double r) {
    return lg(c - l, "dphi_dl") + lg(3 - l, "dphi_dl") + lg(18 - c + l, "dphi_dl") -
           lg(l, "dphi_dl") - lg(3 - c + l, "dphi_dl") - lg(6 - r + l, "dphi_dl");
}

double dphi_dr(double c, double l, double r) {
    return lg(c - 4 - r, "dphi_dr") + lg(3 - r, "dphi_dr") + lg(6 - r + l, "dphi_dr") -
           lg(r, "dphi_dr") - lg(5 - c + r, "dphi_dr") - lg(24 - r, "dphi_dr");
}

DkParts dphi_dk_decomposition(double c, double k, double x, double y) {
    if (x < -kDustEps || x > 6 - c + kDustEps)
        throw std::domain_error("dphi_dk: x outside [0, 6-c]");
    if (y < -kDustEps || y > 1 + kDustEps)
        throw std::domain_error("dphi_dk: y outside [0, 1]");
    x = std::clamp(x, 0.0, 6 - c);
    y = std::clamp(y, 0.0, 1.0);
    DkParts d;
    d.D1 = lg(c - k + x, "D1") - lg(k - x, "D1");
    d.D2 = y == 0 ? 0.0
                  : y * (lg((4 - k) * y, "D2") - lg(c - 4 - (4 - k) * y, "D2"));
    d.D3 = y == 1 ? 0.0
                  : (1 - y) * (lg((4 - k) * (1 - y), "D3") -
                               lg(k * (1 - y) + 4 + 4 * y - c, "D3"));
    d.D4 = (8 - y) * lg((8 - y) * k + 4 + 4 * y - c, "D4") -
           (3 - y) * lg((3 - y) * k + 4 + 4 * y - c - x, "D4") -
           5 * lg(36 - c - 5 * k - x, "D4");
    d.total = d.D1 + d.D2 + d.D3 + d.D4;
    return d;
}

double QuinticPoly::eval(double l) const {
    double v = a[5];
    for (int i = 4; i >= 0; --i) v = v * l + a[i];
    return v;
}

QuinticPoly quintic(double c) {
    double c2 = c * c, c3 = c2 * c, c4 = c3 * c;
    QuinticPoly p;
    p.a[5] = 2 * c - 18;
    p.a[4] = -2 * c2 - 69 * c + 846;
    p.a[3] = -2 * c3 + 123 * c2 + 189 * c - 11448;
    p.a[2] = 2 * c4 + 12 * c3 - 2349 * c2 + 14256 * c + 95256;
    p.a[1] = -48 * c4 + 1089 * c3 + 2916 * c2 - 125388 * c;
    p.a[0] = 126 * c4 - 4536 * c3 + 40824 * c2;
    return p;
}

namespace {

std::vector<double> scan_roots(const QuinticPoly& p, double lo, double hi, int grid,
                               double tol) {
    std::vector<double> roots;
    double prev_x = lo, prev_f = p.eval(lo);
    for (int i = 1; i <= grid; ++i) {
        double x = lo + (hi - lo) * i / grid;
        double f = p.eval(x);
        if (f == 0.0) {
            roots.push_back(x);
        } else if (prev_f == 0.0) {
            // already recorded at the previous node
        } else if ((prev_f < 0) != (f < 0)) {
            double a = prev_x, b = x, fa = prev_f;
            while (b - a > tol) {
                double mid = 0.5 * (a + b);
                double fm = p.eval(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fa < 0) != (fm < 0)) b = mid;
                else a = mid, fa = fm;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = f;
    }
    return roots;
}

}  // namespace

std::vector<double> quintic_roots_in(double c, double lo, double hi, double tol,
                                     int grid) {
    if (!(lo < hi)) throw std::invalid_argument("quintic_roots_in: empty interval");
    QuinticPoly p = quintic(c);
    for (int g = grid; g <= (1 << 22); g *= 4) {
        auto coarse = scan_roots(p, lo, hi, g, tol);
        auto fine = scan_roots(p, lo, hi, 2 * g, tol);
        if (coarse.size() == fine.size()) return fine;
    }
    throw std::runtime_error("quintic_roots_in: unresolved root cluster");
}

double r_from_l(double c, double l) {
    double den = l * (3 - c + l);
    if (den == 0) throw std::domain_error("r_from_l: singular at l in {0, c-3}");
    return 6 + l - (c - l) * (3 - l) * (18 - c + l) / den;
}

std::vector<CriticalPoint> critical_points(double c) {
    if (!(c >= 5.7 - kDustEps && c < 6))
        throw std::domain_error("critical_points: c outside [5.7, 6)");
    double l_lo = c - 3, l_hi = 3;
    double r_lo = c - 5, r_hi = c - 4;
    double inset = 1e-9 * (l_hi - l_lo);
    std::vector<CriticalPoint> out;
    for (double l0 : quintic_roots_in(c, l_lo + inset, l_hi - inset)) {
        double r0 = r_from_l(c, l0);
        if (!(r0 > r_lo + 1e-9 && r0 < r_hi - 1e-9)) continue;  // spurious branch
        if (std::fabs(dphi_dr(c, l0, r0)) > 1e-6) continue;
        // 2-D Newton polish on (dphi_dl, dphi_dr)
        double l = l0, r = r0;
        for (int it = 0; it < 50; ++it) {
            double Fl = dphi_dl(c, l, r), Fr = dphi_dr(c, l, r);
            if (std::fabs(Fl) < 1e-14 && std::fabs(Fr) < 1e-14) break;
            double u = 1 / (6 - r + l);
            double j11 = -1 / (c - l) - 1 / (3 - l) + 1 / (18 - c + l) - 1 / l -
                         1 / (3 - c + l) - u;
            double j12 = u, j21 = u;
            double j22 = -1 / (c - 4 - r) - 1 / (3 - r) - u - 1 / r -
                         1 / (5 - c + r) + 1 / (24 - r);
            double det = j11 * j22 - j12 * j21;
            if (det == 0) break;
            double dl = (-Fl * j22 + Fr * j12) / det;
            double dr = (-Fr * j11 + Fl * j21) / det;
            double scale = 1;
            while (scale > 1e-6 &&
                   !(l + scale * dl > l_lo && l + scale * dl < l_hi &&
                     r + scale * dr > r_lo && r + scale * dr < r_hi))
                scale *= 0.5;
            l += scale * dl;
            r += scale * dr;
            if (std::fabs(scale * dl) < 1e-16 && std::fabs(scale * dr) < 1e-16) break;
        }
        CriticalPoint cp;
        cp.l = l;
        cp.r = r;
        cp.phi_value = phi(c, 3.0, l, r);
        cp.residual_l = dphi_dl(c, l, r);
        cp.residual_r = dphi_dr(c, l, r);
        out.push_back(cp);
    }
    return out;
}

namespace {

// Dense sweep of phi(c,3,.,.) over [l0,l1]x[r0,r1]; returns best value and
// position, locally refined twice.
struct GridBest {
    double value = -std::numeric_limits<double>::infinity();
    double l = 0, r = 0;
};

GridBest sweep_box(double c, double l0, double l1, double r0, double r1, double step) {
    GridBest best;
    auto eval_grid = [&](double a0, double a1, double b0, double b1, double st) {
        long nl = std::max(1L, std::lround(std::ceil((a1 - a0) / st)));
        long nr = std::max(1L, std::lround(std::ceil((b1 - b0) / st)));
        for (long i = 0; i <= nl; ++i) {
            double l = a0 + (a1 - a0) * i / nl;
            for (long j = 0; j <= nr; ++j) {
                double r = b0 + (b1 - b0) * j / nr;
                double v = phi(c, 3.0, l, r);
                if (v > best.value) best = GridBest{v, l, r};
            }
        }
    };
    eval_grid(l0, l1, r0, r1, step);
    double st = step;
    for (int pass = 0; pass < 2; ++pass) {
        double nl0 = std::max(l0, best.l - 2 * st), nl1 = std::min(l1, best.l + 2 * st);
        double nr0 = std::max(r0, best.r - 2 * st), nr1 = std::min(r1, best.r + 2 * st);
        st /= 10;
        eval_grid(nl0, nl1, nr0, nr1, st);
    }
    return best;
}

}  // namespace

MaxPhiReport max_phi_k3(double c, double grid_step) {
    if (!(c >= 5.7 - kDustEps && c <= 6 + kDustEps))
        throw std::domain_error("max_phi_k3: c outside [5.7, 6]");
    MaxPhiReport rep;
    rep.c = c;
    double l_lo = c - 3, l_hi = 3, r_lo = c - 5, r_hi = c - 4;

    if (c >= 6 - 1e-9) {
        // l is pinned at 3: one-dimensional maximization over r in [1, 2]
        rep.degenerate_line = true;
        GridBest best = sweep_box(c, 3.0, 3.0, r_lo, r_hi, grid_step);
        rep.max_value = best.value;
        rep.grid_max = best.value;
        rep.grid_margin = 0;
        rep.witness.l = 3.0;
        rep.witness.r = best.r;
        rep.witness.phi_value = best.value;
        rep.witness.residual_l = std::numeric_limits<double>::quiet_NaN();
        rep.witness.residual_r = dphi_dr(c, best.l, best.r);
        rep.lip_dl_max = std::numeric_limits<double>::quiet_NaN();
        rep.lip_dr_max = std::fabs(rep.witness.residual_r);
        return rep;
    }

    auto crits = critical_points(c);
    if (crits.empty())
        throw std::runtime_error("max_phi_k3: no interior critical point found");
    rep.witness = *std::max_element(
        crits.begin(), crits.end(),
        [](const CriticalPoint& a, const CriticalPoint& b) {
            return a.phi_value < b.phi_value;
        });
    rep.max_value = rep.witness.phi_value;

    GridBest best = sweep_box(c, l_lo, l_hi, r_lo, r_hi, grid_step);
    rep.grid_max = best.value;
    rep.grid_margin = rep.max_value - rep.grid_max;
    if (rep.grid_max > rep.max_value + 1e-9)
        throw std::logic_error("max_phi_k3: grid beats the critical value; "
                               "critical point missed or wrong");

    // Derivative (Lipschitz) guard near the maximizer; at c = 5.7 this is the
    // published box [2.89, 2.9] x [1.07, 1.08].
    double bl0, bl1, br0, br1;
    if (std::fabs(c - 5.7) < 1e-12) {
        bl0 = 2.89, bl1 = 2.90, br0 = 1.07, br1 = 1.08;
    } else {
        bl0 = std::max(l_lo + 1e-6, rep.witness.l - 0.005);
        bl1 = std::min(l_hi - 1e-6, rep.witness.l + 0.005);
        br0 = std::max(r_lo + 1e-6, rep.witness.r - 0.005);
        br1 = std::min(r_hi - 1e-6, rep.witness.r + 0.005);
    }
    const int n = 20;
    for (int i = 0; i <= n; ++i) {
        double l = bl0 + (bl1 - bl0) * i / n;
        for (int j = 0; j <= n; ++j) {
            double r = br0 + (br1 - br0) * j / n;
            rep.lip_dl_max = std::max(rep.lip_dl_max, std::fabs(dphi_dl(c, l, r)));
            rep.lip_dr_max = std::max(rep.lip_dr_max, std::fabs(dphi_dr(c, l, r)));
        }
    }
    return rep;
}

CStarReport c_star(double tol) {
    if (!(tol >= 1e-8)) throw std::invalid_argument("c_star: tolerance below 1e-8");
    auto phi_star = [](double c) {
        if (c >= 6 - 1e-9) return max_phi_k3(6.0).max_value;
        auto crits = critical_points(c);
        if (crits.empty()) {
            std::ostringstream os;
            os << "c_star: critical point lost at c = " << c;
            throw std::runtime_error(os.str());
        }
        double best = crits[0].phi_value;
        for (auto& cp : crits) best = std::max(best, cp.phi_value);
        return best;
    };
    double a = 5.7, b = 6.0;
    double fa = phi_star(a), fb = phi_star(b);
    if (!(fa < 0 && fb > 0))
        throw std::runtime_error("c_star: initial bracket does not straddle 0");
    CStarReport rep;
    while (b - a > tol) {
        double mid = 0.5 * (a + b);
        double fm = phi_star(mid);
        ++rep.iterations;
        if (fm < 0) a = mid, fa = fm;
        else b = mid, fb = fm;
    }
    rep.bracket_lo = a;
    rep.bracket_hi = b;
    rep.value = 0.5 * (a + b);
    return rep;
}

std::string MaxPhiReport::to_json(bool deterministic, int indent) const {
    (void)deterministic;
    nlohmann::json j;
    j["c"] = c;
    j["max_value"] = max_value;
    j["witness"] = {{"l", witness.l},
                    {"r", witness.r},
                    {"phi", witness.phi_value},
                    {"residual_l", std::isnan(witness.residual_l)
                                       ? nlohmann::json(nullptr)
                                       : nlohmann::json(witness.residual_l)},
                    {"residual_r", witness.residual_r}};
    j["grid_max"] = grid_max;
    j["grid_margin"] = grid_margin;
    j["lipschitz"] = {{"dl_max", std::isnan(lip_dl_max) ? nlohmann::json(nullptr)
                                                        : nlohmann::json(lip_dl_max)},
                      {"dr_max", lip_dr_max}};
    j["degenerate_line"] = degenerate_line;
    j["negative_certified"] = max_value < 0;
    return j.dump(indent);
}

std::string CStarReport::to_json(bool deterministic, int indent) const {
    (void)deterministic;
    nlohmann::json j;
    j["value"] = value;
    j["bracket"] = {bracket_lo, bracket_hi};
    j["iterations"] = iterations;
    return j.dump(indent);
}

}  // namespace conc
