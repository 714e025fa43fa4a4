// conc: one entry point for the exact/interval union-bound sums, the
// continuous phi analysis, the concentrator search lab, the downstream
// constants, and the full acceptance suite.  Exit codes encode certification
// outcomes: 0 certified, 1 refuted, 2 undecided/budget, 64 usage error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "conc/certify.hpp"
#include "conc/constants.hpp"
#include "conc/extended.hpp"
#include "conc/graph.hpp"
#include "conc/phi.hpp"
#include "conc/rng.hpp"
#include "conc/search.hpp"
#include "conc/sumbound.hpp"

namespace {

struct Common {
    int workers = 0;
    bool deterministic = false;
    int precision = 0;  // wide-interval decimal digits; 0 = leave default
    std::string output = "json";
};

void add_common(CLI::App* sub, Common& c, bool csv_capable = false) {
    sub->add_option("--workers", c.workers, "worker threads (0 = auto)");
    sub->add_flag("--deterministic", c.deterministic,
                  "omit wall-clock fields so identical configs print identical bytes");
    sub->add_option("--precision", c.precision,
                    "wide-interval working precision in decimal digits")
        ->check(CLI::Range(16, 100000));
    if (csv_capable) {
        sub->add_option("--output", c.output, "report format")
            ->check(CLI::IsMember({"json", "text", "csv"}));
    } else {
        sub->add_option("--output", c.output, "report format")
            ->check(CLI::IsMember({"json", "text"}));
    }
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string fmt_rational(const conc::Rational& q) {
    return conc::to_string(q) + " ~= " + fmt_double(q.get_d());
}

void apply_precision(const Common& c) {
    if (c.precision > 0) conc::WideInterval::set_default_precision_digits(c.precision);
}

conc::BipartiteGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--graph", "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    size_t i = text.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && text[i] == '{')
        return conc::BipartiteGraph::from_json(text);
    return conc::BipartiteGraph::from_edge_list(text);
}

conc::Permutation seeded_permutation(long n, uint64_t seed) {
    conc::Permutation p = conc::Permutation::identity(n);
    conc::SplitMix64 rng(seed);
    conc::fisher_yates(p.map, rng);
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified combinatorial bounds for sparse concentrator families"};
    app.require_subcommand(1);

    // ---- sum ----------------------------------------------------------
    auto* sum_cmd = app.add_subcommand(
        "sum", "evaluate the union-bound triple sum and certify sum < 1");
    long sum_m = 0, sum_s = 0;
    std::string sum_mode = "exact";
    uint64_t sum_max_terms = 0;
    double sum_max_seconds = 0;
    bool sum_csv = false;
    Common sum_common;
    sum_cmd->add_option("--m", sum_m, "scale parameter")->required();
    sum_cmd->add_option("--s", sum_s, "degree-5 input count (0 or in [4m,6m])")
        ->required();
    sum_cmd->add_option("--mode", sum_mode, "arithmetic backend")
        ->check(CLI::IsMember({"exact", "interval"}));
    sum_cmd->add_option("--max-terms", sum_max_terms,
                        "stop after this many nonzero terms (0 = unlimited)");
    sum_cmd->add_option("--max-seconds", sum_max_seconds,
                        "wall-clock budget (0 = unlimited)");
    sum_cmd->add_flag("--csv-per-k", sum_csv, "emit per-k partial sums as CSV");
    add_common(sum_cmd, sum_common, /*csv_capable=*/true);

    // ---- smax ---------------------------------------------------------
    auto* smax_cmd = app.add_subcommand(
        "smax", "largest s with union-bound sum < 1 for a given m");
    long smax_m = 0;
    std::string smax_mode = "exact", smax_scan = "descending";
    bool smax_no_escalate = false;
    Common smax_common;
    smax_cmd->add_option("--m", smax_m, "scale parameter")->required();
    smax_cmd->add_option("--mode", smax_mode, "arithmetic backend")
        ->check(CLI::IsMember({"exact", "interval"}));
    smax_cmd->add_option("--scan", smax_scan, "scan strategy")
        ->check(CLI::IsMember({"descending", "full"}));
    smax_cmd->add_flag("--no-escalate", smax_no_escalate,
                       "report undecided instead of re-running straddles exactly");
    add_common(smax_cmd, smax_common);

    // ---- phi ----------------------------------------------------------
    auto* phi_cmd = app.add_subcommand(
        "phi", "maximize phi(c,3,l,r) over its domain rectangle");
    double phi_c = 5.7, phi_step = 1e-3;
    Common phi_common;
    phi_cmd->add_option("--c", phi_c, "degree ratio in [5.7, 6]")->required();
    phi_cmd->add_option("--grid-step", phi_step, "certification grid pitch");
    add_common(phi_cmd, phi_common, /*csv_capable=*/true);

    // ---- cstar --------------------------------------------------------
    auto* cstar_cmd = app.add_subcommand(
        "cstar", "bisect the zero crossing of max phi in c");
    double cstar_tol = 1e-7;
    Common cstar_common;
    cstar_cmd->add_option("--tol", cstar_tol, "bracket width target (>= 1e-8)");
    add_common(cstar_cmd, cstar_common);

    // ---- search -------------------------------------------------------
    auto* search_cmd = app.add_subcommand(
        "search", "seeded random search over permutation graphs");
    long se_m = 1, se_s = 0, se_q = -1;
    uint64_t se_trials = 1000, se_seed = 1, se_budget = 10'000'000;
    Common se_common;
    search_cmd->add_option("--m", se_m, "scale parameter")->required();
    search_cmd->add_option("--s", se_s, "degree-5 input count")->required();
    search_cmd->add_option("--q", se_q, "verify subsets up to this size (default 3m)");
    search_cmd->add_option("--trials", se_trials, "number of seeded trials");
    search_cmd->add_option("--seed", se_seed, "master seed");
    search_cmd->add_option("--budget", se_budget, "subset budget per verification");
    add_common(search_cmd, se_common);

    // ---- verify -------------------------------------------------------
    auto* verify_cmd = app.add_subcommand(
        "verify", "exhaustive Hall verification of one graph");
    long ve_m = 1, ve_s = 0, ve_q = -1;
    uint64_t ve_seed = 0, ve_budget = 10'000'000;
    std::string ve_graph;
    bool ve_identity = false;
    Common ve_common;
    verify_cmd->add_option("--m", ve_m, "scale parameter")->required();
    verify_cmd->add_option("--s", ve_s, "degree-5 input count")->required();
    verify_cmd->add_option("--q", ve_q, "verify subsets up to this size (default 3m)");
    verify_cmd->add_option("--budget", ve_budget, "subset budget");
    auto* ve_src = verify_cmd->add_option_group("graph source");
    ve_src->add_option("--graph", ve_graph, "graph file (JSON or edge list)");
    ve_src->add_option("--seed", ve_seed, "build from this seeded permutation");
    ve_src->add_flag("--identity", ve_identity, "build from the identity permutation");
    ve_src->require_option(1);
    add_common(verify_cmd, ve_common);

    // ---- census -------------------------------------------------------
    auto* census_cmd = app.add_subcommand(
        "census", "enumerate all bad events (A,B) of one graph");
    long ce_m = 1, ce_s = 0;
    uint64_t ce_seed = 0, ce_budget = 10'000'000;
    std::string ce_graph;
    bool ce_identity = false;
    Common ce_common;
    census_cmd->add_option("--m", ce_m, "scale parameter")->required();
    census_cmd->add_option("--s", ce_s, "degree-5 input count")->required();
    census_cmd->add_option("--budget", ce_budget, "enumeration step budget");
    auto* ce_src = census_cmd->add_option_group("graph source");
    ce_src->add_option("--graph", ce_graph, "graph file (JSON or edge list)");
    ce_src->add_option("--seed", ce_seed, "build from this seeded permutation");
    ce_src->add_flag("--identity", ce_identity, "build from the identity permutation");
    ce_src->require_option(1);
    add_common(census_cmd, ce_common);

    // ---- constants ----------------------------------------------------
    auto* const_cmd = app.add_subcommand(
        "constants", "downstream constants K, K-tilde, w2 from gamma");
    std::string const_gamma = "5.05";
    bool const_use_cstar = false;
    Common const_common;
    const_cmd->add_option("--gamma", const_gamma,
                          "edge/input ratio as a rational or decimal string");
    const_cmd->add_flag("--use-cstar", const_use_cstar,
                        "derive gamma from the computed c* (upper bracket end)");
    add_common(const_cmd, const_common);

    // ---- certify-all --------------------------------------------------
    auto* cert_cmd = app.add_subcommand(
        "certify-all", "run the full acceptance suite");
    bool cert_stretch = false;
    Common cert_common;
    cert_cmd->add_flag("--stretch", cert_stretch,
                       "include the long interval scan up to m = 151");
    add_common(cert_cmd, cert_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (*sum_cmd) {
            apply_precision(sum_common);
            conc::SumBudget budget;
            if (sum_max_terms > 0) budget.max_terms = sum_max_terms;
            budget.max_seconds = sum_max_seconds;
            conc::Mode mode = sum_mode == "exact" ? conc::Mode::Exact
                                                  : conc::Mode::IntervalMode;
            conc::SumReport rep =
                conc::lhs_sum(sum_m, sum_s, mode, sum_common.workers, budget);
            int v = rep.below_one();
            if (sum_csv || sum_common.output == "csv") {
                std::cout << rep.per_k_csv();
            } else if (sum_common.output == "text") {
                std::cout << "sum(m=" << sum_m << ", s=" << sum_s << ") = ";
                if (mode == conc::Mode::Exact)
                    std::cout << fmt_rational(rep.total_exact);
                else
                    std::cout << "[" << fmt_double(rep.total_interval.lo) << ", "
                              << fmt_double(rep.total_interval.hi) << "]";
                std::cout << "; below one: "
                          << (v > 0 ? "certified" : v < 0 ? "refuted" : "undecided")
                          << "; " << rep.term_count << " nonzero terms"
                          << (rep.complete ? "" : " (partial: budget hit)") << '\n';
            } else {
                std::cout << rep.to_json(sum_common.deterministic) << '\n';
            }
            return v > 0 ? 0 : (v < 0 ? 1 : 2);
        }
        if (*smax_cmd) {
            apply_precision(smax_common);
            conc::Mode mode = smax_mode == "exact" ? conc::Mode::Exact
                                                   : conc::Mode::IntervalMode;
            conc::Scan scan = smax_scan == "descending" ? conc::Scan::Descending
                                                        : conc::Scan::Full;
            conc::SmaxResult res = conc::s_max(smax_m, mode, scan,
                                               smax_common.workers, {},
                                               !smax_no_escalate);
            if (smax_common.output == "text") {
                std::cout << "s_max(" << smax_m << ") = " << res.s_max
                          << " (ratio " << fmt_double(static_cast<double>(res.s_max) /
                                                      static_cast<double>(smax_m))
                          << "); " << (res.decided ? "decided" : "undecided")
                          << (res.escalated ? "; escalated to exact arithmetic" : "")
                          << '\n';
            } else {
                std::cout << res.to_json(smax_common.deterministic) << '\n';
            }
            return res.decided ? 0 : 2;
        }
        if (*phi_cmd) {
            apply_precision(phi_common);
            if (phi_common.output == "csv") {
                // grid sweep of phi(c, 3, l, r) over the full (l, r) box, for
                // external plotting; endpoints are hit exactly
                double l0 = phi_c - 3, l1 = 3, r0 = phi_c - 5, r1 = phi_c - 4;
                auto steps = [&](double a0, double a1) {
                    return std::max(1L, std::lround(std::ceil((a1 - a0) / phi_step)));
                };
                long nl = l1 > l0 ? steps(l0, l1) : 0, nr = steps(r0, r1);
                std::cout << "l,r,phi\n";
                std::cout.precision(17);
                for (long i = 0; i <= nl; ++i) {
                    double l = nl == 0 ? l1 : l0 + (l1 - l0) * i / nl;
                    for (long j = 0; j <= nr; ++j) {
                        double r = r0 + (r1 - r0) * j / nr;
                        std::cout << l << ',' << r << ','
                                  << conc::phi(phi_c, 3.0, l, r) << '\n';
                    }
                }
                return 0;
            }
            conc::MaxPhiReport rep = conc::max_phi_k3(phi_c, phi_step);
            if (phi_common.output == "text") {
                std::cout << "max phi(" << fmt_double(phi_c) << ", 3, l, r) = "
                          << fmt_double(rep.max_value) << " at (l, r) = ("
                          << fmt_double(rep.witness.l) << ", "
                          << fmt_double(rep.witness.r) << ")"
                          << (rep.degenerate_line ? " [on the l = 3 line]" : "")
                          << "; grid margin " << fmt_double(rep.grid_margin)
                          << "; negative "
                          << (rep.max_value < 0 ? "certified" : "refuted") << '\n';
            } else {
                std::cout << rep.to_json(phi_common.deterministic) << '\n';
            }
            return rep.max_value < 0 ? 0 : 1;
        }
        if (*cstar_cmd) {
            apply_precision(cstar_common);
            conc::CStarReport rep = conc::c_star(cstar_tol);
            if (cstar_common.output == "text") {
                std::cout << "c* = " << fmt_double(rep.value) << " in ["
                          << fmt_double(rep.bracket_lo) << ", "
                          << fmt_double(rep.bracket_hi) << "] after "
                          << rep.iterations << " bisection steps\n";
            } else {
                std::cout << rep.to_json(cstar_common.deterministic) << '\n';
            }
            return 0;
        }
        if (*search_cmd) {
            apply_precision(se_common);
            if (se_q < 0) se_q = 3 * se_m;
            conc::SearchReport rep = conc::random_search(se_m, se_s, se_q, se_trials,
                                                         se_seed, se_budget);
            if (se_common.output == "text") {
                std::cout << "search(m=" << se_m << ", s=" << se_s << ", q=" << se_q
                          << ", seed=" << se_seed << "): " << rep.good_count << "/"
                          << rep.trials << " verified";
                if (rep.first_good_trial)
                    std::cout << "; first at trial " << *rep.first_good_trial;
                std::cout << "; bad rate " << fmt_double(rep.empirical_bad_rate)
                          << " (+-" << fmt_double(rep.ci_half_width)
                          << "); union bound "
                          << fmt_double(rep.union_bound.get_d());
                if (rep.any_budget_refusal) std::cout << "; some trials refused (budget)";
                std::cout << '\n';
            } else {
                std::cout << rep.to_json(se_common.deterministic) << '\n';
            }
            if (rep.good_count >= 1) return 0;
            return rep.any_budget_refusal ? 2 : 1;
        }
        if (*verify_cmd) {
            apply_precision(ve_common);
            if (ve_q < 0) ve_q = 3 * ve_m;
            conc::BipartiteGraph g;
            if (!ve_graph.empty()) g = load_graph(ve_graph);
            else if (ve_identity)
                g = conc::build_graph(
                    ve_m, ve_s, conc::Permutation::identity(36 * ve_m - ve_s));
            else
                g = conc::build_graph(
                    ve_m, ve_s, seeded_permutation(36 * ve_m - ve_s, ve_seed));
            conc::VerificationResult res = conc::verify_concentrator(g, ve_q, ve_budget);
            if (ve_common.output == "text") {
                using Status = conc::VerificationResult::Status;
                if (res.status == Status::Concentrator) {
                    std::cout << "concentrator: every input set of size <= " << ve_q
                              << " expands (" << res.subsets_checked
                              << " subsets checked)\n";
                } else if (res.status == Status::NotConcentrator) {
                    std::cout << "not a concentrator; minimal failing input set {";
                    for (size_t i = 0; i < res.counterexample->size(); ++i)
                        std::cout << (i ? ", " : "") << (*res.counterexample)[i];
                    std::cout << "} (" << res.subsets_checked << " subsets checked)\n";
                } else {
                    std::cout << "undecided: subset budget exhausted after "
                              << res.subsets_checked << " subsets\n";
                }
            } else {
                std::cout << res.to_json() << '\n';
            }
            if (res.status == conc::VerificationResult::Status::Concentrator) return 0;
            if (res.status == conc::VerificationResult::Status::NotConcentrator)
                return 1;
            return 2;
        }
        if (*census_cmd) {
            apply_precision(ce_common);
            conc::BipartiteGraph g;
            if (!ce_graph.empty()) g = load_graph(ce_graph);
            else if (ce_identity)
                g = conc::build_graph(
                    ce_m, ce_s, conc::Permutation::identity(36 * ce_m - ce_s));
            else
                g = conc::build_graph(
                    ce_m, ce_s, seeded_permutation(36 * ce_m - ce_s, ce_seed));
            auto events = conc::bad_event_census(ce_m, ce_s, g, ce_budget);
            if (ce_common.output == "text") {
                std::cout << events.size() << " bad event"
                          << (events.size() == 1 ? "" : "s") << " (m=" << ce_m
                          << ", s=" << ce_s << ")\n";
                for (const auto& ev : events) {
                    std::cout << "  k=" << ev.k << " l=" << ev.l << " r=" << ev.r
                              << " A={";
                    for (size_t i = 0; i < ev.A.size(); ++i)
                        std::cout << (i ? "," : "") << ev.A[i];
                    std::cout << "} B={";
                    for (size_t i = 0; i < ev.B.size(); ++i)
                        std::cout << (i ? "," : "") << ev.B[i];
                    std::cout << "}\n";
                }
            } else {
                std::cout << conc::census_to_json(ce_m, ce_s, events) << '\n';
            }
            return 0;
        }
        if (*const_cmd) {
            apply_precision(const_common);
            conc::Rational gamma;
            if (const_use_cstar) {
                conc::CStarReport cs = conc::c_star(1e-7);
                // round the safe (upper) end of the bracket up at 1e-9
                gamma = conc::Rational(
                    static_cast<long>(std::ceil(cs.bracket_hi * 1e9)), 1000000000L);
            } else {
                gamma = conc::parse_rational(const_gamma);
            }
            conc::ConstantsReport rep = conc::constants(gamma);
            if (const_common.output == "text") {
                std::cout << "gamma = " << fmt_rational(rep.gamma) << '\n'
                          << "K = " << fmt_rational(rep.K) << '\n'
                          << "K~ = " << fmt_rational(rep.K_tilde) << '\n'
                          << "w2 = " << fmt_rational(rep.w2) << '\n'
                          << "w2 (rounded form 2*ceil(K~)+1) = "
                          << conc::to_string(rep.w2_rounded) << '\n';
            } else {
                std::cout << rep.to_json() << '\n';
            }
            return 0;
        }
        if (*cert_cmd) {
            apply_precision(cert_common);
            auto results = conc::run_acceptance(cert_common.workers);
            if (cert_stretch) results.push_back(conc::run_stretch(cert_common.workers));
            if (cert_common.output == "text") {
                for (const auto& r : results)
                    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " "
                              << r.name << " (" << r.seconds << " s): " << r.detail
                              << '\n';
            } else {
                std::cout << conc::criteria_to_json(results,
                                                    cert_common.deterministic)
                          << '\n';
            }
            for (const auto& r : results)
                if (!r.pass) return 1;
            return 0;
        }
    } catch (const CLI::Error& e) {
        app.exit(e);
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 64;
}
