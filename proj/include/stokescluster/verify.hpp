#pragma once

// Property-based verification suites.  Each suite checks one structural
// claim at desk scale and reports a pass/fail with its worst observed figure.
// The CLI's `verify` command and the acceptance harness both run these.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "stokescluster/configuration.hpp"
#include "stokescluster/errors.hpp"
#include "stokescluster/foliation.hpp"
#include "stokescluster/map.hpp"
#include "stokescluster/polynomial.hpp"
#include "stokescluster/quiver.hpp"
#include "stokescluster/stokes.hpp"
#include "stokescluster/triangulation.hpp"

namespace stokescluster {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double figure = 0.0;     // worst observed value of the suite's key metric
    std::string comparison;  // e.g. "max error 3.1e-09 < 1e-08"
    int samples = 0;
    double seconds = 0.0;
    std::string detail;      // optional multi-line breakdown

    std::string summary() const {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s %s: %s (%d samples, %.1f s)",
                      pass ? "PASS" : "FAIL", name.c_str(), comparison.c_str(), samples,
                      seconds);
        return buf;
    }
};

namespace detail {

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

inline Polynomial random_polynomial(int n, std::mt19937& rng, double box = 1.0) {
    std::uniform_real_distribution<double> U(-box, box);
    for (;;) {
        std::vector<cplx> a(n);
        for (auto& c : a) c = cplx(U(rng), U(rng));
        try {
            return Polynomial::from_coefficients(n, std::move(a));
        } catch (const Error&) {
            // discriminant too small; resample
        }
    }
}

inline Polynomial random_saddle_free(int n, std::mt19937& rng, double box = 1.0) {
    for (;;) {
        Polynomial p = random_polynomial(n, rng, box);
        try {
            if (classify(p).saddle_free) return p;
        } catch (const Error&) {
            // ambiguous structure; resample
        }
    }
}

inline double tuple_distance(const AsymptoticTuple& a, const AsymptoticTuple& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.w.size(); ++k)
        d = std::max(d, chordal_dist(a.w[k], b.w[k]));
    return d;
}

inline AsymptoticTuple cyclic_shift(const AsymptoticTuple& t) {
    AsymptoticTuple s = t;
    const int m = static_cast<int>(t.w.size());
    for (int k = 0; k < m; ++k) s.w[k] = t.w[(k - 1 + m) % m];
    return s;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

} // namespace detail

// Suite 1: the Wronskian and direct-projective methods agree entrywise after
// joint normalization (spherical metric), within 1e-6 and under 60 seconds.
inline SuiteResult suite_two_method(int samples_per_n = 50, unsigned seed = 1) {
    detail::Stopwatch sw;
    SuiteResult r{"two-method"};
    std::mt19937 rng(seed);
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n)
        for (int s = 0; s < samples_per_n; ++s) {
            const Polynomial p = detail::random_polynomial(n, rng);
            const AsymptoticTuple a = normalize_tuple(asymptotic_values(p));
            const AsymptoticTuple b = normalize_tuple(asymptotic_values_direct(p));
            worst = std::max(worst, detail::tuple_distance(a, b));
            ++r.samples;
        }
    r.seconds = sw.seconds();
    r.figure = worst;
    r.pass = worst < 1e-6 && r.seconds < 60.0;
    r.comparison = "max disagreement " + detail::fmt(worst) + " < 1e-06, runtime < 60 s";
    return r;
}

// Suite 2: Sibuya genericity margins on the same sample set as suite 1:
// adjacent values distinct and at least three distinct values, margin > 1e-7.
inline SuiteResult suite_genericity(int samples_per_n = 50, unsigned seed = 1) {
    detail::Stopwatch sw;
    SuiteResult r{"genericity"};
    std::mt19937 rng(seed);
    double min_adjacent = 1.0, min_triple = 1.0;
    for (int n = 0; n <= 3; ++n)
        for (int s = 0; s < samples_per_n; ++s) {
            const Polynomial p = detail::random_polynomial(n, rng);
            for (const AsymptoticTuple& t :
                 {asymptotic_values(p), asymptotic_values_direct(p)}) {
                const int m = static_cast<int>(t.w.size());
                double best_triple = 0.0;
                for (int k = 0; k < m; ++k) {
                    const double d01 = chordal_dist(t.w[k], t.w[(k + 1) % m]);
                    const double d12 = chordal_dist(t.w[(k + 1) % m], t.w[(k + 2) % m]);
                    const double d02 = chordal_dist(t.w[k], t.w[(k + 2) % m]);
                    min_adjacent = std::min(min_adjacent, d01);
                    best_triple = std::max(best_triple, std::min({d01, d12, d02}));
                }
                min_triple = std::min(min_triple, best_triple);
            }
            ++r.samples;
        }
    r.seconds = sw.seconds();
    r.figure = std::min(min_adjacent, min_triple);
    r.pass = r.figure > 1e-7;
    r.comparison = "min genericity margin " + detail::fmt(r.figure) + " > 1e-07";
    return r;
}

// Suite 3: flip coherence. Reading cross ratios in the flipped triangulation
// equals mutating the chart, within 1e-8, on random (p, T, k); the pentagon
// five-cycle of mutations returns the initial chart.
inline SuiteResult suite_flip_coherence(int samples = 200, unsigned seed = 2) {
    detail::Stopwatch sw;
    SuiteResult r{"flip-coherence"};
    std::mt19937 rng(seed);
    double worst = 0.0;
    int attempts = 0;
    while (r.samples < samples && attempts < 20 * samples) {
        ++attempts;
        const int n = 1 + (r.samples % 3);
        const Polynomial p = detail::random_polynomial(n, rng);
        const auto Ts = all_triangulations(n + 3);
        std::uniform_int_distribution<std::size_t> pickT(0, Ts.size() - 1);
        const IdealTriangulation& T = Ts[pickT(rng)];
        std::uniform_int_distribution<int> pickA(0, T.num_arcs() - 1);
        const Arc k = T.arcs()[pickA(rng)];
        try {
            worst = std::max(worst, flip_coherence(F(p), T, k));
            ++r.samples;
        } catch (const NonGeneric&) {
            // configuration not generic for this triangulation; redraw
        } catch (const TransitionPole&) {
            // X_k = -1 exactly; redraw
        }
    }

    // pentagon five-cycle
    double cycle_err = 0.0;
    {
        const Polynomial p = Polynomial::from_coefficients(2, {cplx(0.0), cplx(1.0)});
        const Configuration c = F(p);
        const IdealTriangulation T0 = IdealTriangulation::from_arcs(5, {{0, 2}, {0, 3}});
        const ClusterChart start = chart_coords(c, T0);
        ClusterChart ch = start;
        for (const Arc& k : std::vector<Arc>{{0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}})
            ch = mutate_coords(ch, k);
        for (std::size_t j = 0; j < start.X.size(); ++j)
            cycle_err = std::max(cycle_err, std::abs(ch.X[j] - start.X[j]));
    }

    r.seconds = sw.seconds();
    r.figure = std::max(worst, cycle_err);
    r.pass = r.samples == samples && r.figure < 1e-8;
    r.comparison = "max discrepancy " + detail::fmt(r.figure) + " < 1e-08 (pentagon " +
                   detail::fmt(cycle_err) + ")";
    return r;
}

// Suite 4: epsilon windows for chart validity on the explicit families
// z^2 - 1 and z^3 - z plus random saddle-free samples: the halving search
// must terminate at eps >= 1e-3 with all |log|X_j|| < 40, under 120 seconds.
inline SuiteResult suite_chamber(int samples_per_n = 10, unsigned seed = 3) {
    detail::Stopwatch sw;
    SuiteResult r{"chamber"};
    std::mt19937 rng(seed);
    double worst_log = 0.0;
    bool all_ok = true;

    auto run_family = [&](const std::string& label, const Polynomial& p) {
        ++r.samples;
        try {
            const EpsilonSearch es = epsilon_for_chart(p);
            const bool ok = es.success && es.epsilon >= 1e-3 && es.max_abs_log < 40.0;
            worst_log = std::max(worst_log, es.max_abs_log);
            all_ok = all_ok && ok;
            r.detail += "  " + label + ": " +
                        (ok ? "eps = " + detail::fmt(es.epsilon) + ", max |log|X|| = " +
                                  detail::fmt(es.max_abs_log)
                            : std::string("no epsilon window found")) +
                        "\n";
        } catch (const Error& e) {
            all_ok = false;
            r.detail += "  " + label + ": " + e.what() + "\n";
        }
    };

    run_family("z^2-1", Polynomial::from_coefficients(1, {cplx(-1.0)}));
    run_family("z^3-z", Polynomial::from_coefficients(2, {cplx(0.0), cplx(-1.0)}));
    for (int n = 1; n <= 3; ++n)
        for (int s = 0; s < samples_per_n; ++s)
            run_family("random n=" + std::to_string(n) + " #" + std::to_string(s),
                       detail::random_saddle_free(n, rng, 0.5));

    r.seconds = sw.seconds();
    r.figure = worst_log;
    r.pass = all_ok && r.seconds < 120.0;
    r.comparison = "all epsilon searches succeed with max |log|X|| " +
                   detail::fmt(worst_log) + " < 40, runtime < 120 s";
    return r;
}

// Suite 5: rotating the framing shifts the normalized asymptotic tuple by +1.
inline SuiteResult suite_equivariance(int samples_per_n = 20, unsigned seed = 4) {
    detail::Stopwatch sw;
    SuiteResult r{"equivariance"};
    std::mt19937 rng(seed);
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n)
        for (int s = 0; s < samples_per_n; ++s) {
            const Polynomial p = detail::random_polynomial(n, rng);
            const AsymptoticTuple base = asymptotic_values(p);
            const AsymptoticTuple rot = asymptotic_values(rotate_framing(p));
            worst = std::max(worst, detail::tuple_distance(
                                        normalize_tuple(rot),
                                        normalize_tuple(detail::cyclic_shift(base))));
            ++r.samples;
        }
    r.seconds = sw.seconds();
    r.figure = worst;
    r.pass = worst < 1e-7;
    r.comparison = "max equivariance defect " + detail::fmt(worst) + " < 1e-07";
    return r;
}

// Suite 6: local biholomorphism proxy. Smallest singular value of the
// finite-difference Jacobian of the log chart stays above 1e-8 with the
// h vs h/2 drift below 10% at random saddle-free points.
inline SuiteResult suite_jacobian(int samples_per_n = 20, unsigned seed = 5) {
    detail::Stopwatch sw;
    SuiteResult r{"jacobian"};
    std::mt19937 rng(seed);
    double min_sigma = std::numeric_limits<double>::infinity();
    double max_drift = 0.0;
    bool all_ok = true;
    for (int n = 1; n <= 3; ++n)
        for (int s = 0; s < samples_per_n; ++s) {
            const Polynomial p = detail::random_saddle_free(n, rng);
            try {
                const JacobianResult jr = jacobian_F(p);
                min_sigma = std::min(min_sigma, jr.sigma_min);
                max_drift = std::max(max_drift, jr.drift);
            } catch (const Error& e) {
                all_ok = false;
                r.detail += std::string("  n=") + std::to_string(n) + ": " + e.what() + "\n";
            }
            ++r.samples;
        }
    r.seconds = sw.seconds();
    r.figure = min_sigma;
    r.pass = all_ok && min_sigma > 1e-8 && max_drift < 0.10;
    r.comparison = "min sigma " + detail::fmt(min_sigma) + " > 1e-08, max drift " +
                   detail::fmt(max_drift) + " < 0.1";
    return r;
}

// Suite 7: wall detection. Sweeping P = z^2 - exp(i theta), the saddle-free
// status flips only within 1e-3 of the analytic walls theta = +-pi/2.
inline SuiteResult suite_wall_sweep(int grid = 2000, unsigned /*seed*/ = 0) {
    detail::Stopwatch sw;
    SuiteResult r{"wall-sweep"};
    const double pi = std::numbers::pi;
    auto wall_dist = [&](double th) {
        return std::min(detail::angle_dist(th, pi / 2.0), detail::angle_dist(th, -pi / 2.0));
    };

    std::vector<char> sf(grid, 0);
    int violations = 0;
    for (int j = 0; j < grid; ++j) {
        const double th = 2.0 * pi * j / grid;
        const Polynomial p =
            Polynomial::from_coefficients(1, {-std::polar(1.0, th)});
        bool ok;
        try {
            ok = classify(p).saddle_free;
        } catch (const Error&) {
            ok = false; // ambiguous next to the wall counts as not saddle free
        }
        sf[j] = ok ? 1 : 0;
        if (!ok && wall_dist(th) >= 1e-3) {
            ++violations;
            r.detail += "  non-saddle-free away from wall at theta = " +
                        detail::fmt(th) + "\n";
        }
    }
    // status flips only within the wall windows
    for (int j = 0; j < grid; ++j) {
        const int j2 = (j + 1) % grid;
        if (sf[j] != sf[j2]) {
            const double th = 2.0 * pi * j / grid, th2 = 2.0 * pi * j2 / grid;
            if (wall_dist(th) >= 1e-3 && wall_dist(th2) >= 1e-3) {
                ++violations;
                r.detail += "  status flip away from wall between theta = " +
                            detail::fmt(th) + " and " + detail::fmt(th2) + "\n";
            }
        }
    }
    r.samples = grid;
    r.seconds = sw.seconds();
    r.figure = violations;
    r.pass = violations == 0;
    r.comparison = std::to_string(violations) + " flips outside |theta -+ pi/2| < 1e-3";
    return r;
}

// Suite 8: combinatorial exactness. Catalan counts for m = 4..8, flip graph
// regularity and connectivity, and the exact integer identity
// mutate_quiver(quiver_of(T), k) = quiver_of(flip(T, k)) for all m <= 7.
inline SuiteResult suite_combinatorics(int /*samples*/ = 0, unsigned /*seed*/ = 0) {
    detail::Stopwatch sw;
    SuiteResult r{"combinatorics"};
    bool ok = true;
    const std::map<int, std::size_t> catalan{{4, 2}, {5, 5}, {6, 14}, {7, 42}, {8, 132}};
    for (const auto& [m, expected] : catalan) {
        const auto Ts = all_triangulations(m);
        r.samples += static_cast<int>(Ts.size());
        if (Ts.size() != expected) {
            ok = false;
            r.detail += "  m=" + std::to_string(m) + ": " + std::to_string(Ts.size()) +
                        " triangulations, expected " + std::to_string(expected) + "\n";
        }
        const ExchangeGraph g = exchange_graph(m);
        if (g.regularity() != m - 3 || !g.is_connected()) {
            ok = false;
            r.detail += "  m=" + std::to_string(m) + ": flip graph not (m-3)-regular connected\n";
        }
    }
    for (int m = 4; m <= 7; ++m)
        for (const auto& T : all_triangulations(m)) {
            const Quiver Q = quiver_of(T);
            for (const auto& k : T.arcs()) {
                const IdealTriangulation T2 = flip(T, k);
                const Quiver Qf = quiver_of(T2);
                const Quiver Qm = mutate_quiver(Q, T.arc_index(k));
                // align slots: the flipped arc inherits the mutated vertex
                const auto quad = T.quadrilateral(k);
                Arc repl{std::min(quad[1], quad[3]), std::max(quad[1], quad[3])};
                std::vector<int> slot(T2.num_arcs());
                for (int j = 0; j < T2.num_arcs(); ++j) {
                    const Arc a = T2.arcs()[j];
                    slot[j] = (a == repl) ? T.arc_index(k) : T.arc_index(a);
                }
                for (int i = 0; i < T2.num_arcs() && ok; ++i)
                    for (int j = 0; j < T2.num_arcs(); ++j)
                        if (Qf.eps[i][j] != Qm.eps[slot[i]][slot[j]]) {
                            ok = false;
                            r.detail += "  m=" + std::to_string(m) +
                                        ": quiver mismatch after flipping {" +
                                        std::to_string(k[0]) + "," + std::to_string(k[1]) +
                                        "} in " + arcs_label(T.arcs()) + "\n";
                            break;
                        }
            }
        }
    r.seconds = sw.seconds();
    r.figure = ok ? 0.0 : 1.0;
    r.pass = ok;
    r.comparison = "Catalan counts, flip-graph shape, quiver identities all exact";
    return r;
}

// Suite 9: reconstruction round trips. chart_coords o reconstruct = identity
// on coordinates within 1e-10; reconstruct o chart_coords = identity on
// normalized configurations within 1e-9.
inline SuiteResult suite_roundtrip(int samples_per_n = 100, unsigned seed = 6) {
    detail::Stopwatch sw;
    SuiteResult r{"roundtrip"};
    std::mt19937 rng(seed);
    double worst_X = 0.0, worst_cfg = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const int m = n + 3;
        const auto Ts = all_triangulations(m);
        std::uniform_int_distribution<std::size_t> pickT(0, Ts.size() - 1);
        std::uniform_real_distribution<double> Umod(-1.0, 1.0), Uarg(-std::numbers::pi,
                                                                    std::numbers::pi);
        for (int s = 0; s < samples_per_n; ++s) {
            const IdealTriangulation& T = Ts[pickT(rng)];

            // coordinates -> configuration -> coordinates
            std::vector<cplx> X(T.num_arcs());
            for (auto& x : X) x = std::polar(std::exp(Umod(rng) * std::log(3.0)), Uarg(rng));
            try {
                const Configuration c = reconstruct(T, X);
                const ClusterChart back = chart_coords(c, T);
                for (std::size_t j = 0; j < X.size(); ++j)
                    worst_X = std::max(worst_X, std::abs(back.X[j] - X[j]));
            } catch (const NonGeneric&) {
                --s; // degenerate draw; redo
                continue;
            }

            // configuration -> coordinates -> configuration
            Configuration c;
            std::uniform_real_distribution<double> Upt(-2.0, 2.0);
            bool fresh = false;
            while (!fresh) {
                c.points.clear();
                for (int i = 0; i < m; ++i)
                    c.points.push_back(ProjPoint::finite(cplx(Upt(rng), Upt(rng))));
                fresh = true;
                for (int i = 0; i < m && fresh; ++i)
                    for (int j = i + 1; j < m; ++j)
                        if (chordal_dist(c.points[i], c.points[j]) < 0.05) {
                            fresh = false;
                            break;
                        }
            }
            const Configuration nc = normalize_points(c);
            const Configuration rec =
                normalize_points(reconstruct(T, chart_coords(nc, T).X));
            for (int i = 0; i < m; ++i)
                worst_cfg = std::max(worst_cfg, chordal_dist(nc.points[i], rec.points[i]));
            ++r.samples;
        }
    }
    r.seconds = sw.seconds();
    r.figure = std::max(worst_X, worst_cfg);
    r.pass = worst_X < 1e-10 && worst_cfg < 1e-9;
    r.comparison = "coordinate trip " + detail::fmt(worst_X) + " < 1e-10, configuration trip " +
                   detail::fmt(worst_cfg) + " < 1e-09";
    return r;
}

// Suite 10: trajectory integrity. Horizontality defect below 1e-6 of the
// w-length on every emitted trajectory, and the WKB triangulation validates
// on every saddle-free sample drawn by suites 4 and 7.
inline SuiteResult suite_horizontality(int grid = 2000, unsigned seed = 3) {
    detail::Stopwatch sw;
    SuiteResult r{"horizontality"};
    double worst_ratio = 0.0;
    int validated = 0;
    bool ok = true;

    auto check_structure = [&](const Polynomial& p, const TrajectoryStructure& ts) {
        auto check_traj = [&](const Trajectory& t) {
            if (t.w_length > 0.0)
                worst_ratio = std::max(worst_ratio, t.im_drift / t.w_length);
        };
        for (const auto& triple : ts.separatrices)
            for (const auto& t : triple) check_traj(t);
        for (const auto& s : ts.saddles) check_traj(s.path);
        if (ts.saddle_free) {
            try {
                triangulation_from_structure(p.n(), ts);
                ++validated;
            } catch (const Error& e) {
                ok = false;
                r.detail += std::string("  triangulation validation failed: ") + e.what() + "\n";
            }
        }
    };

    // the sample families of the chamber suite (same seed, same draws)
    std::mt19937 rng(seed);
    std::vector<Polynomial> batch;
    batch.push_back(Polynomial::from_coefficients(1, {cplx(-1.0)}));
    for (int n = 1; n <= 3; ++n)
        for (int s = 0; s < 10; ++s) batch.push_back(detail::random_saddle_free(n, rng, 0.5));
    for (const auto& p : batch) {
        check_structure(p, classify(p));
        ++r.samples;
    }

    // the wall-sweep grid
    for (int j = 0; j < grid; ++j) {
        const double th = 2.0 * std::numbers::pi * j / grid;
        const Polynomial p = Polynomial::from_coefficients(1, {-std::polar(1.0, th)});
        try {
            check_structure(p, classify(p));
        } catch (const Error&) {
            // ambiguous structure next to the wall; nothing emitted to check
        }
        ++r.samples;
    }

    r.seconds = sw.seconds();
    r.figure = worst_ratio;
    r.pass = ok && worst_ratio < 1e-6;
    r.comparison = "max |Im dw| / w-length " + detail::fmt(worst_ratio) + " < 1e-06, " +
                   std::to_string(validated) + " triangulations validated";
    return r;
}

// Registry used by the CLI: run one suite by name, or all of them.
inline std::vector<std::string> suite_names() {
    return {"two-method", "genericity", "flip-coherence", "chamber",   "equivariance",
            "jacobian",   "wall-sweep", "combinatorics",  "roundtrip", "horizontality"};
}

inline SuiteResult run_suite(const std::string& name, int samples = 0, unsigned seed = 0) {
    auto pick = [&](int dflt_samples, unsigned dflt_seed) {
        return std::pair<int, unsigned>{samples > 0 ? samples : dflt_samples,
                                        seed != 0 ? seed : dflt_seed};
    };
    if (name == "two-method") {
        auto [s, sd] = pick(50, 1);
        return suite_two_method(s, sd);
    }
    if (name == "genericity") {
        auto [s, sd] = pick(50, 1);
        return suite_genericity(s, sd);
    }
    if (name == "flip-coherence") {
        auto [s, sd] = pick(200, 2);
        return suite_flip_coherence(s, sd);
    }
    if (name == "chamber") {
        auto [s, sd] = pick(10, 3);
        return suite_chamber(s, sd);
    }
    if (name == "equivariance") {
        auto [s, sd] = pick(20, 4);
        return suite_equivariance(s, sd);
    }
    if (name == "jacobian") {
        auto [s, sd] = pick(20, 5);
        return suite_jacobian(s, sd);
    }
    if (name == "wall-sweep") {
        auto [s, sd] = pick(2000, 0);
        return suite_wall_sweep(s, sd);
    }
    if (name == "combinatorics") {
        return suite_combinatorics();
    }
    if (name == "roundtrip") {
        auto [s, sd] = pick(100, 6);
        return suite_roundtrip(s, sd);
    }
    if (name == "horizontality") {
        auto [s, sd] = pick(2000, 3);
        return suite_horizontality(s, sd);
    }
    throw DimensionMismatch("unknown verification suite: " + name);
}

} // namespace stokescluster
