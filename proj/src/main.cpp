// stokes-cluster: trajectory structures, asymptotic values, cluster charts,
// hbar sweeps, verification suites, and exchange graphs for P(z) dz^2.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stokescluster/foliation.hpp"
#include "stokescluster/json_io.hpp"
#include "stokescluster/map.hpp"
#include "stokescluster/stokes.hpp"
#include "stokescluster/svg.hpp"
#include "stokescluster/triangulation.hpp"
#include "stokescluster/verify.hpp"

namespace sc = stokescluster;

namespace {

// Thrown for anything wrong with the request itself (flags, JSON, ranges).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int kMaxDegreeParam = 6;

sc::cplx parse_cplx(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw InputError("cannot parse complex number '" + s + "'");
    if (in >> comma) {
        if (comma != ',' || !(in >> im))
            throw InputError("cannot parse complex number '" + s + "' (expected re,im)");
    }
    std::string rest;
    if (in >> rest) throw InputError("trailing characters in complex number '" + s + "'");
    return sc::cplx(re, im);
}

sc::json parse_json(const std::string& text, const std::string& what) {
    try {
        return sc::json::parse(text);
    } catch (const sc::json::exception& e) {
        throw InputError("malformed JSON in " + what + ": " + e.what());
    }
}

void check_degree_param(int n) {
    if (n < 0 || n > kMaxDegreeParam)
        throw InputError("n must be between 0 and " + std::to_string(kMaxDegreeParam));
}

// Polynomial from --input (path or inline JSON) or from --n/--coeffs.
sc::Polynomial load_polynomial(const std::string& input, int n, bool n_set,
                               const std::string& coeffs) {
    if (!input.empty()) {
        if (n_set || !coeffs.empty())
            throw InputError("give either --input or --n/--coeffs, not both");
        std::string text = input;
        if (std::filesystem::exists(input)) {
            std::ifstream f(input);
            std::stringstream buf;
            buf << f.rdbuf();
            text = buf.str();
        }
        const sc::json j = parse_json(text, "--input");
        sc::Polynomial p = [&] {
            try {
                return sc::polynomial_from_json(j);
            } catch (const sc::Error& e) {
                throw InputError(e.what());
            }
        }();
        check_degree_param(p.n());
        return p;
    }
    if (!n_set) throw InputError("a polynomial is required: give --n (with --coeffs) or --input");
    check_degree_param(n);
    std::vector<sc::cplx> a;
    if (!coeffs.empty()) {
        const sc::json j = parse_json(coeffs, "--coeffs");
        if (!j.is_array()) throw InputError("--coeffs must be a JSON array");
        for (const auto& entry : j) {
            if (entry.is_number()) {
                a.emplace_back(entry.get<double>(), 0.0);
            } else {
                try {
                    a.push_back(sc::cplx_from_json(entry));
                } catch (const sc::Error& e) {
                    throw InputError(e.what());
                }
            }
        }
    }
    if (static_cast<int>(a.size()) != n)
        throw InputError("--coeffs must list exactly n = " + std::to_string(n) +
                         " coefficients a_0..a_{n-1}, got " + std::to_string(a.size()));
    try {
        return sc::Polynomial::from_coefficients(n, std::move(a));
    } catch (const sc::Error& e) {
        throw InputError(e.what());
    }
}

void write_artifact(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open output file '" + path + "'");
    f << content;
}

std::string dump(const sc::json& j) { return j.dump(2) + "\n"; }

// ---- subcommand runners (run-phase, sc::Error here means exit 3) ----

int run_trajectories(const sc::Polynomial& p, double radius, double tol,
                     const std::string& out, const std::string& svg) {
    sc::TraceParams params;
    if (radius > 0.0) params.escape_radius = radius;
    if (tol > 0.0) params.rel_tol = tol;
    const sc::TrajectoryStructure ts = sc::classify(p, params);
    std::optional<sc::IdealTriangulation> T;
    if (ts.saddle_free) T = sc::triangulation_from_structure(p.n(), ts);
    write_artifact(out, dump(sc::to_json(ts)));
    if (!svg.empty()) write_artifact(svg, sc::svg_plot(p, ts, T));
    return 0;
}

int run_stokes(const sc::Polynomial& p, double radius, const std::string& out) {
    const sc::AsymptoticTuple t = sc::asymptotic_values(p, radius);
    write_artifact(out, dump(sc::to_json(t)));
    return 0;
}

int run_chart(const sc::Polynomial& p, const sc::cplx& hbar, const std::string& out) {
    const sc::MapReport rep = sc::map_report(p, sc::HbarParam{hbar});
    write_artifact(out, dump(sc::to_json(rep)));
    return 0;
}

int run_sweep(const sc::Polynomial& p, const sc::cplx& hbar_max, int points,
              const std::string& out) {
    if (points < 2) throw InputError("--samples must be at least 2 for a sweep");
    if (hbar_max.imag() != 0.0 || hbar_max.real() <= 0.0)
        throw InputError("sweep needs a real positive --hbar upper bound");
    const sc::IdealTriangulation T = sc::wkb_triangulation(p);

    std::string csv = "hbar";
    for (const auto& a : T.arcs()) {
        const std::string tag = std::to_string(a[0]) + "_" + std::to_string(a[1]);
        csv += ",X" + tag + "_re,X" + tag + "_im";
    }
    csv += "\n";

    const double hi = hbar_max.real(), lo = hi / 1000.0;
    char buf[64];
    for (int i = 0; i < points; ++i) {
        const double h = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
        std::snprintf(buf, sizeof(buf), "%.12e", h);
        csv += buf;
        try {
            const sc::ClusterChart ch =
                sc::chart_coords(sc::F_hbar(p, sc::HbarParam{sc::cplx(h)}), T);
            for (const auto& x : ch.X) {
                std::snprintf(buf, sizeof(buf), ",%.12e,%.12e", x.real(), x.imag());
                csv += buf;
            }
        } catch (const sc::Error& e) {
            std::cerr << "sweep: hbar = " << h << ": " << e.what() << "\n";
            for (int j = 0; j < T.num_arcs(); ++j) csv += ",nan,nan";
        }
        csv += "\n";
    }
    write_artifact(out, csv);
    return 0;
}

int run_verify(const std::string& suite, int samples, unsigned seed) {
    std::vector<std::string> names;
    if (suite == "all") {
        names = sc::suite_names();
    } else {
        const auto known = sc::suite_names();
        if (std::find(known.begin(), known.end(), suite) == known.end())
            throw InputError("unknown suite '" + suite + "'");
        names.push_back(suite);
    }
    bool all_pass = true;
    for (const auto& name : names) {
        const sc::SuiteResult r = sc::run_suite(name, samples, seed);
        std::cout << r.summary() << "\n";
        if (!r.detail.empty()) std::cout << r.detail;
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 4;
}

int run_exchange_graph(int n, const std::string& dot_path) {
    const sc::ExchangeGraph g = sc::exchange_graph(n + 3);
    write_artifact(dot_path, sc::to_dot(g));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory structures, asymptotic values and cluster charts of P(z) dz^2"};
    app.require_subcommand(1);

    int n = 0;
    std::string coeffs, input, hbar_str = "1", out, svg, dot, suite = "all";
    double radius = 0.0, tol = 0.0;
    int samples = 0;
    unsigned seed = 0;

    auto add_poly_flags = [&](CLI::App* cmd) {
        cmd->add_option("--n", n, "degree parameter n (polynomial degree n+1), 0..6");
        cmd->add_option("--coeffs", coeffs,
                        "JSON array of n coefficients a_0..a_{n-1}, entries [re,im] or re");
        cmd->add_option("--input", input, "polynomial JSON: a file path or an inline document");
    };

    CLI::App* c_traj = app.add_subcommand("trajectories",
                                          "trace separatrices and emit structure JSON / SVG");
    add_poly_flags(c_traj);
    c_traj->add_option("--radius", radius, "escape radius override");
    c_traj->add_option("--tol", tol, "relative tolerance override for tracing");
    c_traj->add_option("--out", out, "JSON output path (default stdout)");
    c_traj->add_option("--svg", svg, "SVG output path (omit to skip the plot)");

    CLI::App* c_stokes = app.add_subcommand("stokes", "compute the asymptotic value tuple");
    add_poly_flags(c_stokes);
    c_stokes->add_option("--radius", radius, "seeding radius override");
    c_stokes->add_option("--out", out, "JSON output path (default stdout)");

    CLI::App* c_chart = app.add_subcommand("chart", "full report: tuple, triangulation, chart");
    add_poly_flags(c_chart);
    c_chart->add_option("--hbar", hbar_str, "hbar as re,im (default 1)");
    c_chart->add_option("--out", out, "JSON output path (default stdout)");

    CLI::App* c_sweep = app.add_subcommand("sweep",
                                           "chart coordinates over a log-spaced hbar grid (CSV)");
    add_poly_flags(c_sweep);
    c_sweep->add_option("--hbar", hbar_str, "upper end of the hbar grid (default 1)");
    c_sweep->add_option("--samples", samples, "number of grid points (default 16)");
    c_sweep->add_option("--out", out, "CSV output path (default stdout)");

    CLI::App* c_verify = app.add_subcommand("verify", "run the verification suites");
    c_verify->add_option("--suite", suite, "suite name or 'all' (default)");
    c_verify->add_option("--samples", samples, "sample count override (0 = suite default)");
    c_verify->add_option("--seed", seed, "random seed override (0 = suite default)");

    CLI::App* c_graph = app.add_subcommand("exchange-graph",
                                           "triangulation flip graph in Graphviz DOT");
    c_graph->add_option("--n", n, "degree parameter n; the polygon has n+3 vertices");
    c_graph->add_option("--dot", dot, "DOT output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_verify) return run_verify(suite, samples, seed);
        if (*c_graph) {
            check_degree_param(n);
            return run_exchange_graph(n, dot);
        }
        const sc::Polynomial p =
            load_polynomial(input, n, c_traj->count("--n") || c_stokes->count("--n") ||
                                          c_chart->count("--n") || c_sweep->count("--n"),
                            coeffs);
        if (*c_traj) return run_trajectories(p, radius, tol, out, svg);
        if (*c_stokes) return run_stokes(p, radius, out);
        if (*c_chart) return run_chart(p, parse_cplx(hbar_str), out);
        if (*c_sweep) return run_sweep(p, parse_cplx(hbar_str), samples > 0 ? samples : 16, out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sc::Error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    return 0;
}
