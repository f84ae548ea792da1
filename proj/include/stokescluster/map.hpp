#pragma once

// The main map F from polynomial potentials to point configurations on CP^1,
// its hbar-deformation F_hbar, cluster charts read through the WKB
// triangulation, and the numerical verifications attached to them (finite
// difference Jacobians, flip coherence, epsilon windows for chart validity).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "stokescluster/configuration.hpp"
#include "stokescluster/errors.hpp"
#include "stokescluster/foliation.hpp"
#include "stokescluster/polynomial.hpp"
#include "stokescluster/stokes.hpp"
#include "stokescluster/triangulation.hpp"

namespace stokescluster {

// Deformation parameter, restricted to the right half plane so the principal
// branch of hbar^{-2/(n+3)} is single valued.
struct HbarParam {
    cplx hbar{1.0};
};

inline void validate_hbar(const HbarParam& h) {
    if (!(h.hbar.real() > 0.0))
        throw DimensionMismatch("hbar must have positive real part");
}

// Configuration of asymptotic values, marked point k carrying w_k.
inline Configuration F(const Polynomial& p) { return Configuration{asymptotic_values(p).w}; }

// t = hbar^{-2/(n+3)} via the principal logarithm.
inline cplx hbar_scale(const HbarParam& h, int n) {
    validate_hbar(h);
    return std::exp(cplx(-2.0 / (n + 3)) * std::log(h.hbar));
}

inline Configuration F_hbar(const Polynomial& p, const HbarParam& h) {
    return F(scale_action(hbar_scale(h, p.n()), p));
}

// Cross-ratio coordinates of F_hbar(p, h) in the WKB triangulation of p.
// For real hbar the rescaled differential has the same horizontal foliation
// as p, so the chart tests the deformed configuration against the chamber
// triangulation of p itself.
inline ClusterChart wkb_chart(const Polynomial& p, const HbarParam& h,
                              const TraceParams& params = {}) {
    const IdealTriangulation T = wkb_triangulation(p, params);
    return chart_coords(F_hbar(p, h), T);
}

struct JacobianResult {
    Eigen::MatrixXcd J;      // d log X_j / d a_i, rows j, columns i
    double sigma_min = 0.0;  // smallest singular value
    double condition = 0.0;  // sigma_max / sigma_min
    double drift = 0.0;      // relative h vs h/2 discrepancy
};

namespace detail {

inline std::vector<cplx> chart_at(const std::vector<cplx>& a, int n,
                                  const IdealTriangulation& T) {
    const Polynomial p = Polynomial::from_coefficients(n, std::vector<cplx>(a));
    return chart_coords(F(p), T).X;
}

inline Eigen::MatrixXcd jacobian_at_step(const std::vector<cplx>& a, int n,
                                         const IdealTriangulation& T, double hrel) {
    const int dim = n;
    Eigen::MatrixXcd J(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double hi = hrel * (1.0 + std::abs(a[i]));
        std::vector<cplx> ap = a, am = a;
        ap[i] += hi;
        am[i] -= hi;
        const std::vector<cplx> Xp = chart_at(ap, n, T);
        const std::vector<cplx> Xm = chart_at(am, n, T);
        for (int j = 0; j < dim; ++j)
            // branch-safe difference of log X: log of the ratio, which stays
            // near 1 for small steps
            J(j, i) = std::log(Xp[j] / Xm[j]) / (2.0 * hi);
    }
    return J;
}

} // namespace detail

// Finite-difference Jacobian of the log chart coordinates with respect to the
// coefficients (a_0, ..., a_{n-1}), with an h vs h/2 consistency check.  The
// reference triangulation is the WKB triangulation when the differential is
// saddle free, otherwise any triangulation generic for F(p).
inline JacobianResult jacobian_F(const Polynomial& p, double hrel = 1e-5) {
    const int n = p.n();
    if (n < 1) throw DimensionMismatch("the chart has no coordinates for n = 0");

    IdealTriangulation T = [&] {
        try {
            return wkb_triangulation(p);
        } catch (const NotSaddleFree&) {
            auto T2 = find_generic_triangulation(F(p));
            if (!T2) throw NonGeneric("no triangulation is generic for F(p)");
            return *T2;
        }
    }();

    const Eigen::MatrixXcd Jh = detail::jacobian_at_step(p.coefficients(), n, T, hrel);
    const Eigen::MatrixXcd Jh2 = detail::jacobian_at_step(p.coefficients(), n, T, hrel / 2.0);
    const double denom = std::max(Jh2.norm(), 1e-300);
    const double drift = (Jh - Jh2).norm() / denom;
    if (drift > 0.10)
        throw StepTooLarge("finite-difference step fails the h vs h/2 consistency check");

    JacobianResult r;
    r.J = Jh2;
    r.drift = drift;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r.J);
    const auto& sv = svd.singularValues();
    r.sigma_min = sv(sv.size() - 1);
    r.condition = r.sigma_min > 0.0 ? sv(0) / r.sigma_min
                                    : std::numeric_limits<double>::infinity();
    return r;
}

// Maximal relative discrepancy between the two routes around a flip: reading
// the cross ratios in flip(T, k) directly, versus mutating the chart of T.
inline double flip_coherence(const Configuration& c, const IdealTriangulation& T, Arc k) {
    const ClusterChart direct = chart_coords(c, flip(T, k));
    const ClusterChart mutated = mutate_coords(chart_coords(c, T), k);
    double err = 0.0;
    for (std::size_t j = 0; j < direct.X.size(); ++j) {
        const double scale = std::max({std::abs(direct.X[j]), std::abs(mutated.X[j]), 1e-300});
        err = std::max(err, std::abs(direct.X[j] - mutated.X[j]) / scale);
    }
    return err;
}

inline double flip_coherence(const Polynomial& p, const IdealTriangulation& T, Arc k) {
    return flip_coherence(F(p), T, k);
}

// Epsilon window for chart validity: halve from 0.5 until the chart exists
// with all |log|X_j|| < log_bound at hbar in {eps, eps/2, eps/4}, or the
// search floor 1e-3 is passed.
struct EpsilonSearch {
    double epsilon = 0.0;
    bool success = false;
    double max_abs_log = 0.0; // over the three hbar values at the accepted epsilon
};

inline EpsilonSearch epsilon_for_chart(const Polynomial& p, double log_bound = 40.0,
                                       const TraceParams& params = {}) {
    const IdealTriangulation T = wkb_triangulation(p, params);
    for (double eps = 0.5; eps >= 1e-3; eps /= 2.0) {
        bool ok = true;
        double mal = 0.0;
        for (double f : {1.0, 0.5, 0.25}) {
            try {
                const ClusterChart ch = chart_coords(F_hbar(p, HbarParam{eps * f}), T);
                for (const auto& x : ch.X) {
                    const double al = std::abs(std::log(std::abs(x)));
                    mal = std::max(mal, al);
                    if (al >= log_bound) ok = false;
                }
            } catch (const NonGeneric&) {
                ok = false; // configuration not generic for the chamber triangulation
            } catch (const GenericityViolation&) {
                ok = false; // deformed tuple collided below the solver margin
            }
            if (!ok) break;
        }
        if (ok) return {eps, true, mal};
    }
    return {0.0, false, 0.0};
}

// One-document summary of the pipeline at (p, hbar).  The triangulation and
// chart fields stay empty when the structure or genericity prerequisites
// fail; hard numerical errors still propagate.
struct MapReport {
    Polynomial polynomial;
    AsymptoticTuple tuple;
    std::optional<IdealTriangulation> triangulation;
    std::optional<ClusterChart> chart;
    double wall_prox = 0.0;
    std::optional<double> jacobian_condition;
    std::string failure; // empty, or the error name that blocked the chart
};

inline MapReport map_report(const Polynomial& p, const HbarParam& h,
                            bool with_jacobian = true, const TraceParams& params = {}) {
    validate_hbar(h);
    MapReport r{p, asymptotic_values(p), std::nullopt, std::nullopt, 0.0, std::nullopt, {}};
    r.wall_prox = wall_proximity(p);
    try {
        r.triangulation = wkb_triangulation(p, params);
        r.chart = chart_coords(F_hbar(p, h), *r.triangulation);
    } catch (const NotSaddleFree& e) {
        r.failure = e.name();
    } catch (const AmbiguousStructure& e) {
        r.failure = e.name();
    } catch (const NonGeneric& e) {
        r.failure = e.name();
    }
    if (with_jacobian && r.chart && p.n() >= 1)
        r.jacobian_condition = jacobian_F(p).condition;
    return r;
}

} // namespace stokescluster
