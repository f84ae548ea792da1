#pragma once

// Subdominant solutions of y'' = P(z) y per Stokes sector and the asymptotic
// values w_k they induce.  Two independent methods are provided: a Wronskian
// method (WKB-seeded inward integration, stable because the subdominant
// solution grows inward) and a direct method (outward frame integration with
// rescaling, reading off the stabilized ratio y1/y2).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "stokescluster/configuration.hpp"
#include "stokescluster/detail/numerics.hpp"
#include "stokescluster/errors.hpp"
#include "stokescluster/polynomial.hpp"
#include "stokescluster/projective.hpp"

namespace stokescluster {

struct SolutionValue {
    cplx y{0.0};
    cplx dy{0.0};
};

struct SolutionFrame {
    cplx base_point{0.0};
    cplx y1{1.0}, dy1{0.0};
    cplx y2{0.0}, dy2{1.0};
    cplx wronskian() const { return y1 * dy2 - dy1 * y2; }
};

struct AsymptoticTuple {
    enum class Method { Wronskian, Projective };
    std::vector<ProjPoint> w;
    Method method = Method::Wronskian;
    bool normalized = false;
};

inline constexpr double kAsymTol = 1e-8;
inline constexpr double kProjTol = 1e-7;

// Base point for solution frames: the root centroid 0, shifted along the
// positive real axis when a root sits inside the exclusion ball around 0.
inline cplx base_point(const Polynomial& p) {
    const double se = p.root_set().sep_eff();
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& r : p.roots()) dmin = std::min(dmin, std::abs(r));
    if (dmin < 1e-4 * se) return cplx(0.1 * se, 0.0);
    return cplx(0.0);
}

namespace detail {

// L-stable three-stage SDIRK scheme (order 3) for the Riccati log-derivative
// u = y'/y, du/dz = P - u^2, marched inward along the ray arg z = theta
// through the root-free zone.  Each implicit stage is the quadratic
// A U^2 + U - C = 0 solved in closed form, taking the root nearest the
// subdominant branch -sqrt(P); the subdominant log-derivative is the
// attractor of inward integration, so seed and step errors are damped.
inline cplx riccati_inward(const Polynomial& p, double theta, double r_hi,
                           double r_lo, cplx u_seed, cplx sqrtP_seed) {
    const cplx dirv = std::polar(1.0, theta);
    const double g = 0.4358665215084590;
    const double b1 = -1.5 * g * g + 4.0 * g - 0.25;
    const double b2 = 1.5 * g * g - 5.0 * g + 1.25;
    const double a21 = 0.5 * (1.0 - g);
    const double c2 = 0.5 * (1.0 + g);
    const double alpha = 1e-3; // relative radial step

    auto aligned = [&p](cplx z, cplx ref) {
        cplx v = std::sqrt(p(z));
        if (std::abs(v + ref) < std::abs(v - ref)) v = -v;
        return v;
    };

    double r = r_hi;
    cplx u = u_seed;
    cplx vref = sqrtP_seed;
    while (r > r_lo + 1e-14 * r_lo) {
        const double h = std::min(alpha * r, r - r_lo);
        const cplx z0 = r * dirv;
        const cplx dz = -h * dirv;

        auto stage = [&](cplx K, cplx zs) {
            const cplx A = g * dz;
            const cplx C = K + A * p(zs);
            const cplx s = std::sqrt(1.0 + 4.0 * A * C);
            // root pair of A U^2 + U - C, computed cancellation-free
            const cplx big = std::abs(-1.0 + s) >= std::abs(-1.0 - s) ? (-1.0 + s) : (-1.0 - s);
            const cplx Ua = big / (2.0 * A);
            const cplx Ub = std::abs(Ua) > 0.0 ? (-C / A) / Ua : cplx(0.0);
            const cplx uref = -aligned(zs, vref);
            return std::abs(Ua - uref) <= std::abs(Ub - uref) ? Ua : Ub;
        };

        const cplx z1 = z0 + g * dz;
        const cplx U1 = stage(u, z1);
        const cplx f1 = p(z1) - U1 * U1;

        const cplx z2 = z0 + c2 * dz;
        const cplx U2 = stage(u + dz * (a21 * f1), z2);
        const cplx f2 = p(z2) - U2 * U2;

        const cplx z3 = z0 + dz;
        const cplx U3 = stage(u + dz * (b1 * f1 + b2 * f2), z3);

        u = U3; // stiffly accurate: the last stage is the step result
        vref = aligned(z3, vref);
        r -= h;
    }
    return u;
}

// Adaptive Dormand-Prince integration of the linear system (y, y') along the
// straight segment z_from -> z_to, renormalizing by a common scalar whenever
// the solution magnitude passes renorm_at (only projective data survives).
inline SolutionValue linear_segment(const Polynomial& p, cplx z_from, cplx z_to,
                                    cplx y, cplx dy, double rtol = 1e-10,
                                    double renorm_at = 1e100) {
    const cplx d = z_to - z_from;
    if (std::abs(d) == 0.0) return {y, dy};
    auto f = [&](double t, const std::array<cplx, 2>& Y) -> std::array<cplx, 2> {
        const cplx z = z_from + t * d;
        return {d * Y[1], d * (p(z) * Y[0])};
    };
    double t = 0.0;
    // initial step resolves the local oscillation scale |sqrt(P)| |dz|
    double h = 0.1 / (1.0 + std::abs(std::sqrt(p(z_from))) * std::abs(d));
    std::array<cplx, 2> Y{y, dy};
    while (t < 1.0) {
        h = std::min(h, 1.0 - t);
        auto [Yn, err] = dp45_step<2>(f, t, Y, h);
        const double scale = std::max({std::abs(Y[0]), std::abs(Y[1]), 1e-300});
        const double tol = rtol * scale;
        if (err > tol && h > 1e-15) {
            h *= std::clamp(0.9 * std::pow(tol / err, 0.25), 0.2, 1.0);
            continue;
        }
        t += h;
        Y = Yn;
        const double mag = std::max(std::abs(Y[0]), std::abs(Y[1]));
        if (mag > renorm_at) {
            Y[0] /= mag;
            Y[1] /= mag;
        }
        h *= err > 0.0 ? std::clamp(0.9 * std::pow(tol / err, 0.20), 0.2, 5.0) : 5.0;
    }
    return {Y[0], Y[1]};
}

// Single-R inward computation of the subdominant solution of sector k.
inline SolutionValue subdominant_raw(const Polynomial& p, int k, double R, cplx base) {
    const int m = p.num_directions();
    const double theta = 2.0 * std::numbers::pi * k / m;
    const cplx dirv = std::polar(1.0, theta);
    const cplx zR = R * dirv;

    // branch of sqrt(P) with Re int sqrt(P) increasing outward, so the seeded
    // solution P^{-1/4} exp(-int sqrt(P)) is the subdominant one
    cplx v = std::sqrt(p(zR));
    if ((dirv * v).real() < 0.0) v = -v;
    const cplx u_seed = -v - p.derivative(zR) / (4.0 * p(zR));

    const double r_far = 2.0 * (1.0 + p.root_set().max_abs());
    const cplx u_far = riccati_inward(p, theta, R, r_far, u_seed, v);
    return linear_segment(p, r_far * dirv, base, cplx(1.0), u_far);
}

inline ProjPoint downstream_value(const SolutionValue& s) {
    return ProjPoint(s.dy, -s.y);
}

} // namespace detail

// Subdominant solution of sector k evaluated at the base point, stabilized
// against the seeding radius: R and 2R must agree downstream within asym_tol,
// doubling R (at most three times) until they do.
inline SolutionValue subdominant_solution(const Polynomial& p, int k, double R = 0.0) {
    const int m = p.num_directions();
    k = ((k % m) + m) % m;
    const double escape = p.escape_radius();
    if (R > 0.0 && R < escape)
        throw DimensionMismatch("seeding radius below the escape radius");
    double Rcur = R > 0.0 ? R : 3.0 * escape;
    const cplx base = base_point(p);

    SolutionValue s1 = detail::subdominant_raw(p, k, Rcur, base);
    for (int i = 0; i < 3; ++i) {
        SolutionValue s2 = detail::subdominant_raw(p, k, 2.0 * Rcur, base);
        if (chordal_dist(detail::downstream_value(s1), detail::downstream_value(s2)) <= kAsymTol)
            return s2;
        Rcur *= 2.0;
        s1 = s2;
    }
    throw ConvergenceCheckFailure("asymptotic value not stable under doubling of the seeding radius");
}

namespace detail {

inline void verify_genericity(const std::vector<ProjPoint>& w) {
    const int m = static_cast<int>(w.size());
    for (int k = 0; k < m; ++k) {
        if (chordal_dist(w[k], w[(k + 1) % m]) <= kProjTol)
            throw GenericityViolation("adjacent asymptotic values coincide at sectors " +
                                      std::to_string(k) + ", " + std::to_string((k + 1) % m));
    }
    std::vector<ProjPoint> distinct;
    for (const auto& p : w) {
        bool fresh = true;
        for (const auto& q : distinct)
            if (chordal_dist(p, q) <= kProjTol) {
                fresh = false;
                break;
            }
        if (fresh) distinct.push_back(p);
    }
    if (distinct.size() < 3)
        throw GenericityViolation("fewer than three distinct asymptotic values");
}

} // namespace detail

// Asymptotic values from an explicit solution frame at the canonical base
// point: w_k = W(y1, Y_k) : W(y2, Y_k) with W the Wronskian at the base.
inline AsymptoticTuple asymptotic_values(const Polynomial& p, const SolutionFrame& f,
                                         double R = 0.0) {
    if (std::abs(f.wronskian() - cplx(1.0)) > 1e-12)
        throw DimensionMismatch("solution frame must have unit Wronskian");
    const cplx base = base_point(p);
    if (std::abs(f.base_point - base) > 1e-12 * (1.0 + std::abs(base)))
        throw DimensionMismatch("solution frame must sit at the canonical base point");

    AsymptoticTuple t;
    t.method = AsymptoticTuple::Method::Wronskian;
    const int m = p.num_directions();
    t.w.reserve(m);
    for (int k = 0; k < m; ++k) {
        const SolutionValue s = subdominant_solution(p, k, R);
        t.w.emplace_back(f.y1 * s.dy - f.dy1 * s.y, f.y2 * s.dy - f.dy2 * s.y);
    }
    detail::verify_genericity(t.w);
    return t;
}

inline AsymptoticTuple asymptotic_values(const Polynomial& p, double R = 0.0) {
    SolutionFrame f;
    f.base_point = base_point(p);
    return asymptotic_values(p, f, R);
}

// Direct asymptotic value of one sector: integrate the standard frame outward
// from the base along the ray arg z = theta_k + angle_offset and return the
// projective ratio (y1 : y2) once it stabilizes across a doubling of |z|.
inline ProjPoint direct_asymptotic_value(const Polynomial& p, int k,
                                         double angle_offset = 0.0) {
    const int m = p.num_directions();
    k = ((k % m) + m) % m;
    const double theta = 2.0 * std::numbers::pi * k / m + angle_offset;
    const cplx dirv = std::polar(1.0, theta);
    const cplx base = base_point(p);

    const double r_far = 2.0 * (1.0 + p.root_set().max_abs());
    const double r_max = 8.0 * p.escape_radius();

    // frame state (y1, y1', y2, y2'), rescaled by a common factor so the
    // projective content is untouched while dominance growth stays bounded
    std::array<cplx, 4> Y{1.0, 0.0, 0.0, 1.0};
    auto renorm = [&Y]() {
        const double mag = std::max({std::abs(Y[0]), std::abs(Y[1]), std::abs(Y[2]), std::abs(Y[3])});
        if (mag > 1e50)
            for (auto& y : Y) y /= mag;
    };
    auto advance = [&](cplx z_from, cplx z_to) {
        const cplx d = z_to - z_from;
        auto f = [&](double t, const std::array<cplx, 4>& s) -> std::array<cplx, 4> {
            const cplx z = z_from + t * d;
            const cplx P = p(z);
            return {d * s[1], d * (P * s[0]), d * s[3], d * (P * s[2])};
        };
        double t = 0.0;
        double h = 0.1 / (1.0 + std::abs(std::sqrt(p(z_from))) * std::abs(d));
        while (t < 1.0) {
            h = std::min(h, 1.0 - t);
            auto [Yn, err] = detail::dp45_step<4>(f, t, Y, h);
            double scale = 1e-300;
            for (const auto& y : Y) scale = std::max(scale, std::abs(y));
            const double tol = 1e-10 * scale;
            if (err > tol && h > 1e-15) {
                h *= std::clamp(0.9 * std::pow(tol / err, 0.25), 0.2, 1.0);
                continue;
            }
            t += h;
            Y = Yn;
            renorm();
            h *= err > 0.0 ? std::clamp(0.9 * std::pow(tol / err, 0.20), 0.2, 5.0) : 5.0;
        }
    };

    advance(base, r_far * dirv);
    ProjPoint prev(Y[0], Y[2]);
    double r = r_far;
    while (2.0 * r <= r_max) {
        advance(r * dirv, 2.0 * r * dirv);
        r *= 2.0;
        ProjPoint cur(Y[0], Y[2]);
        if (chordal_dist(cur, prev) < kAsymTol) return cur;
        prev = cur;
    }
    throw NoConvergence("asymptotic ratio did not stabilize by the maximum radius");
}

inline AsymptoticTuple asymptotic_values_direct(const Polynomial& p) {
    AsymptoticTuple t;
    t.method = AsymptoticTuple::Method::Projective;
    const int m = p.num_directions();
    t.w.reserve(m);
    for (int k = 0; k < m; ++k) t.w.push_back(direct_asymptotic_value(p, k));
    detail::verify_genericity(t.w);
    return t;
}

// Canonical representative of the PGL2 orbit: the least k with w_k, w_{k+1},
// w_{k+2} pairwise distinct is sent to (0, 1, inf).  Distinctness is judged
// at the genericity tolerance so that truly coincident values blurred by
// solver noise never seed an ill-conditioned normalization.
inline AsymptoticTuple normalize_tuple(const AsymptoticTuple& t) {
    Configuration c{t.w};
    Configuration nc = normalize_points(c, kProjTol);
    AsymptoticTuple out;
    out.w = std::move(nc.points);
    out.method = t.method;
    out.normalized = true;
    return out;
}

} // namespace stokescluster
