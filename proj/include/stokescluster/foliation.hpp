#pragma once

// Horizontal foliation of the quadratic differential P(z) dz^2 on the plane:
// trajectory tracing in the unit-speed w = int sqrt(P) dz parameterization,
// separatrix fans at the zeros, saddle detection by launch-angle bisection,
// and the ideal triangulation induced by a saddle-free differential.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stokescluster/detail/numerics.hpp"
#include "stokescluster/errors.hpp"
#include "stokescluster/polynomial.hpp"
#include "stokescluster/triangulation.hpp"

namespace stokescluster {

// the distinguished ray R_{>0} * exp(2*pi*i*k/(n+3))
struct StokesDirection {
    int k = 0;
    bool operator==(const StokesDirection&) const = default;
};

struct TraceParams {
    double rel_tol = 1e-9;       // per-step relative error target
    double escape_radius = 0.0;  // <= 0: 10 * (1 + max |root|)
    double zero_exclusion = 0.0; // <= 0: 1e-4 * effective root separation
    double max_w_length = 0.0;   // <= 0: 50 * escape_radius^{(n+3)/2}
    double angular_tol = 0.0;    // <= 0: 0.1 * pi / (n+3)
    std::size_t max_steps = 2000000;
};

struct Terminus {
    enum class Kind { Direction, Zero, Truncated };
    Kind kind = Kind::Truncated;
    int index = -1; // sector k for Direction, zero index for Zero
};

struct Trajectory {
    std::vector<cplx> points;
    std::optional<int> origin; // index of the zero the trace was launched from
    Terminus terminus;
    double w_length = 0.0; // arc length in the |dw| = |sqrt(P)| |dz| metric
    double im_drift = 0.0; // accumulated |Im dw|, the horizontality defect
};

namespace detail {

struct TraceContext {
    double escape_r = 0.0;
    double zero_excl = 0.0;
    double max_w = 0.0;
    double ang_tol = 0.0;
    double rel_tol = 1e-9;
    std::size_t max_steps = 0;
};

inline TraceContext resolve_params(const Polynomial& p, const TraceParams& tp) {
    TraceContext c;
    c.escape_r = tp.escape_radius > 0.0 ? tp.escape_radius : p.escape_radius();
    const double se = p.root_set().sep_eff();
    c.zero_excl = tp.zero_exclusion > 0.0 ? tp.zero_exclusion : 1e-4 * se;
    c.max_w = tp.max_w_length > 0.0
                  ? tp.max_w_length
                  : 50.0 * std::pow(c.escape_r, 0.5 * (p.n() + 3));
    c.ang_tol = tp.angular_tol > 0.0 ? tp.angular_tol
                                     : 0.1 * std::numbers::pi / (p.n() + 3);
    c.rel_tol = tp.rel_tol;
    c.max_steps = tp.max_steps;
    return c;
}

inline std::pair<double, int> nearest_root(const std::vector<cplx>& roots, cplx z) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1;
    for (int i = 0; i < static_cast<int>(roots.size()); ++i) {
        double d = std::abs(z - roots[i]);
        if (d < best) {
            best = d;
            bi = i;
        }
    }
    return {best, bi};
}

// nearest distinguished direction k and the angular margin to the boundary
// of its sector (width 2*pi/m centered on the ray)
inline std::pair<int, double> sector_of(cplx z, int m) {
    const double w = 2.0 * std::numbers::pi / m;
    const double theta = std::arg(z);
    const long c = std::lround(theta / w);
    const double margin = 0.5 * w - std::abs(theta - static_cast<double>(c) * w);
    int k = static_cast<int>(c % m);
    if (k < 0) k += m;
    return {k, margin};
}

} // namespace detail

// Integrate dz/ds = sign / sqrt(P(z)) from start: unit speed in w, so the
// trace follows the horizontal leaf Im w = const through the start point.
// Stops on escape past escape_radius (classified to the nearest distinguished
// direction), on entering the exclusion ball of a zero, or on exhausting the
// w-length budget.
inline Trajectory trace_trajectory(const Polynomial& p, cplx start, int sign,
                                   const TraceParams& params = {}) {
    const auto ctx = detail::resolve_params(p, params);
    const auto& roots = p.roots();
    {
        auto [d0, j0] = detail::nearest_root(roots, start);
        if (d0 < ctx.zero_excl)
            throw StartTooCloseToZero("trace start lies inside the exclusion ball of zero " +
                                      std::to_string(j0));
    }

    const double dir = sign >= 0 ? 1.0 : -1.0;
    const int m = p.num_directions();

    Trajectory traj;
    traj.points.push_back(start);

    cplx z = start;
    cplx branch = std::sqrt(p(start));
    if (!(std::abs(branch) > 0.0))
        throw StartTooCloseToZero("P vanishes at the trace start point");

    auto aligned = [&p](cplx zz, cplx ref) {
        cplx v = std::sqrt(p(zz));
        if (std::abs(v + ref) < std::abs(v - ref)) v = -v;
        return v;
    };

    double h = 0.01 * p.root_set().sep_eff() * std::abs(branch);
    std::size_t steps = 0;
    while (true) {
        if (++steps > ctx.max_steps) {
            traj.terminus = {Terminus::Kind::Truncated, -1};
            break;
        }

        // keep |dz| below a quarter of the distance to the nearest zero (so a
        // step cannot tunnel through an exclusion ball) and below half the
        // local length scale
        auto [dnear, jnear] = detail::nearest_root(roots, z);
        const double ab = std::abs(branch);
        const double hcap = std::min(0.25 * dnear, 0.5 * (1.0 + std::abs(z))) * ab;
        if (h > hcap) h = hcap;

        const cplx bref = branch;
        auto f = [&](double, const std::array<cplx, 1>& y) -> std::array<cplx, 1> {
            return {dir / aligned(y[0], bref)};
        };
        auto [ynew, err] = detail::dp45_step<1>(f, 0.0, std::array<cplx, 1>{z}, h);
        const double tol = ctx.rel_tol * std::max(1.0, std::abs(z));
        const double hmin = 1e-14 * std::max(1.0, std::abs(z)) * ab;
        if (err > tol && h > hmin) {
            h *= std::clamp(0.9 * std::pow(tol / err, 0.25), 0.2, 1.0);
            continue;
        }

        const cplx z1 = ynew[0];
        // dw = int sqrt(P) dz along the step; sqrt(P) is holomorphic near the
        // step, so the chord integral equals the path integral exactly, and
        // composite Simpson on the chord measures the drift off the leaf
        const cplx dz = z1 - z;
        const cplx v0 = branch;
        const cplx vq = aligned(z + 0.25 * dz, v0);
        const cplx vm = aligned(z + 0.50 * dz, vq);
        const cplx vt = aligned(z + 0.75 * dz, vm);
        const cplx v1 = aligned(z1, vt);
        const cplx chain[5] = {v0, vq, vm, vt, v1};
        for (int i = 1; i < 5; ++i) {
            if (std::abs(chain[i - 1]) > 0.0 && std::abs(chain[i]) > 0.0 &&
                (chain[i] / chain[i - 1]).real() <= 0.0)
                throw BranchTrackingFailure(
                    "sqrt(P) branch could not be tracked continuously along a trajectory step");
        }
        const cplx dw = dz * (v0 + 4.0 * vq + 2.0 * vm + 4.0 * vt + v1) / 12.0;

        z = z1;
        if (std::abs(v1) > 0.0) branch = v1;
        traj.points.push_back(z);
        traj.w_length += std::abs(dw);
        traj.im_drift += std::abs(dw.imag());

        if (std::abs(z) > ctx.escape_r) {
            auto [k, margin] = detail::sector_of(z, m);
            (void)margin;
            traj.terminus = {Terminus::Kind::Direction, k};
            break;
        }
        auto [d1, j1] = detail::nearest_root(roots, z);
        if (d1 < ctx.zero_excl) {
            traj.terminus = {Terminus::Kind::Zero, j1};
            break;
        }
        if (traj.w_length > ctx.max_w) {
            traj.terminus = {Terminus::Kind::Truncated, -1};
            break;
        }

        h *= err > 0.0 ? std::clamp(0.9 * std::pow(tol / err, 0.20), 0.2, 5.0) : 5.0;
    }
    return traj;
}

// The three horizontal prong directions at a simple zero a: with c = P'(a),
// the local model P ~ c (z - a) makes Im w vanish to leading order along
// theta_m = (2*pi*m - arg c) / 3.
inline std::array<double, 3> prong_angles(const Polynomial& p, int zero) {
    if (zero < 0 || zero >= p.degree())
        throw DimensionMismatch("zero index " + std::to_string(zero) + " out of range");
    const cplx c = p.derivative(p.roots()[zero]);
    std::array<double, 3> th{};
    for (int m = 0; m < 3; ++m)
        th[m] = (2.0 * std::numbers::pi * m - std::arg(c)) / 3.0;
    return th;
}

namespace detail {

inline Trajectory launch_prong(const Polynomial& p, int zero, double theta,
                               const TraceParams& params) {
    const cplx a = p.roots()[zero];
    const double r0 = 1e-3 * p.root_set().sep_eff();
    const cplx e = std::polar(1.0, theta);
    const cplx z0 = a + r0 * e;
    const cplx v = std::sqrt(p(z0));
    const int sign = ((cplx(1.0) / v) * std::conj(e)).real() >= 0.0 ? 1 : -1;
    Trajectory t = trace_trajectory(p, z0, sign, params);
    t.origin = zero;
    return t;
}

} // namespace detail

inline std::array<Trajectory, 3> separatrices(const Polynomial& p, int zero,
                                              const TraceParams& params = {}) {
    const auto th = prong_angles(p, zero);
    std::array<Trajectory, 3> out;
    for (int m = 0; m < 3; ++m) out[m] = detail::launch_prong(p, zero, th[m], params);
    return out;
}

struct TrajectoryStructure {
    struct Saddle {
        int zero_i = -1;
        int zero_j = -1;
        Trajectory path;
    };
    std::vector<std::array<Trajectory, 3>> separatrices; // indexed by zero
    std::vector<Saddle> saddles;
    bool saddle_free = false;
    // terminal directions of each zero's separatrices in launch-angle order;
    // present only for zeros whose three separatrices all escape
    std::map<int, std::array<int, 3>> zero_fan;
};

namespace detail {

struct HitResolution {
    bool is_saddle = false;
    int other_zero = -1;
    Trajectory witness;     // ball-hitting trace, for a confirmed saddle
    Trajectory replacement; // escaping trace, for a grazing pass
};

// A separatrix entered the exclusion ball of a zero. Bracket its launch angle
// and decide: if both sides of the bracket escape to the same sector the leaf
// merely grazes the ball and continues (replacement returned); if they escape
// to different sectors a genuine saddle separates the two families, and the
// transition angle is pinned by bisection to width 1e-8.
inline HitResolution resolve_zero_hit(const Polynomial& p, int zero, double theta,
                                      const Trajectory& first_hit,
                                      const TraceParams& params) {
    auto launch = [&](double th) { return launch_prong(p, zero, th, params); };

    double delta = 1e-3;
    const double delta_cap = 0.5;
    Trajectory lo, hi;
    while (true) {
        lo = launch(theta - delta);
        hi = launch(theta + delta);
        if (lo.terminus.kind == Terminus::Kind::Truncated ||
            hi.terminus.kind == Terminus::Kind::Truncated)
            throw AmbiguousStructure("bracket trace exhausted its w-length budget; "
                                     "raise max_w_length");
        if (lo.terminus.kind == Terminus::Kind::Direction &&
            hi.terminus.kind == Terminus::Kind::Direction)
            break;
        delta *= 2.0;
        if (delta > delta_cap)
            throw AmbiguousStructure("no escaping bracket around a zero-hitting separatrix");
    }

    HitResolution res;
    const int k_lo = lo.terminus.index;
    const int k_hi = hi.terminus.index;
    if (k_lo == k_hi) {
        res.is_saddle = false;
        res.replacement = hi;
        return res;
    }

    res.is_saddle = true;
    res.other_zero = first_hit.terminus.index;
    res.witness = first_hit;
    double tlo = theta - delta;
    double thi = theta + delta;
    while (thi - tlo > 1e-8) {
        const double tm = 0.5 * (tlo + thi);
        Trajectory t = launch(tm);
        if (t.terminus.kind == Terminus::Kind::Zero) {
            res.witness = t;
            res.other_zero = t.terminus.index;
            thi = tm; // converge onto the lower edge of the hit interval
        } else if (t.terminus.kind == Terminus::Kind::Direction) {
            if (t.terminus.index == k_lo)
                tlo = tm;
            else
                thi = tm;
        } else {
            throw AmbiguousStructure("bisection trace exhausted its w-length budget; "
                                     "raise max_w_length");
        }
    }
    return res;
}

} // namespace detail

// Trace all 3(n+1) separatrices, resolve every zero-hit into either a
// confirmed saddle or a grazing pass, and assemble the fan data.
inline TrajectoryStructure classify(const Polynomial& p, const TraceParams& params = {}) {
    const auto ctx = detail::resolve_params(p, params);
    const int m = p.num_directions();
    const int nz = p.degree();

    TrajectoryStructure ts;
    ts.separatrices.resize(nz);
    std::vector<TrajectoryStructure::Saddle> found;

    for (int i = 0; i < nz; ++i) {
        const auto th = prong_angles(p, i);
        auto seps = separatrices(p, i, params);
        std::array<int, 3> fan{-1, -1, -1};
        bool all_escape = true;
        for (int mm = 0; mm < 3; ++mm) {
            Trajectory& t = seps[mm];
            if (t.terminus.kind == Terminus::Kind::Truncated)
                throw AmbiguousStructure("separatrix exhausted its w-length budget; "
                                         "raise max_w_length");
            if (t.terminus.kind == Terminus::Kind::Zero) {
                auto res = detail::resolve_zero_hit(p, i, th[mm], t, params);
                if (res.is_saddle) {
                    found.push_back({i, res.other_zero, std::move(res.witness)});
                    all_escape = false;
                    continue;
                }
                t = std::move(res.replacement);
                t.origin = i;
            }
            auto [k, margin] = detail::sector_of(t.points.back(), m);
            if (margin < ctx.ang_tol)
                throw AmbiguousStructure(
                    "terminal direction within angular tolerance of a sector boundary");
            fan[mm] = k;
        }
        ts.separatrices[i] = std::move(seps);
        if (all_escape) ts.zero_fan[i] = fan;
    }

    std::set<std::pair<int, int>> seen;
    for (auto& s : found) {
        auto key = std::minmax(s.zero_i, s.zero_j);
        if (seen.insert(key).second) ts.saddles.push_back(std::move(s));
    }
    ts.saddle_free = ts.saddles.empty();
    return ts;
}

// Build the ideal triangulation whose triangles are the separatrix fans of a
// saddle-free structure; every tiling property is checked, not assumed.
inline IdealTriangulation triangulation_from_structure(int n, const TrajectoryStructure& ts) {
    if (!ts.saddle_free) throw NotSaddleFree("the differential has a saddle trajectory");
    const int m = n + 3;
    if (static_cast<int>(ts.zero_fan.size()) != n + 1)
        throw StructureInconsistent("fan data incomplete for a saddle-free structure");

    std::map<std::pair<int, int>, int> edge_count;
    std::vector<std::array<int, 3>> tris;
    for (const auto& [zero, fan] : ts.zero_fan) {
        (void)zero;
        std::array<int, 3> t = fan;
        std::sort(t.begin(), t.end());
        if (t[0] == t[1] || t[1] == t[2])
            throw StructureInconsistent("separatrix fan directions are not distinct");
        if (t[0] < 0 || t[2] >= m)
            throw StructureInconsistent("separatrix fan direction out of range");
        tris.push_back(t);
        ++edge_count[{t[0], t[1]}];
        ++edge_count[{t[1], t[2]}];
        ++edge_count[{t[0], t[2]}];
    }

    std::vector<Arc> arcs;
    int boundary_seen = 0;
    for (const auto& [e, cnt] : edge_count) {
        if (is_boundary_segment(e.first, e.second, m)) {
            if (cnt != 1)
                throw StructureInconsistent("boundary segment covered by more than one fan");
            ++boundary_seen;
        } else {
            if (cnt != 2)
                throw StructureInconsistent("internal arc not shared by exactly two fans");
            arcs.push_back({e.first, e.second});
        }
    }
    if (boundary_seen != m)
        throw StructureInconsistent("fan triangles do not cover the boundary polygon");

    auto T = IdealTriangulation::from_arcs(m, arcs);
    auto derived = T.triangles();
    std::sort(tris.begin(), tris.end());
    std::sort(derived.begin(), derived.end());
    if (tris != derived)
        throw StructureInconsistent("fan triangles disagree with the arc-derived tiling");
    return T;
}

inline IdealTriangulation wkb_triangulation(const Polynomial& p,
                                            const TraceParams& params = {}) {
    const auto ts = classify(p, params);
    return triangulation_from_structure(p.n(), ts);
}

// Cheap necessary-condition proxy for saddle proximity: a saddle between two
// zeros requires a real period, so min over pairs of |Im period| / |period|
// vanishing flags a wall candidate. By convention +inf when n = 0.
inline double wall_proximity(const Polynomial& p) {
    const int nz = p.degree();
    if (nz < 2) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nz; ++i) {
        for (int j = i + 1; j < nz; ++j) {
            double ratio = 0.0;
            try {
                const Period per = period(p, i, j);
                const double ab = std::abs(per.value);
                ratio = ab > 0.0 ? std::abs(per.value.imag()) / ab : 0.0;
            } catch (const Error&) {
                ratio = 0.0; // an untrackable period is itself a wall candidate
            }
            best = std::min(best, ratio);
        }
    }
    return best;
}

} // namespace stokescluster
