#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "errors.hpp"
#include "projective.hpp"
#include "quiver.hpp"
#include "triangulation.hpp"

namespace stokescluster {

/// Configuration of m points on CP^1 (a representative of a PGL2 orbit),
/// indexed by the marked points 0..m-1 of the polygon.
struct Configuration {
    std::vector<ProjPoint> points;

    int size() const { return static_cast<int>(points.size()); }
};

inline Configuration apply_mobius(const Mobius& M, const Configuration& c) {
    Configuration out;
    out.points.reserve(c.points.size());
    for (const auto& p : c.points) out.points.push_back(M.apply(p));
    return out;
}

/// Cross-ratio coordinate of arc j: vertices p1..p4 of its quadrilateral
/// counterclockwise with j = {p1, p3}, X_j = (z1-z2)(z3-z4)/((z2-z3)(z1-z4)).
inline cplx cross_ratio(const Configuration& c, const IdealTriangulation& T, Arc j) {
    if (c.size() != T.m())
        throw DimensionMismatch("configuration has " + std::to_string(c.size()) +
                                " points, triangulation expects " + std::to_string(T.m()));
    auto q = T.quadrilateral(j);
    return cross_ratio_points(c.points[q[0]], c.points[q[1]], c.points[q[2]], c.points[q[3]]);
}

/// Coordinates of a configuration in the torus chart of a triangulation.
/// X[i] corresponds to T.arcs()[i].
struct ClusterChart {
    IdealTriangulation triangulation;
    std::vector<cplx> X;
};

inline ClusterChart chart_coords(const Configuration& c, const IdealTriangulation& T) {
    ClusterChart ch{T, {}};
    ch.X.reserve(T.num_arcs());
    for (const auto& a : T.arcs()) {
        try {
            ch.X.push_back(cross_ratio(c, T, a));
        } catch (const NonGeneric&) {
            throw NonGeneric("configuration is not generic for arc {" + std::to_string(a[0]) +
                             "," + std::to_string(a[1]) + "}");
        }
    }
    return ch;
}

/// Rebuild a configuration from chart coordinates: the first triangle gets
/// (0, 1, inf) in label order, then vertices propagate across shared arcs so
/// every arc realizes its prescribed cross ratio.  Inverse of chart_coords
/// up to PGL2.
inline Configuration reconstruct(const IdealTriangulation& T, const std::vector<cplx>& X) {
    if (static_cast<int>(X.size()) != T.num_arcs())
        throw DimensionMismatch("expected " + std::to_string(T.num_arcs()) +
                                " chart coordinates, got " + std::to_string(X.size()));
    for (const auto& x : X)
        if (!(std::abs(x) > 0.0) || !std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw NonGeneric("chart coordinates must be nonzero finite complex numbers");

    const int m = T.m();
    const auto& tris = T.triangles();
    Configuration c;
    c.points.assign(m, ProjPoint());
    std::vector<bool> have_point(m, false);

    // dual graph: arc index -> the two adjacent triangle indices
    std::vector<std::vector<int>> tri_of_arc(T.num_arcs());
    for (std::size_t ti = 0; ti < tris.size(); ++ti) {
        const auto& t = tris[ti];
        for (auto e : {Arc{t[0], t[1]}, Arc{t[1], t[2]}, Arc{t[0], t[2]}})
            if (T.has_arc(e)) tri_of_arc[T.arc_index(e)].push_back(static_cast<int>(ti));
    }

    auto place = [&](int label, ProjPoint p) {
        c.points[label] = p;
        have_point[label] = true;
    };
    place(tris[0][0], ProjPoint::finite(cplx(0.0)));
    place(tris[0][1], ProjPoint::finite(cplx(1.0)));
    place(tris[0][2], ProjPoint::infinity());

    std::vector<bool> done(tris.size(), false);
    done[0] = true;
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
        int ti = q.front();
        q.pop();
        const auto& t = tris[ti];
        for (auto e : {Arc{t[0], t[1]}, Arc{t[1], t[2]}, Arc{t[0], t[2]}}) {
            if (!T.has_arc(e)) continue;
            int ai = T.arc_index(e);
            for (int tj : tri_of_arc[ai]) {
                if (done[tj]) continue;
                auto quad = T.quadrilateral(e); // {p1, p2, p3, p4}
                int unknown = -1;
                for (int v : tris[tj])
                    if (!have_point[v]) unknown = v;
                if (unknown < 0) { // all vertices already placed elsewhere
                    done[tj] = true;
                    q.push(tj);
                    continue;
                }
                const ProjPoint &z1 = c.points[quad[0]], &z3 = c.points[quad[2]];
                ProjPoint fresh;
                if (unknown == quad[3]) {
                    // solve X = <12><34> / (<23><14>) for p4, linear in (u4, v4)
                    const ProjPoint& z2 = c.points[quad[1]];
                    cplx lam = X[ai] * proj_det(z2, z3);
                    cplx mu = proj_det(z1, z2);
                    fresh = ProjPoint(lam * z1.u - mu * z3.u, lam * z1.v - mu * z3.v);
                } else {
                    // unknown is p2; same solve after the half-turn relabel
                    // (p1,p2,p3,p4) -> (p3,p4,p1,p2), under which X is invariant
                    const ProjPoint& z4 = c.points[quad[3]];
                    cplx lam = X[ai] * proj_det(z4, z1);
                    cplx mu = proj_det(z3, z4);
                    fresh = ProjPoint(lam * z3.u - mu * z1.u, lam * z3.v - mu * z1.v);
                }
                place(unknown, fresh);
                done[tj] = true;
                q.push(tj);
            }
        }
    }
    return c;
}

inline Configuration reconstruct(const ClusterChart& ch) {
    return reconstruct(ch.triangulation, ch.X);
}

/// Chart transition under a flip at arc k: X'_k = 1/X_k and for j != k
/// X'_j = X_j (1 + X_k^{-sgn(eps_jk)})^{-eps_jk}.  The chart's triangulation
/// is flipped; surviving arcs keep their coordinates' identity.
inline ClusterChart mutate_coords(const ClusterChart& ch, Arc k) {
    const auto& T = ch.triangulation;
    if (k[0] > k[1]) std::swap(k[0], k[1]);
    const int ki = T.arc_index(k);
    const cplx Xk = ch.X[ki];
    if (std::abs(Xk + 1.0) < 1e-12)
        throw TransitionPole("chart transition has a pole at X_k = -1");

    Quiver Q = quiver_of(T);
    IdealTriangulation T2 = flip(T, k);
    auto quad = T.quadrilateral(k);
    Arc newarc{std::min(quad[1], quad[3]), std::max(quad[1], quad[3])};

    ClusterChart out{T2, std::vector<cplx>(T2.num_arcs())};
    for (int j2 = 0; j2 < T2.num_arcs(); ++j2) {
        Arc a = T2.arcs()[j2];
        if (a == newarc) {
            out.X[j2] = 1.0 / Xk;
            continue;
        }
        int j = T.arc_index(a);
        int e = Q.eps[j][ki];
        cplx val = ch.X[j];
        if (e > 0) {
            cplx f = 1.0 + 1.0 / Xk;
            for (int r = 0; r < e; ++r) val /= f;
        } else if (e < 0) {
            cplx f = 1.0 + Xk;
            for (int r = 0; r < -e; ++r) val *= f;
        }
        out.X[j2] = val;
    }
    return out;
}

/// Generic with respect to T: every edge of T (arcs and boundary segments)
/// joins distinct points of CP^1.
inline bool is_generic(const Configuration& c, const IdealTriangulation& T,
                       double tol = 1e-12) {
    if (c.size() != T.m()) throw DimensionMismatch("configuration size != polygon size");
    const int m = T.m();
    for (int i = 0; i < m; ++i)
        if (chordal_dist(c.points[i], c.points[(i + 1) % m]) <= tol) return false;
    for (const auto& a : T.arcs())
        if (chordal_dist(c.points[a[0]], c.points[a[1]]) <= tol) return false;
    return true;
}

/// Constructive search for a triangulation making c generic.  Succeeds iff
/// (1) cyclically adjacent points are distinct and (2) at least three
/// distinct values occur; otherwise returns nullopt.
inline std::optional<IdealTriangulation> find_generic_triangulation(const Configuration& c,
                                                                    double tol = 1e-12) {
    const int m = c.size();
    if (m < 3) throw DimensionMismatch("configuration needs at least 3 points");
    auto distinct = [&](int i, int j) { return chordal_dist(c.points[i], c.points[j]) > tol; };
    for (int i = 0; i < m; ++i)
        if (!distinct(i, (i + 1) % m)) return std::nullopt;
    auto count_distinct = [&](const std::vector<int>& labels) {
        std::vector<int> reps;
        for (int i : labels) {
            bool fresh = true;
            for (int r : reps)
                if (!distinct(i, r)) { fresh = false; break; }
            if (fresh) reps.push_back(i);
        }
        return static_cast<int>(reps.size());
    };
    std::vector<int> live(m);
    std::iota(live.begin(), live.end(), 0);
    if (count_distinct(live) < 3) return std::nullopt;

    // Ear-cut recursion: find a vertex whose neighbors carry distinct values.
    // If removing it keeps >= 3 distinct values, cut the ear and continue;
    // otherwise the remaining values are exactly two, both distinct from the
    // vertex's own value, and the fan from that vertex finishes the job.
    std::vector<Arc> arcs;
    while (static_cast<int>(live.size()) > 3) {
        const int L = static_cast<int>(live.size());
        int chosen = -1;
        for (int k = 0; k < L; ++k)
            if (distinct(live[(k + L - 1) % L], live[(k + 1) % L])) { chosen = k; break; }
        if (chosen < 0)
            throw StructureInconsistent("ear search failed despite genericity conditions");
        std::vector<int> rest;
        rest.reserve(L - 1);
        for (int k = 0; k < L; ++k)
            if (k != chosen) rest.push_back(live[k]);
        int prev = live[(chosen + L - 1) % L], next = live[(chosen + 1) % L];
        if (count_distinct(rest) >= 3) {
            arcs.push_back({std::min(prev, next), std::max(prev, next)});
            live.erase(live.begin() + chosen);
        } else {
            int hub = live[chosen];
            for (int k = 0; k < L; ++k) {
                int v = live[k];
                if (v == hub || v == prev || v == next) continue;
                arcs.push_back({std::min(hub, v), std::max(hub, v)});
            }
            break; // the fan triangulates the remaining polygon completely
        }
    }
    auto T = IdealTriangulation::from_arcs(m, std::move(arcs));
    if (!is_generic(c, T, tol))
        throw StructureInconsistent("constructed triangulation is unexpectedly non-generic");
    return T;
}

/// Canonical PGL2-orbit representative: the least k with points k, k+1, k+2
/// (mod m) pairwise distinct is mapped to (0, 1, inf).
inline Configuration normalize_points(const Configuration& c, double tol = 1e-12) {
    const int m = c.size();
    if (m < 3) throw DimensionMismatch("need at least 3 points to normalize");
    for (int k = 0; k < m; ++k) {
        const ProjPoint &p = c.points[k % m], &q = c.points[(k + 1) % m],
                        &r = c.points[(k + 2) % m];
        if (chordal_dist(p, q) > tol && chordal_dist(q, r) > tol && chordal_dist(p, r) > tol)
            return apply_mobius(mobius_to_standard(p, q, r), c);
    }
    throw GenericityViolation("no three consecutive points are pairwise distinct");
}

} // namespace stokescluster
