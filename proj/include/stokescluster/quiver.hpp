#pragma once

#include <array>
#include <cstdlib>
#include <string>
#include <vector>

#include "errors.hpp"
#include "triangulation.hpp"

namespace stokescluster {

/// Quiver on the arcs of a triangulation: eps[i][j] = (#arrows i->j) -
/// (#arrows j->i), antisymmetric with zero diagonal.
struct Quiver {
    std::vector<std::vector<int>> eps;

    int size() const { return static_cast<int>(eps.size()); }

    bool operator==(const Quiver& o) const { return eps == o.eps; }
};

/// Arrow rule: within each triangle, consecutive edges rotating clockwise
/// about their shared vertex are joined by an arrow.  For a triangle with
/// vertices a < b < c (counterclockwise on the polygon) this gives the
/// 3-cycle {a,b} -> {b,c} -> {a,c} -> {a,b}; only pairs where both edges
/// are arcs contribute.
inline Quiver quiver_of(const IdealTriangulation& T) {
    const int N = T.num_arcs();
    Quiver Q;
    Q.eps.assign(N, std::vector<int>(N, 0));
    auto idx = [&](int u, int v) -> int {
        Arc a{u, v};
        if (a[0] > a[1]) std::swap(a[0], a[1]);
        return T.has_arc(a) ? T.arc_index(a) : -1;
    };
    auto arrow = [&](int i, int j) {
        if (i >= 0 && j >= 0) {
            Q.eps[i][j] += 1;
            Q.eps[j][i] -= 1;
        }
    };
    for (const auto& t : T.triangles()) {
        int ab = idx(t[0], t[1]), bc = idx(t[1], t[2]), ac = idx(t[0], t[2]);
        arrow(ab, bc);
        arrow(bc, ac);
        arrow(ac, ab);
    }
    return Q;
}

/// 3-cycles of the potential: one per internal triangle (all three edges
/// arcs), recorded as arc indices in arrow order.
struct PotentialCycles {
    std::vector<std::array<int, 3>> cycles;
};

inline PotentialCycles potential_of(const IdealTriangulation& T) {
    PotentialCycles W;
    for (const auto& t : T.triangles()) {
        Arc ab{t[0], t[1]}, bc{t[1], t[2]}, ac{t[0], t[2]};
        if (T.has_arc(ab) && T.has_arc(bc) && T.has_arc(ac))
            W.cycles.push_back({T.arc_index(ab), T.arc_index(bc), T.arc_index(ac)});
    }
    return W;
}

/// Matrix mutation at vertex k:
///   eps'_ij = -eps_ij                                  if k in {i, j}
///   eps'_ij = eps_ij + sgn(eps_ik) * max(0, eps_ik*eps_kj)   otherwise.
/// Involutive: mutating twice at k restores the matrix.
inline Quiver mutate_quiver(const Quiver& Q, int k) {
    const int N = Q.size();
    if (k < 0 || k >= N) throw DimensionMismatch("mutation vertex out of range");
    Quiver R;
    R.eps.assign(N, std::vector<int>(N, 0));
    auto sgn = [](int x) { return (x > 0) - (x < 0); };
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == k || j == k)
                R.eps[i][j] = -Q.eps[i][j];
            else
                R.eps[i][j] =
                    Q.eps[i][j] + sgn(Q.eps[i][k]) * std::max(0, Q.eps[i][k] * Q.eps[k][j]);
        }
    return R;
}

} // namespace stokescluster
