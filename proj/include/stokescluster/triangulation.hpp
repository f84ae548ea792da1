#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "errors.hpp"

namespace stokescluster {

using Arc = std::array<int, 2>; // unordered pair stored with first < second

/// True if {i, j} is a boundary segment of the m-gon (cyclically adjacent).
inline bool is_boundary_segment(int i, int j, int m) {
    int d = std::abs(i - j);
    return d == 1 || d == m - 1;
}

/// True if two chords of a convex polygon cross in the interior.
/// Chords sharing an endpoint do not cross.
inline bool chords_cross(Arc e, Arc f) {
    if (e[0] == f[0] || e[0] == f[1] || e[1] == f[0] || e[1] == f[1]) return false;
    bool c_in = e[0] < f[0] && f[0] < e[1];
    bool d_in = e[0] < f[1] && f[1] < e[1];
    return c_in != d_in;
}

/// Maximal set of pairwise non-crossing chords of the m-gon, with marked
/// points labeled 0..m-1 counterclockwise.  Construction validates all
/// combinatorial invariants and derives the triangle list (triples sorted
/// ascending, which is also their counterclockwise orientation).
class IdealTriangulation {
public:
    static IdealTriangulation from_arcs(int m, std::vector<Arc> arcs) {
        if (m < 3) throw DimensionMismatch("polygon needs at least 3 marked points");
        for (auto& a : arcs) {
            if (a[0] > a[1]) std::swap(a[0], a[1]);
            if (a[0] < 0 || a[1] >= m)
                throw DimensionMismatch("arc label out of range for m = " + std::to_string(m));
            if (a[0] == a[1] || is_boundary_segment(a[0], a[1], m))
                throw StructureInconsistent("arc {" + std::to_string(a[0]) + "," +
                                            std::to_string(a[1]) +
                                            "} is degenerate or a boundary segment");
        }
        std::sort(arcs.begin(), arcs.end());
        if (std::adjacent_find(arcs.begin(), arcs.end()) != arcs.end())
            throw StructureInconsistent("duplicate arc in triangulation");
        if (static_cast<int>(arcs.size()) != m - 3)
            throw StructureInconsistent("expected " + std::to_string(m - 3) + " arcs, got " +
                                        std::to_string(arcs.size()));
        for (std::size_t i = 0; i < arcs.size(); ++i)
            for (std::size_t j = i + 1; j < arcs.size(); ++j)
                if (chords_cross(arcs[i], arcs[j]))
                    throw StructureInconsistent("arcs cross in the interior");

        IdealTriangulation T;
        T.m_ = m;
        T.arcs_ = std::move(arcs);
        T.derive_triangles();
        return T;
    }

    int m() const { return m_; }
    int num_arcs() const { return static_cast<int>(arcs_.size()); }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

    bool has_arc(Arc a) const {
        if (a[0] > a[1]) std::swap(a[0], a[1]);
        return std::binary_search(arcs_.begin(), arcs_.end(), a);
    }

    /// Index of an arc in the sorted arc list (coordinate slot of X_j).
    int arc_index(Arc a) const {
        if (a[0] > a[1]) std::swap(a[0], a[1]);
        auto it = std::lower_bound(arcs_.begin(), arcs_.end(), a);
        if (it == arcs_.end() || *it != a)
            throw ArcNotInTriangulation("arc {" + std::to_string(a[0]) + "," +
                                        std::to_string(a[1]) + "} not in triangulation");
        return static_cast<int>(it - arcs_.begin());
    }

    /// The two triangles adjacent to an arc, as their apex labels.
    std::array<int, 2> apexes(Arc a) const {
        if (a[0] > a[1]) std::swap(a[0], a[1]);
        arc_index(a); // validates membership
        std::array<int, 2> ap{-1, -1};
        int found = 0;
        for (const auto& t : triangles_) {
            int apex = -1, hits = 0;
            for (int v : t) {
                if (v == a[0] || v == a[1]) ++hits;
                else apex = v;
            }
            if (hits == 2) {
                if (found < 2) ap[found] = apex;
                ++found;
            }
        }
        if (found != 2)
            throw StructureInconsistent("arc is not shared by exactly two triangles");
        return ap;
    }

    /// Vertices p1..p4 of the quadrilateral around arc j, labeled
    /// counterclockwise with j = {p1, p3} and p1 the smaller endpoint.
    std::array<int, 4> quadrilateral(Arc j) const {
        if (j[0] > j[1]) std::swap(j[0], j[1]);
        auto ap = apexes(j);
        int p1 = j[0], p3 = j[1];
        // p2 lies counterclockwise strictly between p1 and p3
        int p2 = (p1 < ap[0] && ap[0] < p3) ? ap[0] : ap[1];
        int p4 = (p2 == ap[0]) ? ap[1] : ap[0];
        return {p1, p2, p3, p4};
    }

    bool operator==(const IdealTriangulation& o) const {
        return m_ == o.m_ && arcs_ == o.arcs_;
    }
    bool operator<(const IdealTriangulation& o) const {
        if (m_ != o.m_) return m_ < o.m_;
        return arcs_ < o.arcs_;
    }

private:
    // Triangles = triples pairwise joined by edges (arcs or boundary
    // segments).  In a triangulated convex polygon every 3-clique of the
    // edge graph bounds a face, so this derivation is exact.
    void derive_triangles() {
        std::vector<std::vector<bool>> adj(m_, std::vector<bool>(m_, false));
        auto link = [&](int i, int j) { adj[i][j] = adj[j][i] = true; };
        for (int i = 0; i < m_; ++i) link(i, (i + 1) % m_);
        for (const auto& a : arcs_) link(a[0], a[1]);
        triangles_.clear();
        for (int a = 0; a < m_; ++a)
            for (int b = a + 1; b < m_; ++b) {
                if (!adj[a][b]) continue;
                for (int c = b + 1; c < m_; ++c)
                    if (adj[b][c] && adj[a][c]) triangles_.push_back({a, b, c});
            }
        if (static_cast<int>(triangles_.size()) != m_ - 2)
            throw StructureInconsistent("triangles fail to tile the polygon");
    }

    int m_ = 3;
    std::vector<Arc> arcs_;
    std::vector<std::array<int, 3>> triangles_;
};

/// Replace arc k by the opposite diagonal of its quadrilateral.
inline IdealTriangulation flip(const IdealTriangulation& T, Arc k) {
    if (k[0] > k[1]) std::swap(k[0], k[1]);
    auto quad = T.quadrilateral(k); // validates membership
    Arc repl{quad[1], quad[3]};
    if (repl[0] > repl[1]) std::swap(repl[0], repl[1]);
    std::vector<Arc> arcs;
    arcs.reserve(T.num_arcs());
    for (const auto& a : T.arcs())
        if (a != k) arcs.push_back(a);
    arcs.push_back(repl);
    return IdealTriangulation::from_arcs(T.m(), std::move(arcs));
}

namespace detail {

// All triangulations of the polygon on contiguous labels lo..hi, with the
// chord/boundary {lo, hi} as base edge.  Chords of sub-polygons are chords
// of the original polygon, so only range adjacency needs checking.
inline std::vector<std::vector<Arc>> triangulate_range(int lo, int hi) {
    std::vector<std::vector<Arc>> out;
    if (hi - lo < 2) {
        out.emplace_back();
        return out;
    }
    for (int k = lo + 1; k < hi; ++k) {
        auto left = triangulate_range(lo, k);
        auto right = triangulate_range(k, hi);
        for (const auto& L : left)
            for (const auto& R : right) {
                std::vector<Arc> arcs;
                arcs.reserve(L.size() + R.size() + 2);
                if (k - lo >= 2) arcs.push_back({lo, k});
                if (hi - k >= 2) arcs.push_back({k, hi});
                arcs.insert(arcs.end(), L.begin(), L.end());
                arcs.insert(arcs.end(), R.begin(), R.end());
                out.push_back(std::move(arcs));
            }
    }
    return out;
}

} // namespace detail

/// Exhaustive enumeration of the C_{m-2} triangulations, sorted by arc list.
inline std::vector<IdealTriangulation> all_triangulations(int m) {
    if (m < 3 || m > 12)
        throw SizeLimit("triangulation enumeration supports 3 <= m <= 12, got " +
                        std::to_string(m));
    auto raw = detail::triangulate_range(0, m - 1);
    std::vector<IdealTriangulation> out;
    out.reserve(raw.size());
    for (auto& arcs : raw) out.push_back(IdealTriangulation::from_arcs(m, std::move(arcs)));
    std::sort(out.begin(), out.end());
    return out;
}

/// Flip graph on all triangulations of the m-gon (associahedron 1-skeleton).
struct ExchangeGraph {
    int m = 3;
    std::vector<IdealTriangulation> nodes;
    std::vector<std::array<int, 2>> edges;  // node index pairs, i < j, sorted
    std::vector<std::vector<int>> adjacency;

    bool is_connected() const {
        if (nodes.empty()) return true;
        std::vector<bool> seen(nodes.size(), false);
        std::queue<int> q;
        q.push(0);
        seen[0] = true;
        std::size_t count = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adjacency[v])
                if (!seen[w]) {
                    seen[w] = true;
                    ++count;
                    q.push(w);
                }
        }
        return count == nodes.size();
    }

    /// Common vertex degree, or -1 if the graph is not regular.
    int regularity() const {
        if (adjacency.empty()) return 0;
        std::size_t d = adjacency[0].size();
        for (const auto& nb : adjacency)
            if (nb.size() != d) return -1;
        return static_cast<int>(d);
    }
};

inline ExchangeGraph exchange_graph(int m) {
    ExchangeGraph g;
    g.m = m;
    g.nodes = all_triangulations(m);
    std::map<std::vector<Arc>, int> index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i].arcs()] = static_cast<int>(i);
    g.adjacency.assign(g.nodes.size(), {});
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (const auto& a : g.nodes[i].arcs()) {
            int j = index.at(flip(g.nodes[i], a).arcs());
            g.adjacency[i].push_back(j);
            if (static_cast<int>(i) < j) g.edges.push_back({static_cast<int>(i), j});
        }
    std::sort(g.edges.begin(), g.edges.end());
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    return g;
}

inline std::string arcs_label(const std::vector<Arc>& arcs) {
    std::string s;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(arcs[i][0]) + "-" + std::to_string(arcs[i][1]);
    }
    return s.empty() ? "(none)" : s;
}

inline std::string to_dot(const ExchangeGraph& g) {
    std::string s = "graph exchange {\n  layout=neato;\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        s += "  t" + std::to_string(i) + " [label=\"" + arcs_label(g.nodes[i].arcs()) + "\"];\n";
    for (const auto& e : g.edges)
        s += "  t" + std::to_string(e[0]) + " -- t" + std::to_string(e[1]) + ";\n";
    s += "}\n";
    return s;
}

} // namespace stokescluster
