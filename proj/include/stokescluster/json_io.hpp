#pragma once

// JSON serialization for every artifact the CLI emits or consumes.  Complex
// numbers serialize as [re, im]; projective points as [u_re, u_im, v_re, v_im].

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stokescluster/configuration.hpp"
#include "stokescluster/errors.hpp"
#include "stokescluster/foliation.hpp"
#include "stokescluster/map.hpp"
#include "stokescluster/polynomial.hpp"
#include "stokescluster/stokes.hpp"
#include "stokescluster/triangulation.hpp"

namespace stokescluster {

using json = nlohmann::json;

inline json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw DimensionMismatch("complex numbers serialize as [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

// {"n": int, "a": [[re, im], ...]}
inline json to_json(const Polynomial& p) {
    json a = json::array();
    for (const auto& c : p.coefficients()) a.push_back(to_json(c));
    return json{{"n", p.n()}, {"a", std::move(a)}};
}

inline Polynomial polynomial_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("a"))
        throw DimensionMismatch("polynomial JSON needs fields \"n\" and \"a\"");
    if (!j["n"].is_number_integer())
        throw DimensionMismatch("polynomial field \"n\" must be an integer");
    const int n = j["n"].get<int>();
    if (!j["a"].is_array())
        throw DimensionMismatch("polynomial field \"a\" must be an array");
    std::vector<cplx> a;
    a.reserve(j["a"].size());
    for (const auto& c : j["a"]) a.push_back(cplx_from_json(c));
    return Polynomial::from_coefficients(n, std::move(a));
}

inline json to_json(const RootSet& rs) {
    json roots = json::array();
    for (const auto& r : rs.roots) roots.push_back(to_json(r));
    return json{{"roots", std::move(roots)}, {"sep", rs.sep}};
}

inline json to_json(const Period& per) {
    json path = json::array();
    for (const auto& z : per.path) path.push_back(to_json(z));
    return json{{"from", per.from},
                {"to", per.to},
                {"value", to_json(per.value)},
                {"path", std::move(path)}};
}

inline json to_json(const ProjPoint& p) {
    return json::array({p.u.real(), p.u.imag(), p.v.real(), p.v.imag()});
}

// {"w": [[u_re, u_im, v_re, v_im], ...], "method": "...", "normalized": bool}
inline json to_json(const AsymptoticTuple& t) {
    json w = json::array();
    for (const auto& p : t.w) w.push_back(to_json(p));
    return json{{"w", std::move(w)},
                {"method",
                 t.method == AsymptoticTuple::Method::Wronskian ? "wronskian" : "projective"},
                {"normalized", t.normalized}};
}

// sorted arc list [[i, j], ...]
inline json to_json(const IdealTriangulation& T) {
    std::vector<Arc> arcs = T.arcs();
    std::sort(arcs.begin(), arcs.end());
    json a = json::array();
    for (const auto& arc : arcs) a.push_back(json::array({arc[0], arc[1]}));
    return a;
}

// {"arcs": [[i, j], ...], "X": [[re, im], ...]}, entries aligned
inline json to_json(const ClusterChart& ch) {
    json arcs = json::array();
    json X = json::array();
    for (std::size_t j = 0; j < ch.X.size(); ++j) {
        const Arc& a = ch.triangulation.arcs()[j];
        arcs.push_back(json::array({a[0], a[1]}));
        X.push_back(to_json(ch.X[j]));
    }
    return json{{"arcs", std::move(arcs)}, {"X", std::move(X)}};
}

inline json to_json(const Terminus& t) {
    const char* kind = t.kind == Terminus::Kind::Direction ? "direction"
                       : t.kind == Terminus::Kind::Zero    ? "zero"
                                                           : "truncated";
    return json{{"kind", kind}, {"index", t.index}};
}

inline json to_json(const Trajectory& tr) {
    json pts = json::array();
    for (const auto& z : tr.points) pts.push_back(to_json(z));
    json j{{"terminus", to_json(tr.terminus)},
           {"w_length", tr.w_length},
           {"im_drift", tr.im_drift},
           {"points", std::move(pts)}};
    j["origin"] = tr.origin ? json(*tr.origin) : json(nullptr);
    return j;
}

inline json to_json(const TrajectoryStructure& ts) {
    json seps = json::array();
    for (const auto& triple : ts.separatrices) {
        json t = json::array();
        for (const auto& tr : triple) t.push_back(to_json(tr));
        seps.push_back(std::move(t));
    }
    json saddles = json::array();
    for (const auto& s : ts.saddles)
        saddles.push_back(json{{"zeros", json::array({s.zero_i, s.zero_j})},
                               {"path", to_json(s.path)}});
    json fans = json::object();
    for (const auto& [zero, fan] : ts.zero_fan)
        fans[std::to_string(zero)] = json::array({fan[0], fan[1], fan[2]});
    return json{{"saddle_free", ts.saddle_free},
                {"separatrices", std::move(seps)},
                {"saddles", std::move(saddles)},
                {"zero_fan", std::move(fans)}};
}

inline json to_json(const MapReport& r) {
    json j;
    j["polynomial"] = to_json(r.polynomial);
    j["asymptotic_values"] = to_json(r.tuple);
    j["wkb_triangulation"] = r.triangulation ? to_json(*r.triangulation) : json(nullptr);
    j["chart"] = r.chart ? to_json(*r.chart) : json(nullptr);
    j["diagnostics"] =
        json{{"wall_proximity", r.wall_prox},
             {"jacobian_condition", r.jacobian_condition ? json(*r.jacobian_condition)
                                                         : json(nullptr)}};
    j["failure"] = r.failure.empty() ? json(nullptr) : json(r.failure);
    return j;
}

} // namespace stokescluster
