#pragma once

// Static SVG 1.1 rendering of a trajectory structure: zeros as crosses, the
// marked Stokes directions as ticks on the escape circle, separatrices as
// solid curves, saddle connections highlighted, and (when available) the arcs
// of the WKB triangulation as dotted chords between marked directions.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "stokescluster/foliation.hpp"
#include "stokescluster/polynomial.hpp"
#include "stokescluster/triangulation.hpp"

namespace stokescluster {

namespace detail {

// fixed two-decimal pixel coordinates keep the output byte-deterministic
inline std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct SvgFrame {
    double scale;   // pixels per world unit
    double half;    // half the canvas, pixels
    double radius;  // escape radius, world units

    double x(cplx z) const { return half + scale * z.real(); }
    double y(cplx z) const { return half - scale * z.imag(); }

    std::string polyline(const std::vector<cplx>& pts, const char* style) const {
        std::string s = "  <polyline fill=\"none\" " + std::string(style) + " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) s += ' ';
            s += px(x(pts[i])) + ',' + px(y(pts[i]));
        }
        s += "\"/>\n";
        return s;
    }
};

} // namespace detail

inline std::string svg_plot(const Polynomial& p, const TrajectoryStructure& ts,
                            const std::optional<IdealTriangulation>& T = std::nullopt) {
    const double R = p.escape_radius();
    const double canvas = 800.0;
    const detail::SvgFrame fr{0.45 * canvas / R, 0.5 * canvas, R};
    const int m = p.num_directions();

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
         "height=\"800\" viewBox=\"0 0 800 800\">\n";
    s += "  <rect width=\"800\" height=\"800\" fill=\"white\"/>\n";

    // escape circle
    s += "  <circle cx=\"" + detail::px(fr.half) + "\" cy=\"" + detail::px(fr.half) +
         "\" r=\"" + detail::px(fr.scale * R) +
         "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";

    // marked directions: ticks across the circle at angles 2 pi k / m
    for (int k = 0; k < m; ++k) {
        const double th = 2.0 * std::numbers::pi * k / m;
        const cplx dir = std::polar(1.0, th);
        const cplx a = 0.97 * R * dir, b = 1.03 * R * dir;
        s += "  <line x1=\"" + detail::px(fr.x(a)) + "\" y1=\"" + detail::px(fr.y(a)) +
             "\" x2=\"" + detail::px(fr.x(b)) + "\" y2=\"" + detail::px(fr.y(b)) +
             "\" stroke=\"#444444\" stroke-width=\"2\"/>\n";
        const cplx lab = 1.10 * R * dir;
        s += "  <text x=\"" + detail::px(fr.x(lab)) + "\" y=\"" + detail::px(fr.y(lab)) +
             "\" font-size=\"18\" text-anchor=\"middle\" fill=\"#444444\">" +
             std::to_string(k) + "</text>\n";
    }

    // WKB triangulation arcs: dotted chords between marked directions
    if (T) {
        for (const auto& arc : T->arcs()) {
            const cplx a = R * std::polar(1.0, 2.0 * std::numbers::pi * arc[0] / m);
            const cplx b = R * std::polar(1.0, 2.0 * std::numbers::pi * arc[1] / m);
            s += "  <line x1=\"" + detail::px(fr.x(a)) + "\" y1=\"" + detail::px(fr.y(a)) +
                 "\" x2=\"" + detail::px(fr.x(b)) + "\" y2=\"" + detail::px(fr.y(b)) +
                 "\" stroke=\"#1f77b4\" stroke-width=\"1.5\" stroke-dasharray=\"2,6\"/>\n";
        }
    }

    // separatrices: solid black curves
    for (const auto& triple : ts.separatrices)
        for (const auto& tr : triple)
            s += fr.polyline(tr.points, "stroke=\"black\" stroke-width=\"1\"");

    // saddle connections: solid red, drawn on top
    for (const auto& sad : ts.saddles)
        s += fr.polyline(sad.path.points, "stroke=\"#d62728\" stroke-width=\"2\"");

    // zeros as crosses
    for (const auto& z : p.roots()) {
        const double cx = fr.x(z), cy = fr.y(z), d = 6.0;
        s += "  <line x1=\"" + detail::px(cx - d) + "\" y1=\"" + detail::px(cy - d) +
             "\" x2=\"" + detail::px(cx + d) + "\" y2=\"" + detail::px(cy + d) +
             "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        s += "  <line x1=\"" + detail::px(cx - d) + "\" y1=\"" + detail::px(cy + d) +
             "\" x2=\"" + detail::px(cx + d) + "\" y2=\"" + detail::px(cy - d) +
             "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }

    s += "</svg>\n";
    return s;
}

} // namespace stokescluster
