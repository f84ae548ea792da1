#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "errors.hpp"

namespace stokescluster {

using cplx = std::complex<double>;

/// Point of CP^1 in homogeneous coordinates (u : v), kept normalized so that
/// max(|u|, |v|) = 1.  v = 0 is the point at infinity.
struct ProjPoint {
    cplx u{0.0, 0.0};
    cplx v{1.0, 0.0};

    ProjPoint() = default;
    ProjPoint(cplx uu, cplx vv) : u(uu), v(vv) { normalize(); }

    static ProjPoint finite(cplx z) { return ProjPoint(z, cplx(1.0)); }
    static ProjPoint infinity() { return ProjPoint(cplx(1.0), cplx(0.0)); }

    bool is_infinite(double tol = 1e-14) const { return std::abs(v) <= tol; }

    /// Affine value u/v; +inf maps to a huge complex, callers should test
    /// is_infinite() first when that matters.
    cplx affine() const {
        if (std::abs(v) == 0.0)
            return cplx(std::numeric_limits<double>::infinity(), 0.0);
        return u / v;
    }

    void normalize() {
        double m = std::max(std::abs(u), std::abs(v));
        if (m == 0.0)
            throw NonGeneric("projective point (0:0) is not a point of CP^1");
        u /= m;
        v /= m;
    }
};

/// 2x2 determinant  u_a v_b - u_b v_a; vanishes iff a == b in CP^1.
inline cplx proj_det(const ProjPoint& a, const ProjPoint& b) {
    return a.u * b.v - b.u * a.v;
}

/// Fubini-Study (chordal) distance: |det(a,b)| / (||a|| ||b||) in [0, 1].
inline double chordal_dist(const ProjPoint& a, const ProjPoint& b) {
    double na = std::sqrt(std::norm(a.u) + std::norm(a.v));
    double nb = std::sqrt(std::norm(b.u) + std::norm(b.v));
    return std::abs(proj_det(a, b)) / (na * nb);
}

/// Moebius transformation as a GL(2,C) matrix acting on column vectors (u, v).
struct Mobius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    cplx det() const { return a * d - b * c; }

    ProjPoint apply(const ProjPoint& p) const {
        return ProjPoint(a * p.u + b * p.v, c * p.u + d * p.v);
    }

    Mobius compose(const Mobius& o) const {
        return Mobius{a * o.a + b * o.c, a * o.b + b * o.d,
                      c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

/// The unique Moebius map sending (p, q, r) to (0, 1, inf).  Requires the
/// three points pairwise distinct.
inline Mobius mobius_to_standard(const ProjPoint& p, const ProjPoint& q, const ProjPoint& r) {
    cplx qr = proj_det(q, r);
    cplx qp = proj_det(q, p);
    if (std::abs(qr) == 0.0 || std::abs(qp) == 0.0 || std::abs(proj_det(p, r)) == 0.0)
        throw NonGeneric("mobius_to_standard needs three pairwise distinct points");
    // row 1: <q,r> * (v_p, -u_p), row 2: <q,p> * (v_r, -u_r)
    return Mobius{qr * p.v, -qr * p.u, qp * r.v, -qp * r.u};
}

/// Cross ratio (z1-z2)(z3-z4) / ((z2-z3)(z1-z4)) in determinant form.
/// Throws NonGeneric when the value degenerates to 0, inf or 0/0.
inline cplx cross_ratio_points(const ProjPoint& z1, const ProjPoint& z2,
                               const ProjPoint& z3, const ProjPoint& z4,
                               double tol = 1e-13) {
    cplx num = proj_det(z1, z2) * proj_det(z3, z4);
    cplx den = proj_det(z2, z3) * proj_det(z1, z4);
    if (std::abs(num) <= tol || std::abs(den) <= tol)
        throw NonGeneric("cross ratio degenerates (coincident quadrilateral points)");
    return num / den;
}

} // namespace stokescluster
