#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "detail/numerics.hpp"
#include "errors.hpp"

namespace stokescluster {

using cplx = std::complex<double>;

/// Roots of a monic polynomial, sorted lexicographically by (Re, Im).
/// `sep` is the minimal pairwise distance (+inf for a single root).
struct RootSet {
    std::vector<cplx> roots;
    double sep = std::numeric_limits<double>::infinity();

    double max_abs() const {
        double m = 0.0;
        for (const auto& r : roots) m = std::max(m, std::abs(r));
        return m;
    }

    /// Effective separation scale: `sep` capped by the root magnitude scale,
    /// so radii derived from it stay finite in the single-root case.
    double sep_eff() const { return std::min(sep, 1.0 + max_abs()); }
};

namespace detail {

/// Aberth-Ehrlich simultaneous root iteration for a monic polynomial given by
/// its full coefficient vector c[0..d] with c[d] = 1.
inline std::vector<cplx> aberth_roots(const std::vector<cplx>& c) {
    const int d = static_cast<int>(c.size()) - 1;
    if (d <= 0) return {};
    if (d == 1) return {-c[0]};

    auto eval = [&](cplx z, cplx& p, cplx& dp) {
        p = c[d];
        dp = 0.0;
        for (int j = d - 1; j >= 0; --j) {
            dp = dp * z + p;
            p = p * z + c[j];
        }
    };

    double cmax = 0.0;
    for (const auto& cj : c) cmax = std::max(cmax, std::abs(cj));
    const double radius = 1.0 + cmax; // Cauchy bound for monic polynomials

    // deterministic start: perturbed circle, angle offset breaks symmetry locks
    std::vector<cplx> z(d);
    for (int i = 0; i < d; ++i) {
        double ang = 2.0 * std::numbers::pi * (i + 0.25) / d + 0.4;
        z[i] = 0.7 * radius * std::polar(1.0, ang);
    }

    const double scale = std::max(1.0, cmax);
    const double tol = 1e-14 * scale;
    bool converged = false;
    for (int iter = 0; iter < 400 && !converged; ++iter) {
        converged = true;
        for (int i = 0; i < d; ++i) {
            cplx p, dp;
            eval(z[i], p, dp);
            if (std::abs(p) <= tol) continue;
            cplx nwt = (dp != cplx(0.0)) ? p / dp : cplx(1e-3);
            cplx s = 0.0;
            for (int j = 0; j < d; ++j)
                if (j != i) {
                    cplx diff = z[i] - z[j];
                    if (std::abs(diff) < 1e-300) diff = cplx(1e-300);
                    s += 1.0 / diff;
                }
            cplx denom = 1.0 - nwt * s;
            cplx step = (std::abs(denom) > 1e-300) ? nwt / denom : nwt;
            z[i] -= step;
            if (std::abs(step) > 1e-15 * (1.0 + std::abs(z[i]))) converged = false;
        }
    }

    // Newton polish
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < 3; ++k) {
            cplx p, dp;
            eval(z[i], p, dp);
            if (std::abs(dp) < 1e-300) break;
            z[i] -= p / dp;
        }

    std::sort(z.begin(), z.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return z;
}

} // namespace detail

/// Monic polynomial P(z) = z^{n+1} + a_{n-1} z^{n-1} + ... + a_0 with the
/// z^n coefficient fixed to zero (roots sum to zero).  Roots are computed,
/// validated against the discriminant locus, and cached at construction.
class Polynomial {
public:
    /// Validating constructor.  `a` holds (a_0, ..., a_{n-1}).
    static Polynomial from_coefficients(int n, std::vector<cplx> a) {
        if (n < 0) throw DimensionMismatch("degree parameter n must be >= 0");
        if (static_cast<int>(a.size()) != n)
            throw DimensionMismatch("expected " + std::to_string(n) +
                                    " coefficients, got " + std::to_string(a.size()));
        Polynomial p;
        p.n_ = n;
        p.a_ = std::move(a);
        p.compute_roots();
        return p;
    }

    int n() const { return n_; }
    int degree() const { return n_ + 1; }
    /// Number of Stokes directions / marked points, n + 3.
    int num_directions() const { return n_ + 3; }
    const std::vector<cplx>& coefficients() const { return a_; }
    const RootSet& root_set() const { return roots_; }
    const std::vector<cplx>& roots() const { return roots_.roots; }

    cplx operator()(cplx z) const {
        cplx p = 1.0; // leading coefficient of z^{n+1}
        p = p * z;    // accounts for the zero z^n coefficient below
        // Horner over full coefficient list: 1, 0, a_{n-1}, ..., a_0
        for (int j = n_ - 1; j >= 0; --j) p = p * z + a_[j];
        return p;
    }

    cplx derivative(cplx z) const {
        // P'(z) = (n+1) z^n + sum_{j>=1} j a_j z^{j-1}
        if (n_ == 0) return cplx(1.0);
        cplx dp = static_cast<double>(n_ + 1);
        dp = dp * z; // consumes the vanishing z^{n-1} coefficient of P'
        for (int j = n_ - 1; j >= 1; --j) dp = dp * z + static_cast<double>(j) * a_[j];
        return dp;
    }

    /// Escape radius used by the trajectory tracer and Stokes solver.
    double escape_radius() const { return 10.0 * (1.0 + roots_.max_abs()); }

    bool operator==(const Polynomial& o) const { return n_ == o.n_ && a_ == o.a_; }

private:
    void compute_roots() {
        std::vector<cplx> c(n_ + 2, cplx(0.0));
        c[n_ + 1] = 1.0;
        for (int j = 0; j < n_; ++j) c[j] = a_[j];

        std::vector<cplx> z = detail::aberth_roots(c);

        double cmax = 0.0;
        for (const auto& cj : c) cmax = std::max(cmax, std::abs(cj));
        const double residual_tol = 1e-10 * std::max(1.0, cmax);
        for (const auto& zi : z)
            if (std::abs((*this)(zi)) > residual_tol)
                throw ConvergenceFailure("root refinement residual exceeds tolerance");

        RootSet rs;
        rs.roots = std::move(z);
        double maxabs = 0.0;
        for (const auto& r : rs.roots) maxabs = std::max(maxabs, std::abs(r));
        const double sep_tol = 1e-6 * (1.0 + maxabs);
        for (std::size_t i = 0; i < rs.roots.size(); ++i)
            for (std::size_t j = i + 1; j < rs.roots.size(); ++j)
                rs.sep = std::min(rs.sep, std::abs(rs.roots[i] - rs.roots[j]));
        if (rs.roots.size() >= 2 && rs.sep <= sep_tol)
            throw DiscriminantViolation("roots are not simple (separation " +
                                        std::to_string(rs.sep) + " below tolerance)");
        roots_ = std::move(rs);
    }

    int n_ = 0;
    std::vector<cplx> a_;
    RootSet roots_;
};

/// C*-action t.(a_0, ..., a_{n-1}) = (t^{n+1} a_0, t^n a_1, ..., t^2 a_{n-1});
/// roots scale by t.
inline Polynomial scale_action(cplx t, const Polynomial& p) {
    std::vector<cplx> a = p.coefficients();
    const int n = p.n();
    for (int j = 0; j < n; ++j) a[j] *= std::pow(t, n + 1 - j);
    return Polynomial::from_coefficients(n, std::move(a));
}

/// Generator of the Z/(n+3)Z framing action: the substitution z -> z/omega
/// with omega = exp(2 pi i/(n+3)), renormalized to a monic representative,
/// i.e. a_j -> omega^{-(j+2)} a_j.  Roots move to omega * roots, Stokes
/// sector labels shift by +1, and the (n+3)-fold iterate is the identity.
inline Polynomial rotate_framing(const Polynomial& p) {
    const int m = p.num_directions();
    const cplx omega_inv = std::polar(1.0, -2.0 * std::numbers::pi / m);
    std::vector<cplx> a = p.coefficients();
    for (int j = 0; j < p.n(); ++j) a[j] *= std::pow(omega_inv, j + 2);
    return Polynomial::from_coefficients(p.n(), std::move(a));
}

/// Period data: integral of a continuously tracked branch of sqrt(P) along a
/// polyline joining two roots.  Branch convention: at the path midpoint the
/// tracked branch equals the principal square root of P there.
struct Period {
    int from = 0;
    int to = 0;
    cplx value{0.0, 0.0};
    std::vector<cplx> path; // 2 vertices, or 3 when a detour was inserted
};

namespace detail {

/// Integrate sqrt(P) over the straight segment [a, b] where the branch value
/// at `a` is prescribed (continuity seed `seed`, needed only for its sign
/// relative to the principal branch).  The segment may end at a root of P:
/// tanh-sinh nodes never touch the endpoints and absorb the sqrt singularity.
/// Returns the integral and the branch value at the far end.
struct SegmentIntegral {
    cplx value;
    cplx end_branch;
};

inline SegmentIntegral sqrtP_segment(const Polynomial& p, cplx a, cplx b, cplx seed,
                                     double rtol) {
    const cplx half = 0.5 * (b - a);
    // |P| below this is floating-point noise (endpoint may be a root, where
    // the evaluated argument is meaningless); such samples are added to the
    // quadrature sum but excluded from branch tracking
    double cmax = 1.0;
    for (const auto& cj : p.coefficients()) cmax = std::max(cmax, std::abs(cj));
    const double zmax = std::max({1.0, std::abs(a), std::abs(b)});
    const double pfloor = 1e-13 * cmax * std::pow(zmax, p.degree());

    cplx prev_value{0.0};
    cplx end_branch = seed;
    for (int level = 5; level <= 11; ++level) {
        auto nodes = tanh_sinh_nodes(level);
        cplx cur = seed; // branch tracker, swept in order of increasing x
        cplx sum = 0.0;
        bool ok = true;
        for (const auto& nd : nodes) {
            cplx z = a + (nd.x + 1.0) * half;
            cplx pz = p(z);
            cplx v = std::sqrt(pz);
            if (std::abs(v + cur) < std::abs(v - cur)) v = -v;
            if (std::abs(pz) > pfloor) {
                // consecutive samples must stay within a quarter turn
                double dot = (v / cur).real();
                if (dot <= 0.0) { ok = false; break; }
                cur = v;
            }
            sum += nd.w * v;
        }
        if (!ok) {
            if (level == 11)
                throw BranchTrackingFailure(
                    "sqrt(P) branch could not be tracked continuously along the period path");
            continue;
        }
        cplx value = sum * half;
        end_branch = cur;
        if (level > 5 && std::abs(value - prev_value) <=
                             rtol * std::max(1.0, std::abs(value)))
            return {value, end_branch};
        prev_value = value;
    }
    return {prev_value, end_branch};
}

} // namespace detail

/// Period of sqrt(P) dz between roots i and j (indices into the sorted root
/// list).  The path is the straight segment unless another root comes within
/// 0.05*sep of it, in which case a two-segment detour displaced by 0.1*sep is
/// used.  Sign convention: the tracked branch agrees with the principal
/// square root of P at the path midpoint.
inline Period period(const Polynomial& p, int i, int j, double rtol = 1e-11) {
    const auto& roots = p.roots();
    const int nr = static_cast<int>(roots.size());
    if (i < 0 || j < 0 || i >= nr || j >= nr)
        throw DimensionMismatch("period root index out of range");
    if (i == j) throw DimensionMismatch("period requires two distinct roots");

    const cplx A = roots[i], B = roots[j];
    const double sep = p.root_set().sep_eff();

    // clearance of all other roots from the straight segment
    auto seg_dist = [](cplx P0, cplx P1, cplx q) {
        cplx d = P1 - P0;
        double L2 = std::norm(d);
        if (L2 == 0.0) return std::abs(q - P0);
        double t = std::clamp(((q - P0) * std::conj(d)).real() / L2, 0.0, 1.0);
        return std::abs(q - (P0 + t * d));
    };
    double clearance = std::numeric_limits<double>::infinity();
    for (int k = 0; k < nr; ++k)
        if (k != i && k != j)
            clearance = std::min(clearance, seg_dist(A, B, roots[k]));

    std::vector<cplx> path;
    cplx mid;
    if (clearance < 0.05 * sep) {
        // canonical detour: displace the midpoint along the segment normal,
        // orientation-independent (normal computed from the lex-sorted pair),
        // choosing the side with more clearance
        cplx lo = A, hi = B;
        if (hi.real() < lo.real() || (hi.real() == lo.real() && hi.imag() < lo.imag()))
            std::swap(lo, hi);
        cplx nrm = cplx(0.0, 1.0) * (hi - lo) / std::abs(hi - lo);
        cplx base = 0.5 * (A + B);
        cplx cand1 = base + 0.1 * sep * nrm, cand2 = base - 0.1 * sep * nrm;
        auto min_clear = [&](cplx via) {
            double c = std::numeric_limits<double>::infinity();
            for (int k = 0; k < nr; ++k)
                if (k != i && k != j)
                    c = std::min({c, seg_dist(A, via, roots[k]), seg_dist(via, B, roots[k])});
            return c;
        };
        mid = (min_clear(cand1) >= min_clear(cand2)) ? cand1 : cand2;
        path = {A, mid, B};
    } else {
        mid = 0.5 * (A + B);
        path = {A, B};
    }

    // sweep outward from the midpoint in both directions so the convention
    // branch(mid) = principal sqrt(P(mid)) is built in
    cplx bm = std::sqrt(p(mid));
    if (std::abs(bm) == 0.0)
        throw BranchTrackingFailure("period path midpoint coincides with a root of P");

    auto left = detail::sqrtP_segment(p, mid, A, bm, rtol);
    auto right = detail::sqrtP_segment(p, mid, B, bm, rtol);
    return Period{i, j, right.value - left.value, path};
}

} // namespace stokescluster
