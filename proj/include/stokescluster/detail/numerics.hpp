#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace stokescluster::detail {

using cplx = std::complex<double>;

inline double wrap_angle(double a) {
    // wrap to [0, 2*pi)
    constexpr double tau = 6.283185307179586476925286766559;
    a = std::fmod(a, tau);
    if (a < 0) a += tau;
    return a;
}

inline double angle_dist(double a, double b) {
    // distance on the circle, in [0, pi]
    constexpr double tau = 6.283185307179586476925286766559;
    double d = std::fmod(std::fabs(a - b), tau);
    return d > tau / 2 ? tau - d : d;
}

/// One Dormand-Prince 5(4) step for a system of N complex components.
/// Returns the 5th order solution and the embedded error estimate norm
/// (max over components of |y5 - y4|).
template <std::size_t N, typename F>
std::pair<std::array<cplx, N>, double>
dp45_step(const F& f, double t, const std::array<cplx, N>& y, double h) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    auto axpy = [](const std::array<cplx, N>& base,
                   std::initializer_list<std::pair<double, const std::array<cplx, N>*>> terms,
                   double h) {
        std::array<cplx, N> r = base;
        for (auto& [a, k] : terms)
            for (std::size_t i = 0; i < N; ++i) r[i] += h * a * (*k)[i];
        return r;
    };

    std::array<cplx, N> k1 = f(t, y);
    std::array<cplx, N> k2 = f(t + c2 * h, axpy(y, {{a21, &k1}}, h));
    std::array<cplx, N> k3 = f(t + c3 * h, axpy(y, {{a31, &k1}, {a32, &k2}}, h));
    std::array<cplx, N> k4 = f(t + c4 * h, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
    std::array<cplx, N> k5 =
        f(t + c5 * h, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
    std::array<cplx, N> k6 = f(
        t + h, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));

    std::array<cplx, N> y5 = y;
    for (std::size_t i = 0; i < N; ++i)
        y5[i] += h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    std::array<cplx, N> k7 = f(t + h, y5);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        cplx y4i = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                               e6 * k6[i] + e7 * k7[i]);
        err = std::max(err, std::abs(y5[i] - y4i));
    }
    return {y5, err};
}

/// tanh-sinh nodes/weights at a given level for integrals over (-1, 1).
/// Node k has abscissa tanh(pi/2 sinh(k*dk)) and weight
/// (pi/2) cosh(k*dk)/cosh^2(pi/2 sinh(k*dk)).
struct TanhSinhNode {
    double x;
    double w;
};

inline std::vector<TanhSinhNode> tanh_sinh_nodes(int level) {
    // dk = 1/2^level; truncate when weights underflow
    std::vector<TanhSinhNode> nodes;
    double dk = std::ldexp(1.0, -level);
    const double pi_half = 1.5707963267948966;
    for (int k = -static_cast<int>(8.0 / dk); k <= static_cast<int>(8.0 / dk); ++k) {
        double t = k * dk;
        double s = pi_half * std::sinh(t);
        double x = std::tanh(s);
        double ch = std::cosh(s);
        double w = dk * pi_half * std::cosh(t) / (ch * ch);
        if (w < 1e-20 || std::fabs(x) >= 1.0) continue;
        nodes.push_back({x, w});
    }
    return nodes;
}

} // namespace stokescluster::detail
