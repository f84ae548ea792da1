#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "stokescluster/polynomial.hpp"

using namespace stokescluster;
using Catch::Approx;

namespace {

std::vector<cplx> random_coeffs(std::mt19937& rng, int n, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<cplx> a(n);
    for (auto& c : a) c = cplx(u(rng), u(rng));
    return a;
}

// match each element of want to a distinct element of got within tol
bool same_as_sets(std::vector<cplx> got, const std::vector<cplx>& want, double tol) {
    if (got.size() != want.size()) return false;
    for (const auto& w : want) {
        auto best = got.end();
        double bd = tol;
        for (auto it = got.begin(); it != got.end(); ++it)
            if (std::abs(*it - w) <= bd) { bd = std::abs(*it - w); best = it; }
        if (best == got.end()) return false;
        got.erase(best);
    }
    return true;
}

} // namespace

TEST_CASE("construction and validation") {
    auto airy = Polynomial::from_coefficients(0, {});
    REQUIRE(airy.degree() == 1);
    REQUIRE(airy.num_directions() == 3);
    REQUIRE(airy.roots().size() == 1);
    REQUIRE(std::abs(airy.roots()[0]) < 1e-14);

    auto p = Polynomial::from_coefficients(1, {cplx(-1.0)});
    REQUIRE(same_as_sets(p.roots(), {cplx(-1.0), cplx(1.0)}, 1e-12));

    REQUIRE_THROWS_AS(Polynomial::from_coefficients(1, {cplx(0.0)}), DiscriminantViolation);
    REQUIRE_THROWS_AS(Polynomial::from_coefficients(2, {cplx(1.0)}), DimensionMismatch);
    REQUIRE_THROWS_AS(Polynomial::from_coefficients(-1, {}), DimensionMismatch);
}

TEST_CASE("roots are sorted, residual-checked and re-expand to the coefficients") {
    auto p = Polynomial::from_coefficients(2, {cplx(0.0), cplx(-1.0)}); // z^3 - z
    REQUIRE(same_as_sets(p.roots(), {cplx(-1.0), cplx(0.0), cplx(1.0)}, 1e-12));
    REQUIRE(p.roots()[0].real() < p.roots()[1].real());
    REQUIRE(p.roots()[1].real() < p.roots()[2].real());
    REQUIRE(p.root_set().sep == Approx(1.0).epsilon(1e-10));

    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 3;
        Polynomial q;
        try {
            q = Polynomial::from_coefficients(n, random_coeffs(rng, n));
        } catch (const DiscriminantViolation&) {
            continue;
        }
        // re-expand prod (z - alpha_i) and compare full coefficient vectors
        std::vector<cplx> c{cplx(1.0)};
        for (const auto& r : q.roots()) {
            std::vector<cplx> nc(c.size() + 1, cplx(0.0));
            for (std::size_t i = 0; i < c.size(); ++i) {
                nc[i + 1] += c[i];
                nc[i] -= r * c[i];
            }
            c = std::move(nc);
        }
        // c holds ascending coefficients of the monic product
        REQUIRE(std::abs(c[n + 1] - 1.0) < 1e-10);
        REQUIRE(std::abs(c[n]) < 1e-10); // roots sum to zero
        for (int j = 0; j < n; ++j) REQUIRE(std::abs(c[j] - q.coefficients()[j]) < 1e-10);

        cplx sum = 0.0;
        for (const auto& r : q.roots()) sum += r;
        REQUIRE(std::abs(sum) < 1e-10);
    }
}

TEST_CASE("evaluation and derivative") {
    auto p = Polynomial::from_coefficients(2, {cplx(0.5, -1.0), cplx(-1.0)});
    for (cplx z : {cplx(0.3, 0.7), cplx(-2.0, 0.1), cplx(0.0)}) {
        cplx direct = z * z * z - z + cplx(0.5, -1.0);
        REQUIRE(std::abs(p(z) - direct) < 1e-13 * (1.0 + std::abs(direct)));
        cplx ddirect = 3.0 * z * z - 1.0;
        REQUIRE(std::abs(p.derivative(z) - ddirect) < 1e-13 * (1.0 + std::abs(ddirect)));
    }
    auto airy = Polynomial::from_coefficients(0, {});
    REQUIRE(std::abs(airy(cplx(2.0, 1.0)) - cplx(2.0, 1.0)) < 1e-15);
    REQUIRE(std::abs(airy.derivative(cplx(2.0, 1.0)) - 1.0) < 1e-15);
}

TEST_CASE("scale action") {
    auto p = Polynomial::from_coefficients(1, {cplx(-1.0)});
    auto same = scale_action(cplx(1.0), p);
    REQUIRE(same == p);

    auto doubled = scale_action(cplx(2.0), p);
    REQUIRE(std::abs(doubled.coefficients()[0] - cplx(-4.0)) < 1e-14);
    REQUIRE(same_as_sets(doubled.roots(), {cplx(-2.0), cplx(2.0)}, 1e-10));

    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + trial % 3;
        Polynomial q;
        try {
            q = Polynomial::from_coefficients(n, random_coeffs(rng, n));
        } catch (const DiscriminantViolation&) {
            continue;
        }
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        cplx s(u(rng), u(rng)), t(u(rng), u(rng));
        if (std::abs(s) < 0.1 || std::abs(t) < 0.1) continue;

        auto st = scale_action(s, scale_action(t, q));
        auto both = scale_action(s * t, q);
        for (int j = 0; j < n; ++j)
            REQUIRE(std::abs(st.coefficients()[j] - both.coefficients()[j]) <=
                    1e-13 * (1.0 + std::abs(both.coefficients()[j])));

        std::vector<cplx> scaled;
        for (const auto& r : q.roots()) scaled.push_back(t * r);
        REQUIRE(same_as_sets(scale_action(t, q).roots(), scaled, 1e-9));
    }
}

TEST_CASE("framing rotation") {
    // n=1: omega = i, a0 -> omega^{-2} a0 = -a0
    auto p = Polynomial::from_coefficients(1, {cplx(0.7, -0.2)});
    auto r = rotate_framing(p);
    REQUIRE(std::abs(r.coefficients()[0] + p.coefficients()[0]) < 1e-14);

    std::mt19937 rng(99);
    for (int n : {0, 1, 2, 3}) {
        Polynomial q;
        try {
            q = Polynomial::from_coefficients(n, random_coeffs(rng, n));
        } catch (const DiscriminantViolation&) {
            continue;
        }
        // (n+3)-fold application is the identity
        Polynomial it = q;
        for (int k = 0; k < n + 3; ++k) it = rotate_framing(it);
        for (int j = 0; j < n; ++j)
            REQUIRE(std::abs(it.coefficients()[j] - q.coefficients()[j]) <=
                    1e-12 * (1.0 + std::abs(q.coefficients()[j])));

        // roots move to omega * roots: the rotated polynomial is the
        // monic renormalization of P(z/omega)
        const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / (n + 3));
        std::vector<cplx> expect;
        for (const auto& al : q.roots()) expect.push_back(al * omega);
        REQUIRE(same_as_sets(rotate_framing(q).roots(), expect, 1e-9));
    }
}

TEST_CASE("period closed forms for z^2 - c") {
    const double pi = std::numbers::pi;

    SECTION("c = 1 gives i*pi/2 between the lex-sorted roots -1, 1") {
        auto p = Polynomial::from_coefficients(1, {cplx(-1.0)});
        auto per = period(p, 0, 1);
        REQUIRE(std::abs(per.value - cplx(0.0, pi / 2.0)) < 1e-9);
        REQUIRE(per.path.size() == 2);
    }

    SECTION("general c: value = sB * s * i * c * pi/2") {
        // substitution z = sqrt(c) u reduces to the c = 1 case; the branch
        // convention at the midpoint (= 0) contributes s = sqrt(-c)/(i sqrt(c))
        // and the lex orientation of the endpoints contributes sB.
        for (cplx c : {cplx(0.0, 1.0), cplx(-2.0, 0.5), cplx(1.3, -2.1), cplx(-0.4, -0.9)}) {
            auto p = Polynomial::from_coefficients(1, {-c});
            cplx rt = std::sqrt(c);
            cplx s = std::sqrt(-c) / (cplx(0.0, 1.0) * rt);
            // sB = +1 iff +sqrt(c) is the lex-larger root
            cplx lo = -rt, hi = rt;
            double sB = (hi.real() > lo.real() ||
                         (hi.real() == lo.real() && hi.imag() > lo.imag()))
                            ? 1.0
                            : -1.0;
            cplx want = sB * s * cplx(0.0, 1.0) * c * (pi / 2.0);
            auto per = period(p, 0, 1);
            REQUIRE(std::abs(per.value - want) < 1e-9 * (1.0 + std::abs(want)));
        }
    }

    SECTION("index validation") {
        auto p = Polynomial::from_coefficients(1, {cplx(-1.0)});
        REQUIRE_THROWS_AS(period(p, 0, 0), DimensionMismatch);
        REQUIRE_THROWS_AS(period(p, 0, 5), DimensionMismatch);
    }
}

TEST_CASE("periods of the two real-coefficient cubics") {
    // roots of z^3 - z sort to [-1, 0, 1]; values frozen from multiprecision
    // quadrature with the same path and midpoint branch convention
    auto pm = Polynomial::from_coefficients(2, {cplx(0.0), cplx(-1.0)});
    const double val = 0.479256093894236883;

    auto p01 = period(pm, 0, 1);
    REQUIRE(std::abs(p01.value - cplx(val, 0.0)) < 1e-9);
    REQUIRE(std::abs(p01.value.imag()) < 1e-10); // real period: wall witness

    auto p12 = period(pm, 1, 2);
    REQUIRE(std::abs(p12.value - cplx(0.0, val)) < 1e-9);

    auto p02 = period(pm, 0, 2); // root at 0 forces the 0.1i detour
    REQUIRE(p02.path.size() == 3);
    REQUIRE(std::abs(p02.path[1] - cplx(0.0, 0.1)) < 1e-12);
    REQUIRE(std::abs(p02.value - cplx(val, -val)) < 1e-9);

    SECTION("antisymmetry under matched convention") {
        for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
            auto fwd = period(pm, i, j);
            auto bwd = period(pm, j, i);
            REQUIRE(std::abs(fwd.value + bwd.value) < 1e-11);
        }
    }

    // roots of z^3 + z sort to [-i, 0, i]
    auto pp = Polynomial::from_coefficients(2, {cplx(0.0), cplx(1.0)});
    const double hv = 0.338885233917591635;
    REQUIRE(std::abs(period(pp, 0, 1).value - cplx(hv, hv)) < 1e-9);
    REQUIRE(std::abs(period(pp, 1, 2).value - cplx(-hv, hv)) < 1e-9);
    auto q02 = period(pp, 0, 2); // detour lands at -0.1 by the canonical normal
    REQUIRE(q02.path.size() == 3);
    REQUIRE(std::abs(q02.path[1] - cplx(-0.1, 0.0)) < 1e-12);
    REQUIRE(std::abs(q02.value - cplx(-2.0 * hv, 0.0)) < 1e-9);
}
