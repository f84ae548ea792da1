#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "stokescluster/map.hpp"

using namespace stokescluster;

namespace {

Polynomial quadratic(cplx a0) { return Polynomial::from_coefficients(1, {a0}); }

Polynomial cubic(cplx a0, cplx a1) { return Polynomial::from_coefficients(2, {a0, a1}); }

Polynomial random_saddle_free(int n, std::mt19937& rng, double box = 1.0) {
    std::uniform_real_distribution<double> U(-box, box);
    for (;;) {
        std::vector<cplx> a(n);
        for (auto& c : a) c = cplx(U(rng), U(rng));
        try {
            Polynomial p = Polynomial::from_coefficients(n, std::move(a));
            if (classify(p).saddle_free) return p;
        } catch (const Error&) {
            // resample degenerate or ambiguous draws
        }
    }
}

} // namespace

TEST_CASE("hbar scaling uses the principal branch") {
    CHECK(hbar_scale(HbarParam{1.0}, 2) == cplx(1.0));
    // n = 1: t = hbar^{-1/2}
    CHECK(std::abs(hbar_scale(HbarParam{0.25}, 1) - cplx(2.0)) < 1e-15);
    // real hbar gives real positive t
    const cplx t = hbar_scale(HbarParam{0.1}, 3);
    CHECK(t.imag() == 0.0);
    CHECK(t.real() > 0.0);
    // outside the right half plane
    CHECK_THROWS_AS(hbar_scale(HbarParam{cplx(-1.0, 0.0)}, 1), DimensionMismatch);
    CHECK_THROWS_AS(hbar_scale(HbarParam{cplx(0.0, 1.0)}, 1), DimensionMismatch);
}

TEST_CASE("F is the asymptotic-value configuration and F_hbar deforms it") {
    const Polynomial p = quadratic(cplx(0.2, -0.9));
    const Configuration c = F(p);
    const AsymptoticTuple t = asymptotic_values(p);
    REQUIRE(c.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(chordal_dist(c.points[k], t.w[k]) < 1e-14);

    // hbar = 1 is the undeformed map
    const Configuration c1 = F_hbar(p, HbarParam{1.0});
    for (int k = 0; k < 4; ++k) CHECK(chordal_dist(c1.points[k], c.points[k]) < 1e-14);
}

TEST_CASE("wkb_chart produces finite nonzero coordinates") {
    SECTION("symmetric quadratic: the diagonal coordinate sits on the unit circle") {
        // For z^2 - c with c real positive the tuple is (w0, -is, -w0, is),
        // so X = -((is-w0)/(is+w0))^2 has modulus exactly 1.
        const Polynomial p = quadratic(-1.0);
        for (double hb : {0.5, 0.2, 0.1}) {
            const ClusterChart ch = wkb_chart(p, HbarParam{hb});
            REQUIRE(ch.X.size() == 1);
            const double ax = std::abs(ch.X[0]);
            CHECK(ax > 0.0);
            CHECK(std::isfinite(ax));
            CHECK(std::abs(ax - 1.0) < 1e-6);
        }
    }
    SECTION("cubic with two arcs") {
        const ClusterChart ch = wkb_chart(cubic(0.0, 1.0), HbarParam{0.1});
        REQUIRE(ch.X.size() == 2);
        for (const auto& x : ch.X) {
            CHECK(std::abs(x) > 0.0);
            CHECK(std::isfinite(std::abs(x)));
        }
    }
    SECTION("saddle-bearing differential is rejected upstream") {
        CHECK_THROWS_AS(wkb_chart(quadratic(cplx(0.0, -1.0)), HbarParam{0.1}), NotSaddleFree);
    }
}

TEST_CASE("chamber-chart consistency for equal WKB triangulations") {
    const Polynomial p1 = quadratic(-1.0);
    const Polynomial p2 = quadratic(-1.3);
    CHECK(wkb_triangulation(p1).arcs() == wkb_triangulation(p2).arcs());
    CHECK_NOTHROW(wkb_chart(p1, HbarParam{0.3}));
    CHECK_NOTHROW(wkb_chart(p2, HbarParam{0.3}));
}

TEST_CASE("flip coherence: both routes around a flip agree") {
    const Polynomial p = cubic(0.0, 1.0); // z^3 + z, saddle free
    const Configuration c = F(p);
    const int m = p.num_directions();

    SECTION("all pentagon triangulations and arcs") {
        for (const auto& T : all_triangulations(m))
            for (const auto& k : T.arcs())
                CHECK(flip_coherence(c, T, k) < 1e-8);
    }

    SECTION("polynomial-level wrapper") {
        const IdealTriangulation T = IdealTriangulation::from_arcs(5, {{0, 2}, {0, 3}});
        CHECK(flip_coherence(p, T, Arc{0, 2}) < 1e-8);
    }

    SECTION("pentagon five-cycle returns the initial chart") {
        const IdealTriangulation T0 = IdealTriangulation::from_arcs(5, {{0, 2}, {0, 3}});
        const ClusterChart start = chart_coords(c, T0);
        ClusterChart ch = start;
        const std::vector<Arc> seq{{0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}};
        for (const auto& k : seq) ch = mutate_coords(ch, k);
        REQUIRE(ch.triangulation.arcs() == T0.arcs());
        for (std::size_t j = 0; j < start.X.size(); ++j)
            CHECK(std::abs(ch.X[j] - start.X[j]) < 1e-8);
    }

    SECTION("square double flip is the identity") {
        const Polynomial q = quadratic(-1.0);
        const Configuration cq = F(q);
        const IdealTriangulation T = IdealTriangulation::from_arcs(4, {{1, 3}});
        const ClusterChart start = chart_coords(cq, T);
        const ClusterChart back = mutate_coords(mutate_coords(start, Arc{1, 3}), Arc{0, 2});
        REQUIRE(back.triangulation.arcs() == T.arcs());
        CHECK(std::abs(back.X[0] - start.X[0]) < 1e-10);
    }
}

TEST_CASE("finite-difference Jacobian of the log chart") {
    SECTION("n=1 nonsingular") {
        const JacobianResult r = jacobian_F(quadratic(-1.0));
        REQUIRE(r.J.rows() == 1);
        CHECK(std::abs(r.J(0, 0)) > 1e-6);
        CHECK(r.sigma_min > 1e-6);
        CHECK(r.drift < 0.10);
        CHECK(r.condition >= 1.0);
    }
    SECTION("n=2 random saddle-free samples") {
        std::mt19937 rng(4242);
        for (int s = 0; s < 3; ++s) {
            const Polynomial p = random_saddle_free(2, rng);
            const JacobianResult r = jacobian_F(p);
            REQUIRE(r.J.rows() == 2);
            CHECK(r.sigma_min > 1e-8);
            CHECK(r.drift < 0.10);
        }
    }
    SECTION("n=0 has no coordinates") {
        CHECK_THROWS_AS(jacobian_F(Polynomial::from_coefficients(0, {})),
                        DimensionMismatch);
    }
}

TEST_CASE("epsilon window search") {
    SECTION("symmetric quadratic succeeds immediately") {
        const EpsilonSearch s = epsilon_for_chart(quadratic(-1.0));
        CHECK(s.success);
        CHECK(s.epsilon == 0.5);
        CHECK(s.max_abs_log < 1e-6); // |X| = 1 on the symmetric family
    }
    SECTION("random saddle-free samples terminate above the floor") {
        // moderate coefficients keep the periods small enough that the
        // epsilon window overlaps the halving sequence from 0.5
        std::mt19937 rng(11);
        for (int n = 1; n <= 2; ++n) {
            const Polynomial p = random_saddle_free(n, rng, 0.5);
            const EpsilonSearch s = epsilon_for_chart(p);
            CHECK(s.success);
            CHECK(s.epsilon >= 1e-3);
            CHECK(s.max_abs_log < 40.0);
        }
    }
    SECTION("saddle-bearing input propagates NotSaddleFree") {
        CHECK_THROWS_AS(epsilon_for_chart(cubic(0.0, -1.0)), NotSaddleFree);
    }
}

TEST_CASE("map report assembles pipeline state") {
    SECTION("saddle-free input carries the full chart") {
        const MapReport r = map_report(quadratic(-1.0), HbarParam{0.2});
        CHECK(r.tuple.w.size() == 4);
        REQUIRE(r.triangulation.has_value());
        REQUIRE(r.chart.has_value());
        CHECK(r.failure.empty());
        CHECK(r.wall_prox > 0.5);
        REQUIRE(r.jacobian_condition.has_value());
        CHECK(*r.jacobian_condition >= 1.0);
    }
    SECTION("saddle-bearing input reports the blocking error by name") {
        const MapReport r = map_report(quadratic(cplx(0.0, -1.0)), HbarParam{0.2});
        CHECK(r.tuple.w.size() == 4);
        CHECK_FALSE(r.triangulation.has_value());
        CHECK_FALSE(r.chart.has_value());
        CHECK(r.failure == "NotSaddleFree");
        CHECK(r.wall_prox < 1e-6);
        CHECK_FALSE(r.jacobian_condition.has_value());
    }
}
