#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <catch2/catch_amalgamated.hpp>

#include "stokescluster/foliation.hpp"

using namespace stokescluster;
using std::numbers::pi;

namespace {

int index_of_root(const Polynomial& p, cplx z) {
    const auto& r = p.roots();
    int best = 0;
    for (int i = 1; i < static_cast<int>(r.size()); ++i)
        if (std::abs(r[i] - z) < std::abs(r[best] - z)) best = i;
    REQUIRE(std::abs(r[best] - z) < 1e-8);
    return best;
}

std::array<int, 3> fan_set(std::array<int, 3> f) {
    std::sort(f.begin(), f.end());
    return f;
}

bool cyclically_increasing(const std::array<int, 3>& f, int m) {
    for (int r = 0; r < 3; ++r) {
        std::array<int, 3> g{f[r % 3], f[(r + 1) % 3], f[(r + 2) % 3]};
        if (g[0] < g[1] && g[1] < g[2]) return true;
        (void)m;
    }
    return false;
}

void check_horizontality(const Trajectory& t) {
    REQUIRE(t.w_length > 0.0);
    REQUIRE(t.im_drift < 1e-6 * t.w_length);
}

} // namespace

TEST_CASE("prong angles follow the local model") {
    SECTION("P = z has prongs at 0, 2pi/3, 4pi/3") {
        auto p = Polynomial::from_coefficients(0, {});
        auto th = prong_angles(p, 0);
        REQUIRE(std::abs(th[0] - 0.0) < 1e-12);
        REQUIRE(std::abs(th[1] - 2.0 * pi / 3.0) < 1e-12);
        REQUIRE(std::abs(th[2] - 4.0 * pi / 3.0) < 1e-12);
    }
    SECTION("P = z^2 - 1 at the zero 1 has arg c = 0") {
        auto p = Polynomial::from_coefficients(1, {cplx(-1.0)});
        int i1 = index_of_root(p, cplx(1.0));
        auto th = prong_angles(p, i1);
        REQUIRE(std::abs(th[0] - 0.0) < 1e-12);
        REQUIRE(std::abs(th[1] - 2.0 * pi / 3.0) < 1e-12);
    }
    SECTION("P = z^2 + 1 at the zero i is rotated by -pi/6") {
        auto p = Polynomial::from_coefficients(1, {cplx(1.0)});
        int ii = index_of_root(p, cplx(0.0, 1.0));
        auto th = prong_angles(p, ii);
        REQUIRE(std::abs(th[0] - (-pi / 6.0)) < 1e-9);
        REQUIRE(std::abs(th[1] - (-pi / 6.0 + 2.0 * pi / 3.0)) < 1e-9);
    }
    SECTION("bad zero index") {
        auto p = Polynomial::from_coefficients(0, {});
        REQUIRE_THROWS_AS(prong_angles(p, 1), DimensionMismatch);
        REQUIRE_THROWS_AS(prong_angles(p, -1), DimensionMismatch);
    }
}

TEST_CASE("trajectory tracing") {
    auto p = Polynomial::from_coefficients(1, {cplx(-1.0)});

    SECTION("start on the positive real axis escapes along direction 0") {
        auto t = trace_trajectory(p, cplx(2.0), +1);
        REQUIRE(t.terminus.kind == Terminus::Kind::Direction);
        REQUIRE(t.terminus.index == 0);
        REQUIRE(std::abs(t.points.back()) > p.escape_radius());
        REQUIRE_FALSE(t.origin.has_value());
        check_horizontality(t);
    }

    SECTION("the real segment [1, 2] traced inward lands on the zero") {
        auto t = trace_trajectory(p, cplx(2.0), -1);
        REQUIRE(t.terminus.kind == Terminus::Kind::Zero);
        REQUIRE(t.terminus.index == index_of_root(p, cplx(1.0)));
        // w(2) - w(1) = int_1^2 sqrt(z^2-1) dz = [z sqrt(z^2-1)/2 - ln(z + sqrt(z^2-1))/2]
        double want = 2.0 * std::sqrt(3.0) / 2.0 - 0.5 * std::log(2.0 + std::sqrt(3.0));
        REQUIRE(std::abs(t.w_length - want) < 1e-3);
    }

    SECTION("a generic start escapes both ways with tiny Im w drift") {
        for (int sign : {+1, -1}) {
            auto t = trace_trajectory(p, cplx(0.5, 0.8), sign);
            REQUIRE(t.terminus.kind == Terminus::Kind::Direction);
            check_horizontality(t);
        }
    }

    SECTION("start inside an exclusion ball is rejected") {
        REQUIRE_THROWS_AS(trace_trajectory(p, cplx(1.0 + 1e-6, 0.0), +1),
                          StartTooCloseToZero);
    }

    SECTION("a tiny w budget truncates the trace") {
        TraceParams tp;
        tp.max_w_length = 1e-3;
        auto t = trace_trajectory(p, cplx(0.5, 0.8), +1, tp);
        REQUIRE(t.terminus.kind == Terminus::Kind::Truncated);
    }
}

TEST_CASE("Airy foliation P = z") {
    auto p = Polynomial::from_coefficients(0, {});

    SECTION("separatrices escape to the three directions in launch order") {
        auto ts = classify(p);
        REQUIRE(ts.saddle_free);
        REQUIRE(ts.saddles.empty());
        REQUIRE(ts.zero_fan.size() == 1);
        REQUIRE(ts.zero_fan.at(0) == std::array<int, 3>{0, 1, 2});
        for (const auto& t : ts.separatrices[0]) {
            REQUIRE(t.origin == 0);
            REQUIRE(t.terminus.kind == Terminus::Kind::Direction);
            check_horizontality(t);
        }
        // threefold symmetry: the three separatrices have equal w-length
        double w0 = ts.separatrices[0][0].w_length;
        REQUIRE(std::abs(ts.separatrices[0][1].w_length - w0) < 1e-6 * w0);
        REQUIRE(std::abs(ts.separatrices[0][2].w_length - w0) < 1e-6 * w0);
    }

    SECTION("the triangulation of the 3-gon has no arcs") {
        auto T = wkb_triangulation(p);
        REQUIRE(T.m() == 3);
        REQUIRE(T.num_arcs() == 0);
        REQUIRE(T.triangles() == std::vector<std::array<int, 3>>{{0, 1, 2}});
    }

    SECTION("wall proximity is +inf with a single zero") {
        REQUIRE(std::isinf(wall_proximity(p)));
    }
}

TEST_CASE("square differential P = z^2 - 1") {
    auto p = Polynomial::from_coefficients(1, {cplx(-1.0)});
    int iminus = index_of_root(p, cplx(-1.0));
    int iplus = index_of_root(p, cplx(1.0));

    SECTION("fans and the diagonal") {
        auto ts = classify(p);
        REQUIRE(ts.saddle_free);
        REQUIRE(ts.zero_fan.at(iplus) == std::array<int, 3>{0, 1, 3});
        REQUIRE(ts.zero_fan.at(iminus) == std::array<int, 3>{3, 1, 2});
        REQUIRE(cyclically_increasing(ts.zero_fan.at(iplus), 4));
        REQUIRE(cyclically_increasing(ts.zero_fan.at(iminus), 4));

        auto T = triangulation_from_structure(p.n(), ts);
        REQUIRE(T.arcs() == std::vector<Arc>{{1, 3}});
        for (const auto& seps : ts.separatrices)
            for (const auto& t : seps) check_horizontality(t);
    }

    SECTION("wall proximity is 1 (purely imaginary period)") {
        REQUIRE(std::abs(wall_proximity(p) - 1.0) < 1e-9);
    }

    SECTION("the rotated framing shifts all labels by one") {
        auto T = wkb_triangulation(p);
        auto Tr = wkb_triangulation(rotate_framing(p));
        std::vector<Arc> shifted;
        for (auto a : T.arcs()) {
            int u = (a[0] + 1) % 4, v = (a[1] + 1) % 4;
            shifted.push_back({std::min(u, v), std::max(u, v)});
        }
        std::sort(shifted.begin(), shifted.end());
        REQUIRE(Tr.arcs() == shifted);
    }
}

TEST_CASE("saddle detection") {
    SECTION("P = z^2 - i sits on a wall") {
        auto p = Polynomial::from_coefficients(1, {cplx(0.0, -1.0)});
        auto ts = classify(p);
        REQUIRE_FALSE(ts.saddle_free);
        REQUIRE(ts.saddles.size() == 1);
        auto& s = ts.saddles[0];
        REQUIRE(std::min(s.zero_i, s.zero_j) == 0);
        REQUIRE(std::max(s.zero_i, s.zero_j) == 1);
        REQUIRE(s.path.terminus.kind == Terminus::Kind::Zero);
        REQUIRE(wall_proximity(p) < 1e-9);
        REQUIRE_THROWS_AS(wkb_triangulation(p), NotSaddleFree);
    }

    SECTION("P = z^2 - exp(i 1.45) is saddle-free") {
        auto p = Polynomial::from_coefficients(1, {-std::polar(1.0, 1.45)});
        auto ts = classify(p);
        REQUIRE(ts.saddle_free);
        REQUIRE(std::abs(wall_proximity(p) - std::cos(1.45)) < 1e-6);
    }

    SECTION("P = z^3 - z has a saddle on the real segment (-1, 0)") {
        auto p = Polynomial::from_coefficients(2, {cplx(0.0), cplx(-1.0)});
        auto ts = classify(p);
        REQUIRE_FALSE(ts.saddle_free);
        REQUIRE(ts.saddles.size() == 1);
        auto& s = ts.saddles[0];
        int lo = std::min(s.zero_i, s.zero_j), hi = std::max(s.zero_i, s.zero_j);
        REQUIRE(lo == index_of_root(p, cplx(-1.0)));
        REQUIRE(hi == index_of_root(p, cplx(0.0)));
        REQUIRE_THROWS_AS(wkb_triangulation(p), NotSaddleFree);
    }
}

TEST_CASE("pentagon differential P = z^3 + z") {
    auto p = Polynomial::from_coefficients(2, {cplx(0.0), cplx(1.0)});
    int i0 = index_of_root(p, cplx(0.0));
    int iplus = index_of_root(p, cplx(0.0, 1.0));
    int iminus = index_of_root(p, cplx(0.0, -1.0));

    SECTION("fans tile the pentagon as the fan at vertex 0") {
        auto ts = classify(p);
        REQUIRE(ts.saddle_free);
        REQUIRE(fan_set(ts.zero_fan.at(i0)) == std::array<int, 3>{0, 2, 3});
        REQUIRE(fan_set(ts.zero_fan.at(iplus)) == std::array<int, 3>{0, 1, 2});
        REQUIRE(fan_set(ts.zero_fan.at(iminus)) == std::array<int, 3>{0, 3, 4});
        for (const auto& [zero, fan] : ts.zero_fan)
            REQUIRE(cyclically_increasing(fan, 5));

        auto T = triangulation_from_structure(p.n(), ts);
        REQUIRE(T.arcs() == std::vector<Arc>{{0, 2}, {0, 3}});
        for (const auto& seps : ts.separatrices)
            for (const auto& t : seps) check_horizontality(t);
    }

    SECTION("rotation equivariance on the pentagon") {
        auto T = wkb_triangulation(p);
        auto Tr = wkb_triangulation(rotate_framing(p));
        std::vector<Arc> shifted;
        for (auto a : T.arcs()) {
            int u = (a[0] + 1) % 5, v = (a[1] + 1) % 5;
            shifted.push_back({std::min(u, v), std::max(u, v)});
        }
        std::sort(shifted.begin(), shifted.end());
        REQUIRE(Tr.arcs() == shifted);
    }
}

TEST_CASE("structure-to-triangulation validation") {
    SECTION("a structure with saddles is rejected") {
        TrajectoryStructure ts;
        ts.saddle_free = false;
        REQUIRE_THROWS_AS(triangulation_from_structure(1, ts), NotSaddleFree);
    }
    SECTION("incomplete fan data is rejected") {
        TrajectoryStructure ts;
        ts.saddle_free = true;
        ts.zero_fan[0] = {0, 1, 3};
        REQUIRE_THROWS_AS(triangulation_from_structure(1, ts), StructureInconsistent);
    }
    SECTION("repeated directions in a fan are rejected") {
        TrajectoryStructure ts;
        ts.saddle_free = true;
        ts.zero_fan[0] = {0, 0, 1};
        ts.zero_fan[1] = {1, 2, 3};
        REQUIRE_THROWS_AS(triangulation_from_structure(1, ts), StructureInconsistent);
    }
    SECTION("fans that double-cover a boundary segment are rejected") {
        TrajectoryStructure ts;
        ts.saddle_free = true;
        ts.zero_fan[0] = {0, 1, 2};
        ts.zero_fan[1] = {0, 1, 2};
        REQUIRE_THROWS_AS(triangulation_from_structure(1, ts), StructureInconsistent);
    }
    SECTION("fans that do not tile are rejected") {
        TrajectoryStructure ts;
        ts.saddle_free = true;
        ts.zero_fan[0] = {0, 1, 2};
        ts.zero_fan[1] = {2, 3, 4};
        ts.zero_fan[2] = {0, 1, 3};
        REQUIRE_THROWS_AS(triangulation_from_structure(2, ts), StructureInconsistent);
    }
}
