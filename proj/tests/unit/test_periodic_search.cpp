#include <cmath>
#include <random>
#include <string>

#include "annulus/errors.hpp"
#include "annulus/periodic_search.hpp"
#include "doctest.h"

using namespace annulus;

namespace {

std::int64_t binomial(int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

PlaneMap linear(double a, double b, double c, double d, LiftPoint o = {0, 0}) {
    return [=](const LiftPoint& z) {
        const double x = z.x - o.x, t = z.t - o.t;
        return LiftPoint{o.x + a * x + b * t, o.t + c * x + d * t};
    };
}

}  // namespace

TEST_CASE("search finds every itinerary point of the horseshoe") {
    const auto map = build_horseshoe_core();
    for (int q = 1; q <= 4; ++q) {
        for (int p = 0; p <= q; ++p) {
            SearchOptions o;
            o.depth = 9;
            const auto r = find_fixed_points_of_power(map, q, p, o);
            CHECK(static_cast<std::int64_t>(r.orbits.size()) == binomial(q, p));
            // every word with p ones is matched by one found point
            for (int mask = 0; mask < (1 << q); ++mask) {
                if (__builtin_popcount(static_cast<unsigned>(mask)) != p) continue;
                std::string w;
                for (int k = 0; k < q; ++k) w.push_back((mask >> k) & 1 ? '1' : '0');
                const auto s = horseshoe_symbolic_point(w);
                const double x = to_double(s.point.x), t = to_double(s.point.t);
                int hits = 0;
                for (const auto& orb : r.orbits) {
                    if (std::abs(orb.point.x - x) < 1e-9 && std::abs(orb.point.t - t) < 1e-9) {
                        ++hits;
                        CHECK(orb.residual < 1e-10);
                        CHECK(orb.rotation.p == p);
                        REQUIRE(orb.index);
                        CHECK(*orb.index == -1);
                    }
                }
                CHECK(hits == 1);
            }
        }
    }
}

TEST_CASE("search with a wrong deck shift finds nothing") {
    const auto map = build_horseshoe_core();
    const auto r = find_fixed_points_of_power(map, 2, 3);
    CHECK(r.no_candidates());
}

TEST_CASE("search respects deck translations of the window") {
    const auto map = build_horseshoe_core();
    SearchOptions o;
    o.window = {1.0, 1.25, -0.25, 0.0};
    o.depth = 8;
    const auto r = find_fixed_points_of_power(map, 2, 1, o);
    REQUIRE(r.orbits.size() == 2);
    CHECK(r.orbits[0].point.x == doctest::Approx(1.0 + 1.0 / 24.0).epsilon(1e-12));
    CHECK(r.orbits[1].point.x == doctest::Approx(1.0 + 5.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("search validates its inputs") {
    const auto map = build_horseshoe_core();
    CHECK_THROWS_AS(find_fixed_points_of_power(map, 0, 0), ConfigError);
    SearchOptions bad;
    bad.window = {0.2, 0.1, -0.2, 0.0};
    CHECK_THROWS_AS(find_fixed_points_of_power(map, 1, 0, bad), ConfigError);
}

TEST_CASE("fixed point index of linear models") {
    const auto loop = square_loop({0.0, 0.0}, 0.5);
    CHECK(fixed_point_index(linear(0.5, 0, 0, 0.5), loop) == 1);      // contraction
    CHECK(fixed_point_index(linear(2.0, 0, 0, 3.0), loop) == 1);      // source
    CHECK(fixed_point_index(linear(25.0, 0, 0, 0.04), loop) == -1);   // strong saddle
    CHECK(fixed_point_index(linear(0.0, -1.0, 1.0, 0.0), loop) == 1); // rotation
    const PlaneMap shift = [](const LiftPoint& z) { return LiftPoint{z.x + 1.0, z.t}; };
    CHECK(fixed_point_index(shift, loop) == 0);
}

TEST_CASE("index is additive over disjoint loops") {
    // G(z) = (x^2 - t^2 - 1, 2 x t) = z^2 - 1: zeros at (+-1, 0), index +1 each.
    const PlaneMap f = [](const LiftPoint& z) {
        return LiftPoint{z.x + z.x * z.x - z.t * z.t - 1.0, z.t + 2.0 * z.x * z.t};
    };
    // conj(z)^2 - 1 has index -1 at each zero.
    const PlaneMap g = [](const LiftPoint& z) {
        return LiftPoint{z.x + z.x * z.x - z.t * z.t - 1.0, z.t - 2.0 * z.x * z.t};
    };
    const auto big = square_loop({0.0, 0.0}, 2.0);
    const auto left = square_loop({-1.0, 0.0}, 0.4);
    const auto right = square_loop({1.0, 0.0}, 0.4);
    CHECK(fixed_point_index(f, big) == 2);
    CHECK(fixed_point_index(f, left) + fixed_point_index(f, right) == 2);
    CHECK(fixed_point_index(g, big) == -2);
    CHECK(fixed_point_index(g, left) + fixed_point_index(g, right) == -2);
}

TEST_CASE("index rejects loops through fixed points") {
    const auto loop = square_loop({0.5, 0.0}, 0.5);  // passes through the origin
    CHECK_THROWS_AS(fixed_point_index(linear(0.5, 0, 0, 0.5), loop), ZeroOnBoundary);
    CHECK_THROWS_AS(square_loop({0, 0}, 0.0), ConfigError);
}

TEST_CASE("horseshoe index is deck invariant") {
    const auto map = build_horseshoe_core();
    const auto f = power_map(map, 2, 1);
    const LiftPoint z{1.0 / 24.0, -5.0 / 24.0};
    const int here = fixed_point_index(f, square_loop(z, 1e-6));
    const int there = fixed_point_index(f, square_loop(deck(z, 3), 1e-6));
    CHECK(here == -1);
    CHECK(here == there);
}

TEST_CASE("dynamical index of the heteroclinic chain") {
    // Each step taken from R1 (theta in [1/5, 1/4]) adds one deck turn.
    auto r1_steps = [](const std::vector<AnnulusPoint>& pts) {
        std::int64_t n = 0;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) n += pts[k].theta >= 0.2 - 1e-12 ? 1 : 0;
        return n;
    };
    const auto map = build_horseshoe_core();
    for (double eps : {0.1, 0.01, 0.001}) {
        const auto ch = horseshoe_heteroclinic_chain(eps);
        const std::vector<AnnulusPoint> ab(ch.points.begin(), ch.points.begin() + ch.b_index + 1);
        const auto di = chain_dynamical_index(map, ab, 2 * eps);
        CHECK(di.i == static_cast<std::int64_t>(ch.b_index));
        CHECK(di.j == r1_steps(ab));
        const auto full = chain_dynamical_index(map, ch.points, 2 * eps);
        CHECK(full.i == static_cast<std::int64_t>(ch.points.size() - 1));
        CHECK(full.j == r1_steps(ch.points));
    }
    const auto ch = horseshoe_heteroclinic_chain(0.1);
    const std::vector<AnnulusPoint> ab(ch.points.begin(), ch.points.begin() + ch.b_index + 1);
    CHECK(chain_dynamical_index(map, ab, 0.2).j == 1);
    CHECK(chain_dynamical_index(map, ch.points, 0.2).j == 3);
}

TEST_CASE("dynamical indices add under concatenation") {
    const auto map = build_horseshoe_core();
    const auto ch = horseshoe_heteroclinic_chain(0.01);
    const auto mid = ch.points.begin() + static_cast<std::ptrdiff_t>(ch.b_index);
    const std::vector<AnnulusPoint> ab(ch.points.begin(), mid + 1), ba(mid, ch.points.end());
    const auto x = chain_dynamical_index(map, ab, 0.02);
    const auto y = chain_dynamical_index(map, ba, 0.02);
    const auto xy = chain_dynamical_index(map, ch.points, 0.02);
    CHECK(xy.i == x.i + y.i);
    CHECK(xy.j == x.j + y.j);
}

TEST_CASE("dynamical index of periodic orbits") {
    const auto map = build_horseshoe_core();
    const auto s = horseshoe_symbolic_point("01");
    std::vector<AnnulusPoint> chain;
    for (const auto& z : s.orbit) chain.push_back(project(LiftPoint{to_double(z.x), to_double(z.t)}));
    const auto di = chain_dynamical_index(map, chain, 1e-6);
    CHECK(di.i == 2);
    CHECK(di.j == 1);
}

TEST_CASE("dynamical index errors") {
    const auto map = build_horseshoe_core();
    const auto ch = horseshoe_heteroclinic_chain(0.1);
    CHECK_THROWS_AS(chain_dynamical_index(map, ch.points, 0.5), AmbiguousLift);
    CHECK_THROWS_AS(chain_dynamical_index(map, ch.points, 0.01), InvalidChain);
    CHECK_THROWS_AS(chain_dynamical_index(map, {AnnulusPoint{0, 0}}, 0.1), InvalidChain);
    CHECK_THROWS_AS(chain_dynamical_index(map, {{0.1, -0.1}, {0.5, -0.02}}, 0.1), InvalidChain);
}

TEST_CASE("concat solver worked examples") {
    const auto a = concat_solver(1, 0, 0, 2, 5);
    CHECK(a.eta == 5);
    CHECK(a.xi == 10);
    CHECK(a.zeta == 4);
    const auto b = concat_solver(2, 3, 1, 4, 10);
    CHECK(b.eta == 10);
    CHECK(b.xi == 31);
    CHECK(b.zeta == 19);
    CHECK(concat_solver(1, 0, 0, 2).eta == 2);
}

TEST_CASE("concat solver identities on random inputs") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> small(-50, 50), pos(1, 50), gap(2, 30);
    for (int k = 0; k < 1000; ++k) {
        const std::int64_t a = pos(rng), b = small(rng), p1 = small(rng), p2 = p1 + gap(rng);
        const std::int64_t eta_min = small(rng);
        const auto s = concat_solver(a, b, p1, p2, eta_min);
        CHECK(s.eta >= std::max<std::int64_t>(eta_min, 1));
        CHECK(s.zeta >= 1);
        CHECK(s.xi >= 1);
        CHECK(a + s.zeta + s.eta == s.xi);
        CHECK(b + s.zeta * p1 + s.eta * p2 == s.xi * (p1 + 1));
        // minimality: one less either violates eta_min or makes zeta < 1
        const std::int64_t e = s.eta - 1;
        const bool smaller_ok = e >= std::max<std::int64_t>(eta_min, 1) && e * (p2 - p1 - 1) + b - p1 * a - a >= 1;
        CHECK_FALSE(smaller_ok);
    }
}

TEST_CASE("concat solver preconditions") {
    CHECK_THROWS_AS(concat_solver(1, 0, 0, 1), ConfigError);
    CHECK_THROWS_AS(concat_solver(0, 0, 0, 2), ConfigError);
    CHECK_THROWS_AS(concat_solver(1, 0, 0, 2, INT64_MAX), ConfigError);
}
