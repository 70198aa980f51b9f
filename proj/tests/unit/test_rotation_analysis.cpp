#include <cmath>
#include <string>

#include <boost/rational.hpp>

#include "annulus/errors.hpp"
#include "annulus/rotation_analysis.hpp"
#include "doctest.h"

using namespace annulus;

namespace {

using Q = boost::rational<std::int64_t>;

// Independent exact simulation of the two affine horseshoe branches on the
// lift: theta in [0,1/20] -> (5 theta, t/5), theta in [1/5,1/4] -> (5 theta, t/5 - 1/5).
std::vector<Q> lifted_x_orbit(Q x, Q t, int steps) {
    std::vector<Q> xs{x};
    for (int k = 0; k < steps; ++k) {
        const std::int64_t n = x.numerator() >= 0 ? x.numerator() / x.denominator()
                                                  : -((-x.numerator() + x.denominator() - 1) / x.denominator());
        const Q th = x - n;
        if (th <= Q(1, 20)) {
            t = t / 5;
        } else {
            REQUIRE(th >= Q(1, 5));
            REQUIRE(th <= Q(1, 4));
            t = t / 5 - Q(1, 5);
        }
        x = Q(n) + th * 5;
        xs.push_back(x);
    }
    return xs;
}

}  // namespace

TEST_CASE("rotation of symbolic periodic points is ones over length") {
    const auto map = build_horseshoe_core();
    for (const std::string w : {"0", "1", "01", "001", "011", "0111", "00101"}) {
        const auto s = horseshoe_symbolic_point(w);
        const auto r = rotation_of_periodic(map, s.point, s.q);
        CHECK(r.q == static_cast<std::int64_t>(w.size()));
        CHECK(r.p == std::count(w.begin(), w.end(), '1'));
        if (w.size() <= 3) {
            const auto f = rotation_of_periodic(map, LiftPoint{to_double(s.point.x), to_double(s.point.t)}, s.q);
            CHECK(f.p == r.p);
        }
    }
    CHECK(RationalRot{2, 4}.reduced() == "1/2");
}

TEST_CASE("rotation_of_periodic rejects non periodic points") {
    const auto rigid = build_rigid_translation(1.0 / 3.0, -1.0);
    CHECK_THROWS_AS(rotation_of_periodic(rigid, LiftPoint{0.1, 0.0}, 3), NotPeriodic);
    const auto still = build_rigid_translation(0.5, 0.0);
    CHECK(rotation_of_periodic(still, LiftPoint{0.1, 0.0}, 2).p == 1);
    const auto shifted = build_rigid_translation(0.3, 0.0);
    CHECK_THROWS_AS(rotation_of_periodic(shifted, LiftPoint{0.1, 0.0}, 2), NotPeriodic);
}

TEST_CASE("Atkinson small sums agree with an exact simulation") {
    const auto map = build_horseshoe_core();
    const auto s = horseshoe_symbolic_point("01");
    for (const double eps : {0.05, 0.2, 0.4, 1.1}) {
        const auto got = atkinson_small_sums(map, s.point, 0, 1, eps, 100);
        const auto xs = lifted_x_orbit(s.point.x, s.point.t, 100);
        std::vector<std::int64_t> want;
        for (std::int64_t n = 1; n <= 100; ++n) {
            const Q sum = xs[static_cast<std::size_t>(n)] - xs[0];
            if (std::abs(boost::rational_cast<double>(sum)) < eps) want.push_back(n);
        }
        CHECK(got == want);
    }
    CHECK(atkinson_small_sums(map, s.point, 0, 1, 0.4, 100) == std::vector<std::int64_t>{1});
    // With p = 1, q = 2 every even n returns exactly.
    const auto even = atkinson_small_sums(map, s.point, 1, 2, 1e-9, 10);
    CHECK(even == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
}

TEST_CASE("rotation interval of the horseshoe class") {
    const auto map = build_horseshoe_core();
    const Grid g(Window::horseshoe(), 6);
    const auto dg = transition_graph(map, g);
    const auto c = chain_classes(dg);
    const auto id = class_containing(dg, c, AnnulusPoint{0.0, 0.0});
    REQUIRE(id);
    const auto ri = rotation_interval_of_class(dg, c, *id);
    CHECK(ri.method == "cycle-mean");
    CHECK(ri.contains(0.0, 1.0));
    CHECK(ri.lo >= -ri.slack);
    CHECK(ri.hi <= 1.0 + ri.slack);
    const auto hull = rotation_interval_of_recurrent_set(dg, c);
    CHECK(hull.contains(ri.lo, ri.hi));

    const auto pw = power_rotation_check(map, dg, c, *id, 2);
    CHECK(pw.pass);
    CHECK(pw.deviation <= pw.allowed);
}

TEST_CASE("prime end estimates on the rigid example") {
    const auto map = build_rigid_translation(0.3, -1.0);
    const auto plus = prime_end_rotation_estimate(map, AnnulusPoint{0.2, 20.0}, 1000, End::plus);
    CHECK(plus.value == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(plus.complete);
    const auto minus = prime_end_rotation_estimate(map, AnnulusPoint{0.2, -20.0}, 1000, End::minus);
    CHECK(minus.value == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("prime end estimates on the two-ended example") {
    const double beta = std::sqrt(2.0) - 1.0;
    const auto map = build_paper_example(1.0 / 3.0, beta);
    const auto plus = prime_end_rotation_estimate(map, AnnulusPoint{0.0, 20.0}, 3000, End::plus);
    CHECK(std::abs(plus.value - 1.0 / 3.0) < 1e-3);
    const auto minus = prime_end_rotation_estimate(map, AnnulusPoint{0.0, -20.0}, 3000, End::minus);
    CHECK(std::abs(minus.value - beta) < 1e-3);
}

TEST_CASE("prime end estimate needs basin evidence") {
    const auto map = build_horseshoe_core();
    CHECK_THROWS_AS(prime_end_rotation_estimate(map, AnnulusPoint{0.0, 0.0}, 10, End::plus), NotInBasin);
    const auto rigid = build_rigid_translation(0.3, -1.0);
    CHECK_THROWS_AS(prime_end_rotation_estimate(rigid, AnnulusPoint{0.0, 0.0}, 0, End::plus), ConfigError);
}
