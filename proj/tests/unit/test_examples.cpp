#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "annulus/errors.hpp"
#include "annulus/examples.hpp"

using namespace annulus;

namespace {

const double kSilver = std::sqrt(2.0) - 1.0;
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

std::vector<std::string> all_words(int max_len) {
    std::vector<std::string> out;
    for (int q = 1; q <= max_len; ++q) {
        for (int m = 0; m < (1 << q); ++m) {
            std::string w;
            for (int k = q - 1; k >= 0; --k) w.push_back(((m >> k) & 1) ? '1' : '0');
            out.push_back(w);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("rotation parameters resolve through the guard") {
    const auto third = RotationParam::parse("1/3");
    CHECK(third.kind == RotationParam::Kind::rational);
    CHECK(third.fraction->q == 3);
    CHECK(RotationParam::parse("0.41421356237309515").kind == RotationParam::Kind::irrational);
    std::vector<std::string> notes;
    const auto r = RotationParam::resolve(0.25, RotationParam::Kind::irrational, &notes);
    CHECK(r.kind == RotationParam::Kind::rational);
    CHECK(notes.size() == 1);
    CHECK_THROWS_AS(RotationParam::parse("abc"), ConfigError);
    CHECK_THROWS_AS(RotationParam::parse("1/0"), ConfigError);
}

TEST_CASE("bump profile") {
    const Bump b{10.0};
    CHECK(b.value(10.0) == 1.0);
    CHECK(b.value(6.0) == 0.0);
    CHECK(b.value(14.0) == 0.0);
    CHECK(b.value(8.0) == doctest::Approx(0.5));
    const double h = 1e-6;
    for (double t : {6.5, 8.3, 10.2, 13.1}) {
        CHECK(b.derivative(t) == doctest::Approx((b.value(t + h) - b.value(t - h)) / (2 * h)).epsilon(1e-6));
        CHECK(std::abs(b.derivative(t)) <= M_PI / 8.0 + 1e-15);
    }
}

TEST_CASE("degenerate parameters give the downward shift off the bumps") {
    const PaperExample ex(RotationParam::resolve(0.0), RotationParam::resolve(0.0));
    const auto z = ex.eval({0.37, 3.0});
    CHECK(z.x == 0.37);
    CHECK(z.t == 2.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
        const double x = u(rng), t = u(rng);
        const auto w = ex.eval({x, t});
        CHECK(w.x == doctest::Approx(x));
        CHECK(w.t == doctest::Approx(t - 1.0));
    }
}

TEST_CASE("level fifteen maps onto level fourteen") {
    const PaperExample ex(RotationParam::resolve(1.0 / 3.0), RotationParam::resolve(1.0 / 3.0));
    for (int k = 0; k < 50; ++k) {
        const double th = k / 50.0;
        CHECK(ex.eval({th, 15.0}).t == 14.0);
        CHECK(ex.eval({th, 15.0}).x == doctest::Approx(th + 1.0 / 3.0));
    }
}

TEST_CASE("zero set of g at t = 10 for alpha = 1/3") {
    const PaperExample ex(RotationParam::resolve(1.0 / 3.0), RotationParam::resolve(kSilver));
    const int n = 1 << 12;
    const std::vector<double> roots{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    std::vector<int> hits(roots.size(), 0);
    for (int k = 0; k < n; ++k) {
        const double th = static_cast<double>(k) / n;
        const double v = ex.g(th, 10.0);
        CHECK(v == doctest::Approx(0.5 * std::pow(std::sin(3.0 * M_PI * th), 2)).epsilon(1e-12));
        if (v < 1e-6) {
            bool near = false;
            for (std::size_t r = 0; r < roots.size(); ++r) {
                if (std::abs(th - roots[r]) <= 1.0 / n) {
                    near = true;
                    ++hits[r];
                }
            }
            CHECK(near);
        }
    }
    CHECK(ex.g(0.0, 10.0) == 0.0);
    CHECK(hits[0] > 0);
    CHECK(hits[1] > 0);
    CHECK(hits[2] > 0);
}

TEST_CASE("construction conditions on sampled points") {
    const PaperExample ex(RotationParam::resolve(kGolden), RotationParam::resolve(kSilver));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> th(0.0, 1.0);
    std::uniform_real_distribution<double> tt(-20.0, 20.0);
    std::uniform_real_distribution<double> near10(9.0, 11.0);
    for (int k = 0; k < 2000; ++k) {
        const double a = th(rng), t = tt(rng);
        const double v = ex.g(a, t);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        if (std::abs(std::abs(t) - 10.0) >= 4.0) CHECK(v == 1.0);
        // (d)
        const double s = near10(rng);
        CHECK(ex.g(a, s) > ex.f_alpha().g_alpha(a) - 1e-15);
        // (f)
        const double h = 1e-5;
        CHECK(std::abs((ex.g(a, t + h) - ex.g(a, t - h)) / (2 * h)) < 0.5);
        // (g)
        const double x = th(rng) * 4.0 - 2.0;
        const double hi = 5.0 + std::abs(t);
        CHECK(std::abs(ex.phi(x, hi) - ex.f_alpha().eval(x)) <= 1e-12);
        CHECK(std::abs(ex.phi(x, -hi) - ex.f_beta().eval(x)) <= 1e-12);
    }
    // (c): zeros only on the minimal sets at t = +-10.
    const auto i0 = ex.f_alpha().interval(0);
    CHECK(ex.g(i0.left + 0.5 * i0.length, 10.0) > 0.0);
    CHECK(ex.g(i0.left, 10.0) == 0.0);
    CHECK(ex.g(i0.left, 10.5) > 0.0);
}

TEST_CASE("skew example inverse") {
    const PaperExample ex(RotationParam::resolve(1.0 / 3.0), RotationParam::resolve(kSilver));
    const auto back = ex.inverse({0.4, 20.0});
    CHECK(back.x == doctest::Approx(0.4 - 1.0 / 3.0));
    CHECK(back.t == doctest::Approx(21.0).epsilon(1e-12));
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    std::uniform_real_distribution<double> ut(-25.0, 25.0);
    double worst = 0.0;
    for (int k = 0; k < 3000; ++k) {
        const LiftPoint p{ux(rng), ut(rng)};
        const auto q = ex.inverse(ex.eval(p));
        worst = std::max({worst, std::abs(q.x - p.x), std::abs(q.t - p.t)});
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("horseshoe branches") {
    const HorseshoeCore h;
    CHECK(h.eval({0.0, -0.2}).x == 0.0);
    const auto a = h.eval({0.04, -0.2});
    CHECK(a.x == doctest::Approx(0.2));
    CHECK(a.t == doctest::Approx(-0.04));
    const auto b = h.eval({0.22, -0.1});
    CHECK(b.x == doctest::Approx(1.1));  // 5*0.22 = 1.1 = 0.1 plus one deck turn
    CHECK(b.t == doctest::Approx(-0.22));
    CHECK_THROWS_AS(h.eval({0.1, -0.2}), OutOfDomain);
    CHECK_THROWS_AS(h.eval({0.0, 0.1}), OutOfDomain);
    const auto back = h.inverse({0.2, -0.04});
    CHECK(back.x == doctest::Approx(0.04));
    CHECK(back.t == doctest::Approx(-0.2));
    CHECK(h.eval({0.0, 0.0}) == LiftPoint{0.0, 0.0});
    CHECK(h.eval({0.25, -0.25}) == LiftPoint{1.25, -0.25});
}

TEST_CASE("horseshoe exact corners and fixed points") {
    const HorseshoeCore h;
    const auto c0 = h.eval(ExactLiftPoint{Rational(1, 20), Rational(0)});
    CHECK(c0.x == Rational(1, 4));
    CHECK(c0.t == Rational(0));
    const auto c1 = h.eval(ExactLiftPoint{Rational(1, 5), Rational(-1, 4)});
    CHECK(c1.x == Rational(1));
    CHECK(c1.t == Rational(-1, 4));
    const ExactLiftPoint a{Rational(0), Rational(0)}, b{Rational(1, 4), Rational(-1, 4)};
    CHECK(h.eval(a) == a);
    CHECK(h.eval(b) == deck(b, 1));
}

TEST_CASE("extended horseshoe agrees with the core on the domain") {
    const HorseshoeCore h;
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const double th = u(rng) < 0.5 ? u(rng) / 20.0 : 0.2 + u(rng) / 20.0;
        const LiftPoint p{th + std::floor(u(rng) * 6.0) - 3.0, -0.25 * u(rng)};
        const auto e = h.eval_extended(p);
        const auto c = h.eval(p);
        CHECK(e.x == doctest::Approx(c.x).epsilon(1e-13));
        CHECK(e.t == doctest::Approx(c.t).epsilon(1e-13));
    }
    // Continuity and degree one across the seams.
    for (double s : {-0.125, 0.05, 0.2, 0.375, 0.875}) {
        const auto l = h.eval_extended({s - 1e-12, -0.1});
        const auto r = h.eval_extended({s + 1e-12, -0.1});
        CHECK(std::abs(l.x - r.x) < 1e-10);
        CHECK(std::abs(l.t - r.t) < 1e-10);
    }
    const auto p = h.eval_extended({0.6, -0.1});
    const auto q = h.eval_extended({1.6, -0.1});
    CHECK(q.x - p.x == doctest::Approx(1.0));
}

TEST_CASE("symbolic periodic points") {
    auto s0 = horseshoe_symbolic_point("0");
    CHECK(s0.point.x == Rational(0));
    CHECK(s0.point.t == Rational(0));
    CHECK(s0.p == 0);
    auto s1 = horseshoe_symbolic_point("1");
    CHECK(s1.point.x == Rational(1, 4));
    CHECK(s1.point.t == Rational(-1, 4));
    CHECK(s1.p == 1);
    auto s01 = horseshoe_symbolic_point("01");
    CHECK(s01.point.x == Rational(1, 24));
    CHECK(s01.point.t == Rational(-5, 24));
    CHECK(s01.p == 1);
    CHECK(s01.orbit[1].x == Rational(5, 24));
    CHECK(s01.orbit[1].t == Rational(-1, 24));

    const HorseshoeCore h;
    for (const auto& w : all_words(6)) {
        const auto s = horseshoe_symbolic_point(w);
        std::int64_t ones = 0;
        for (char c : w) ones += c == '1';
        CHECK(s.p == ones);
        CHECK(s.q == static_cast<std::int64_t>(w.size()));
        ExactLiftPoint z = s.point;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const auto br = HorseshoeCore::branch(z);
            REQUIRE(br);
            CHECK(*br == w[k] - '0');
            z = h.eval(z);
        }
        CHECK(z == deck(s.point, ones));
    }
    CHECK_THROWS_AS(horseshoe_symbolic_point(""), ConfigError);
    CHECK_THROWS_AS(horseshoe_symbolic_point("012"), ConfigError);
}

TEST_CASE("heteroclinic chains are valid epsilon chains") {
    const HorseshoeCore h;
    for (double eps : {0.1, 0.01, 0.001}) {
        const auto chain = horseshoe_heteroclinic_chain(eps);
        REQUIRE(chain.points.size() >= 3);
        CHECK(chain.points.front() == AnnulusPoint{0.0, 0.0});
        CHECK(chain.points.back() == AnnulusPoint{0.0, 0.0});
        CHECK(chain.points[chain.b_index] == AnnulusPoint{0.25, -0.25});
        for (std::size_t k = 0; k + 1 < chain.points.size(); ++k) {
            const auto img = project(h.eval(lift(chain.points[k])));
            CHECK(annulus_distance(img, chain.points[k + 1]) < eps);
        }
        if (eps == 0.1) CHECK(chain.points.size() <= 30);
    }
    CHECK_THROWS_AS(horseshoe_heteroclinic_chain(0.0), ConfigError);
}

TEST_CASE("horseshoe enclosure contains sampled images") {
    const HorseshoeCore h;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pos(-1.5, 1.5), len(0.0, 0.3), unit(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const double x0 = pos(rng), t0 = pos(rng) * 0.2;
        const Rect r{x0, x0 + len(rng), t0, t0 + len(rng)};
        const Rect e = h.enclose_extended(r);
        for (int s = 0; s < 50; ++s) {
            const LiftPoint z{r.x0 + unit(rng) * (r.x1 - r.x0), r.t0 + unit(rng) * (r.t1 - r.t0)};
            const auto w = h.eval_extended(z);
            CHECK(w.x >= e.x0 - 1e-12);
            CHECK(w.x <= e.x1 + 1e-12);
            CHECK(w.t >= e.t0 - 1e-12);
            CHECK(w.t <= e.t1 + 1e-12);
        }
    }
    // On an affine piece the enclosure is the exact image.
    const Rect e = h.enclose_extended(Rect{0.01, 0.02, -0.2, -0.1});
    CHECK(e.x0 == doctest::Approx(0.05));
    CHECK(e.x1 == doctest::Approx(0.1));
    CHECK(e.t0 == doctest::Approx(-0.04));
    CHECK(e.t1 == doctest::Approx(-0.02));
}
