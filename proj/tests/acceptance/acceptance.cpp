// Desk-scale acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "annulus/conley.hpp"
#include "annulus/errors.hpp"
#include "annulus/periodic_search.hpp"
#include "annulus/rotation_analysis.hpp"

using namespace annulus;

namespace {

const double kSilver = std::sqrt(2.0) - 1.0;
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Depth-8 horseshoe digraph shared by several criteria.
struct Horseshoe8 {
    AnnulusMap map = build_horseshoe_core();
    Grid grid{Window::horseshoe(), 8};
    BoxDigraph dg;
    Condensation cond;
    std::optional<std::size_t> class_a, class_b;

    Horseshoe8() {
        dg = transition_graph(map, grid);
        cond = chain_classes(dg);
        class_a = class_containing(dg, cond, AnnulusPoint{0.0, 0.0});
        class_b = class_containing(dg, cond, AnnulusPoint{0.25, -0.25});
    }
};

const Horseshoe8& horseshoe8() {
    static const Horseshoe8 h;
    return h;
}

std::vector<std::string> words_with(int q, int p) {
    std::vector<std::string> out;
    for (int m = 0; m < (1 << q); ++m) {
        if (__builtin_popcount(static_cast<unsigned>(m)) != p) continue;
        std::string w;
        for (int k = q - 1; k >= 0; --k) w.push_back(((m >> k) & 1) ? '1' : '0');
        out.push_back(w);
    }
    return out;
}

Outcome prime_end_numbers() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto map = build_paper_example(1.0 / 3.0, kSilver);
    const auto plus = prime_end_rotation_estimate(map, AnnulusPoint{0.0, 20.0}, 10000, End::plus);
    const auto minus = prime_end_rotation_estimate(map, AnnulusPoint{0.0, -20.0}, 10000, End::minus);
    const double dt = seconds_since(t0);
    const bool ok = std::abs(plus.value - 1.0 / 3.0) <= 1e-3 && std::abs(minus.value - kSilver) <= 1e-3 &&
                    plus.complete && minus.complete && dt < 60.0;
    return {ok, "plus " + fmt("%.6f", plus.value) + ", minus " + fmt("%.6f", minus.value) + ", " +
                    fmt("%.1f s", dt)};
}

Outcome horseshoe_fixed_points() {
    const auto map = build_horseshoe_core();
    bool ok = true;
    std::ostringstream d;
    const LiftPoint want[2] = {{0.0, 0.0}, {0.25, -0.25}};
    for (int p = 0; p <= 1; ++p) {
        const auto r = find_fixed_points_of_power(map, 1, p);
        ok = ok && r.orbits.size() == 1;
        if (r.orbits.size() != 1) continue;
        const auto& o = r.orbits.front();
        ok = ok && o.residual < 1e-10 && std::abs(o.point.x - want[p].x) < 1e-10 &&
             std::abs(o.point.t - want[p].t) < 1e-10 && o.rotation.p == p && o.rotation.q == 1;
        const auto exact = horseshoe_symbolic_point(p == 0 ? "0" : "1");
        const auto rot = rotation_of_periodic(map, exact.point, 1);
        ok = ok && rot.p == p && rot.q == 1;
        // Conversely, the deck reading of a point with h(x) = T^p(x).
        ok = ok && map.eval_exact(exact.point) == deck(exact.point, p);
        d << (p == 0 ? "a" : " b") << " residual " << o.residual << " rot " << rot.p << "/" << rot.q;
    }
    return {ok, d.str()};
}

Outcome symbolic_orbits() {
    const auto map = build_horseshoe_core();
    const auto& h8 = horseshoe8();
    if (!h8.class_a) return {false, "box of a is not in any class"};
    std::size_t words = 0, found = 0, in_class = 0, points = 0;
    bool exact_ok = true;
    double worst = 0.0;
    for (int q = 1; q <= 6; ++q) {
        for (int p = 0; p <= q; ++p) {
            const auto r = find_fixed_points_of_power(map, q, p);
            for (const auto& w : words_with(q, p)) {
                ++words;
                const auto s = horseshoe_symbolic_point(w);
                exact_ok = exact_ok && iterate(map, s.point, q) == deck(s.point, p);
                const double x = to_double(s.point.x), t = to_double(s.point.t);
                double best = 1.0;
                for (const auto& o : r.orbits) best = std::min(best, std::max(std::abs(o.point.x - x), std::abs(o.point.t - t)));
                if (best < 1e-8) ++found;
                worst = std::max(worst, best);
                for (std::int64_t k = 0; k < q; ++k) {
                    const auto& z = s.orbit[static_cast<std::size_t>(k)];
                    ++points;
                    const auto c = class_containing(h8.dg, h8.cond, project(LiftPoint{to_double(z.x), to_double(z.t)}));
                    if (c && *c == *h8.class_a) ++in_class;
                }
            }
        }
    }
    const bool ok = exact_ok && found == words && in_class == points;
    std::ostringstream d;
    d << words << " words, exact " << (exact_ok ? "yes" : "no") << ", located " << found << ", worst "
      << worst << ", orbit boxes in class " << in_class << "/" << points;
    return {ok, d.str()};
}

Outcome chain_transitivity() {
    const auto map = build_horseshoe_core();
    const auto ch = horseshoe_heteroclinic_chain(0.01);
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < ch.points.size(); ++k) {
        const auto img = project(map.eval(lift(ch.points[k])));
        worst = std::max(worst, annulus_distance(img, ch.points[k + 1]));
    }
    const auto& h8 = horseshoe8();
    const bool same = h8.class_a && h8.class_b && *h8.class_a == *h8.class_b && h8.cond.classes[*h8.class_a].recurrent;
    std::ostringstream d;
    d << ch.points.size() << " points, worst jump " << worst << ", eps " << h8.dg.eps()
      << ", a and b " << (same ? "share" : "do not share") << " a recurrent class";
    return {worst <= 0.01 && same, d.str()};
}

Outcome rotation_interval_refines() {
    const auto& h8 = horseshoe8();
    if (!h8.class_a) return {false, "no class at a"};
    const auto ri8 = rotation_interval_of_class(h8.dg, h8.cond, *h8.class_a);
    const bool coarse = ri8.contains(0.0, 1.0) && ri8.lo >= -0.15 && ri8.hi <= 1.15;

    const Grid g10(Window::horseshoe(), 10);
    TransitionOptions opt;
    opt.active = refine_mask(h8.grid, recurrent_mask(h8.dg, h8.cond), g10, 1);
    const auto dg10 = transition_graph(h8.map, g10, opt);
    const auto c10 = chain_classes(dg10);
    const auto id10 = class_containing(dg10, c10, AnnulusPoint{0.0, 0.0});
    if (!id10) return {false, "no class at a on depth 10"};
    const auto ri10 = rotation_interval_of_class(dg10, c10, *id10);
    const bool fine = ri10.contains(0.0, 1.0) && ri8.contains(ri10.lo, ri10.hi) && ri10.slack < ri8.slack;
    std::ostringstream d;
    d << "depth 8 [" << ri8.lo << ", " << ri8.hi << "] slack " << ri8.slack << "; depth 10 [" << ri10.lo
      << ", " << ri10.hi << "] slack " << ri10.slack;
    return {coarse && fine, d.str()};
}

Outcome complete_lyapunov() {
    const auto& h8 = horseshoe8();
    const auto l = lyapunov(h8.dg, h8.cond);
    const auto chk = verify_lyapunov(h8.dg, h8.cond, l);
    bool identity = true;
    std::ostringstream d;
    d << "depth 8: " << chk.decreasing << "/" << chk.cross_edges << " cross edges decrease, plateaus "
      << (chk.plateaus_cantor ? "Cantor" : "not Cantor");
    for (int depth : {4, 6}) {
        const auto dg = transition_graph(h8.map, Grid(Window::horseshoe(), depth));
        const auto c = chain_classes(dg);
        const auto rep = attractor_pairs(dg, c);
        const bool ok = !rep.cap_exceeded && rep.identity_holds && *rep.identity_holds;
        identity = identity && ok;
        d << "; depth " << depth << ": " << rep.pairs.size() << " pairs, identity " << (ok ? "holds" : "fails");
    }
    return {chk.ok() && identity, d.str()};
}

Outcome power_scaling() {
    const auto& h8 = horseshoe8();
    if (!h8.class_a) return {false, "no class at a"};
    const auto r = power_rotation_check(h8.map, h8.dg, h8.cond, *h8.class_a, 2);
    std::ostringstream d;
    d << "h [" << r.base.lo << ", " << r.base.hi << "], h^2 [" << r.power.lo << ", " << r.power.hi
      << "], deviation " << r.deviation;
    return {r.deviation < 0.3, d.str()};
}

Outcome fixed_point_indices() {
    const auto map = build_horseshoe_core();
    std::ostringstream d;
    bool ok = true;
    try {
        const int ia = fixed_point_index(power_map(map, 1, 0), square_loop({0.0, 0.0}, 1e-3), 1024, 1);
        const int ib = fixed_point_index(power_map(map, 1, 1), square_loop({0.25, -0.25}, 1e-3), 1024, 1);
        const PlaneMap contraction = [](const LiftPoint& z) { return LiftPoint{0.5 * z.x, 0.5 * z.t}; };
        const int ic = fixed_point_index(contraction, square_loop({0.0, 0.0}, 1.0), 1024, 1);
        // Loop in the gap between R0 and R1: no fixed point inside.
        const int ie = fixed_point_index(power_map(map, 1, 0), square_loop({0.125, -0.125}, 0.05), 1024, 1);
        ok = ia == -1 && ib == -1 && ic == 1 && ie == 0;
        d << "a " << ia << ", b " << ib << ", contraction " << ic << ", empty loop " << ie;
    } catch (const Error& e) {
        return {false, e.what()};
    }
    return {ok, d.str()};
}

Outcome atkinson() {
    const auto map = build_horseshoe_core();
    const auto s = horseshoe_symbolic_point("01");
    const auto n = atkinson_small_sums(map, s.point, 1, 2, 1e-9, 10000);
    return {n.size() == 10000, std::to_string(n.size()) + " of 10000 qualify"};
}

Outcome concatenation() {
    const auto w = concat_solver(1, 0, 0, 2, 5);
    bool ok = w.xi == 10 && w.zeta == 4 && 1 + w.zeta + w.eta == w.xi && 0 + w.zeta * 0 + w.eta * 2 == w.xi * 1;
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> small(-1000, 1000), pos(1, 1000), gap(2, 500);
    int good = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::int64_t a = pos(rng), b = small(rng), p1 = small(rng), p2 = p1 + gap(rng);
        const auto s = concat_solver(a, b, p1, p2, small(rng));
        if (a + s.zeta + s.eta == s.xi && b + s.zeta * p1 + s.eta * p2 == s.xi * (p1 + 1) && s.zeta >= 1) ++good;
    }
    ok = ok && good == 1000;
    return {ok, "worked example (xi, zeta) = (" + std::to_string(w.xi) + ", " + std::to_string(w.zeta) + "), " +
                    std::to_string(good) + "/1000 random inputs"};
}

Outcome construction_invariants() {
    const PaperExample ex(RotationParam::resolve(kGolden), RotationParam::resolve(kSilver));
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> th(0.0, 1.0), tt(-20.0, 20.0), band(9.0, 11.0);
    std::size_t bad_c = 0, bad_d = 0, bad_f = 0, bad_g = 0, bad_level = 0;
    double worst_slope = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double a = th(rng), t = tt(rng);
        const double v = ex.g(a, t);
        if (!(v > 0.0 && v <= 1.0)) ++bad_c;
        // equality in (d) only on the levels t = +-10
        const double s = band(rng);
        if (!(ex.g(a, s) > ex.f_alpha().g_alpha(a))) ++bad_d;
        if (!(ex.g(a, -s) > ex.f_beta().g_alpha(a))) ++bad_d;
        if (std::abs(ex.g(a, 10.0) - ex.f_alpha().g_alpha(a)) > 1e-15 ||
            std::abs(ex.g(a, -10.0) - ex.f_beta().g_alpha(a)) > 1e-15) {
            ++bad_d;
        }
        const double h = 1e-6;
        const double slope = std::abs((ex.g(a, t + h) - ex.g(a, t - h)) / (2.0 * h));
        worst_slope = std::max(worst_slope, slope);
        if (!(slope < 0.5)) ++bad_f;
        const double x = 4.0 * th(rng) - 2.0;
        const double hi = 5.0 + std::abs(t);
        if (std::abs(ex.phi(x, hi) - ex.f_alpha().eval(x)) > 1e-12) ++bad_g;
        if (std::abs(ex.phi(x, -hi) - ex.f_beta().eval(x)) > 1e-12) ++bad_g;
        const auto z = ex.eval({a, 15.0});
        if (z.t != 14.0 || std::abs(z.x - ex.f_alpha().eval(a)) > 1e-12) ++bad_level;
    }
    // zeros sit on the minimal sets at t = +-10
    const double ca = ex.f_alpha().interval(0).left, cb = ex.f_beta().interval(0).left;
    if (ex.g(ca, 10.0) != 0.0 || ex.g(cb, -10.0) != 0.0) ++bad_c;
    std::ostringstream d;
    d << "violations (c) " << bad_c << ", (d) " << bad_d << ", (f) " << bad_f << " (max slope " << worst_slope
      << "), (g) " << bad_g << ", level map " << bad_level;
    return {bad_c + bad_d + bad_f + bad_g + bad_level == 0, d.str()};
}

Outcome one_sided_basins() {
    const auto rational = build_paper_example(1.0 / 3.0, kSilver);
    const auto stuck = classify_basin(rational, AnnulusPoint{0.0, 8.0}, 15.0, -15.0, 10000);
    const auto gap = classify_basin(rational, AnnulusPoint{1.0 / 6.0, 8.0}, 15.0, -15.0, 10000);
    const auto denjoy = build_paper_example(kGolden, kSilver);
    const auto i0 = denjoy.as<PaperExample>()->f_alpha().interval(0);
    const auto center = classify_basin(denjoy, AnnulusPoint{i0.left + 0.5 * i0.length, 8.0}, 15.0, -15.0, 10000);
    const bool ok = !stuck.plus && stuck.max_backward_t < 10.5 && gap.plus && center.plus &&
                    center.verdict() == Basin::plus;
    std::ostringstream d;
    d << "minimal-set point (alpha 1/3) peaks at t = " << stuck.max_backward_t << "; gap centers " << to_string(gap.verdict()) << " after " << gap.plus_steps << ", "
      << to_string(center.verdict()) << " after " << center.plus_steps;
    return {ok, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"prime-end rotation numbers 1/3 and sqrt2-1", prime_end_numbers},
        {"horseshoe fixed points and their deck readings", horseshoe_fixed_points},
        {"every rotation p/q with q <= 6 realized and located", symbolic_orbits},
        {"a and b chain equivalent", chain_transitivity},
        {"rotation interval and refinement", rotation_interval_refines},
        {"complete Lyapunov function and attractor identity", complete_lyapunov},
        {"power scaling of the rotation interval", power_scaling},
        {"fixed point indices", fixed_point_indices},
        {"Atkinson small sums", atkinson},
        {"concatenation identities", concatenation},
        {"construction invariants", construction_invariants},
        {"one-sided basin checks", one_sided_basins},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu  %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
