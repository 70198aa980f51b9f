#include "annulus/periodic_search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "annulus/errors.hpp"

namespace annulus {

PlaneMap power_map(const AnnulusMap& map, std::int64_t q, std::int64_t p, bool extended) {
    if (q < 1) throw ConfigError("power must be >= 1");
    return [map, q, p, extended](const LiftPoint& z) {
        LiftPoint w = z;
        for (std::int64_t k = 0; k < q; ++k) w = extended ? map.eval_extended(w) : map.eval(w);
        return deck(w, -p);
    };
}

std::vector<LiftPoint> square_loop(const LiftPoint& c, double r) {
    if (!(r > 0.0)) throw ConfigError("loop radius must be positive");
    return {{c.x - r, c.t - r}, {c.x + r, c.t - r}, {c.x + r, c.t + r}, {c.x - r, c.t + r}};
}

namespace {

// Samples of G = f - Id at `samples` points evenly spaced in arc length.
std::vector<std::array<double, 2>> sample_loop(const PlaneMap& f, const std::vector<LiftPoint>& loop,
                                               const std::vector<double>& seg, double total, int samples) {
    std::vector<std::array<double, 2>> g(static_cast<std::size_t>(samples));
    std::size_t edge = 0;
    double start = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double arc = total * static_cast<double>(s) / static_cast<double>(samples);
        while (edge + 1 < loop.size() && arc >= start + seg[edge]) start += seg[edge++];
        const auto& a = loop[edge];
        const auto& b = loop[(edge + 1) % loop.size()];
        const double u = seg[edge] > 0.0 ? (arc - start) / seg[edge] : 0.0;
        const LiftPoint z{a.x + u * (b.x - a.x), a.t + u * (b.t - a.t)};
        const LiftPoint w = f(z);
        g[static_cast<std::size_t>(s)] = {w.x - z.x, w.t - z.t};
    }
    return g;
}

}  // namespace

int fixed_point_index(const PlaneMap& f, const std::vector<LiftPoint>& loop, int samples,
                      int max_refinement) {
    if (loop.size() < 3) throw ConfigError("loop needs at least three vertices");
    if (samples < 4 * static_cast<int>(loop.size())) throw ConfigError("too few boundary samples");
    std::vector<double> seg(loop.size());
    double total = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const auto& a = loop[k];
        const auto& b = loop[(k + 1) % loop.size()];
        seg[k] = std::hypot(b.x - a.x, b.t - a.t);
        total += seg[k];
    }
    if (!(total > 0.0)) throw ConfigError("degenerate loop");
    if (max_refinement < 1) throw ConfigError("max_refinement must be >= 1");

    // Anisotropic maps need more samples than the default; refine by doubling.
    const int cap = samples * max_refinement;
    for (int n = samples;; n *= 2) {
        const auto g = sample_loop(f, loop, seg, total, n);
        double min_norm = std::numeric_limits<double>::infinity(), max_step = 0.0;
        for (std::size_t s = 0; s < g.size(); ++s) {
            const auto& a = g[s];
            const auto& b = g[(s + 1) % g.size()];
            min_norm = std::min(min_norm, std::hypot(a[0], a[1]));
            max_step = std::max(max_step, std::hypot(b[0] - a[0], b[1] - a[1]));
        }
        if (!(min_norm > 10.0 * max_step)) {
            if (min_norm > 0.0 && n < cap) continue;
            throw ZeroOnBoundary("G nearly vanishes on the loop (min |G| " + std::to_string(min_norm) +
                                 ", max step " + std::to_string(max_step) + ", " + std::to_string(n) +
                                 " samples)");
        }
        double turn = 0.0;
        bool resolved = true;
        for (std::size_t s = 0; s < g.size() && resolved; ++s) {
            const auto& a = g[s];
            const auto& b = g[(s + 1) % g.size()];
            const double d = std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
            if (std::abs(d) >= M_PI / 2.0) resolved = false;
            turn += d;
        }
        if (resolved) return static_cast<int>(std::lround(turn / (2.0 * M_PI)));
        if (n >= cap) throw UnresolvedWinding("argument step exceeds pi/2 after refinement");
    }
}

namespace {

struct Box {
    double x0, x1, t0, t1;
};

// Sampled fallback: keep the box when, for both components, the samples
// change sign or the center value is within the sampled Lipschitz bound
// times the half diagonal. Can miss roots next to kinks.
bool may_contain_zero(const PlaneMap& f, const Box& b, double safety) {
    const std::array<LiftPoint, 9> pts{{{b.x0, b.t0},
                                        {b.x1, b.t0},
                                        {b.x0, b.t1},
                                        {b.x1, b.t1},
                                        {0.5 * (b.x0 + b.x1), 0.5 * (b.t0 + b.t1)},
                                        {0.5 * (b.x0 + b.x1), b.t0},
                                        {0.5 * (b.x0 + b.x1), b.t1},
                                        {b.x0, 0.5 * (b.t0 + b.t1)},
                                        {b.x1, 0.5 * (b.t0 + b.t1)}}};
    std::array<std::array<double, 2>, 9> g{};
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto w = f(pts[k]);
        g[k] = {w.x - pts[k].x, w.t - pts[k].t};
        if (!std::isfinite(g[k][0]) || !std::isfinite(g[k][1])) return true;
    }
    const double half_diag = 0.5 * std::hypot(b.x1 - b.x0, b.t1 - b.t0);
    for (int c = 0; c < 2; ++c) {
        double lo = g[0][c], hi = g[0][c];
        double lip = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            lo = std::min(lo, g[k][c]);
            hi = std::max(hi, g[k][c]);
            for (std::size_t m = k + 1; m < pts.size(); ++m) {
                const double d = std::hypot(pts[k].x - pts[m].x, pts[k].t - pts[m].t);
                if (d > 0.0) lip = std::max(lip, std::abs(g[k][c] - g[m][c]) / d);
            }
        }
        const bool sign_change = lo <= 0.0 && hi >= 0.0;
        const bool near = std::abs(g[4][c]) <= safety * lip * half_diag;
        if (!sign_change && !near) return false;
    }
    return true;
}

// Interval version for variants with an exact image enclosure: the box
// survives when 0 lies in the enclosure of T^{-p} S^q(box) - box.
bool enclosure_contains_zero(const AnnulusMap& map, const Box& b, std::int64_t q, std::int64_t p) {
    Rect r{b.x0, b.x1, b.t0, b.t1};
    try {
        for (std::int64_t k = 0; k < q; ++k) r = *map.enclose_extended(r);
    } catch (const NumericError&) {
        return true;
    }
    const double gx_lo = r.x0 - static_cast<double>(p) - b.x1, gx_hi = r.x1 - static_cast<double>(p) - b.x0;
    const double gt_lo = r.t0 - b.t1, gt_hi = r.t1 - b.t0;
    return gx_lo <= 0.0 && gx_hi >= 0.0 && gt_lo <= 0.0 && gt_hi >= 0.0;
}

// Damped Newton with a finite-difference Jacobian, abandoned once the
// iterate leaves `fence`.
std::optional<LiftPoint> polish(const PlaneMap& f, LiftPoint z, double scale, const Box& fence) {
    auto G = [&](const LiftPoint& p) {
        const auto w = f(p);
        return std::array<double, 2>{w.x - p.x, w.t - p.t};
    };
    auto norm = [](const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); };
    auto r = G(z);
    for (int it = 0; it < 20 && norm(r) > 1e-15; ++it) {
        const double h = std::max(1e-9, 1e-3 * scale);
        const auto gx = G({z.x + h, z.t});
        const auto gt = G({z.x, z.t + h});
        const double a = (gx[0] - r[0]) / h, b = (gt[0] - r[0]) / h;
        const double c = (gx[1] - r[1]) / h, d = (gt[1] - r[1]) / h;
        const double det = a * d - b * c;
        if (!std::isfinite(det) || det == 0.0) return std::nullopt;
        const double sx = (d * r[0] - b * r[1]) / det;
        const double st = (-c * r[0] + a * r[1]) / det;
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 12; ++k) {
            const LiftPoint cand{z.x - lambda * sx, z.t - lambda * st};
            const auto rc = G(cand);
            if (norm(rc) < norm(r)) {
                z = cand;
                r = rc;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
        if (z.x < fence.x0 || z.x > fence.x1 || z.t < fence.t0 || z.t > fence.t1) return std::nullopt;
        scale = std::max(std::abs(sx), std::abs(st));
    }
    if (!std::isfinite(z.x) || !std::isfinite(z.t)) return std::nullopt;
    return z;
}

}  // namespace

SearchResult find_fixed_points_of_power(const AnnulusMap& map, std::int64_t q, std::int64_t p,
                                        const SearchOptions& options) {
    if (q < 1 || q > 24) throw ConfigError("period must lie in [1, 24]");
    const auto& w = options.window;
    if (!(w.x_lo < w.x_hi) || !(w.t_lo < w.t_hi)) throw ConfigError("search window must be ordered");
    if (options.depth < 0 || options.depth > 30) throw ConfigError("search depth must lie in [0, 30]");
    if (!(options.tol > 0.0)) throw ConfigError("tolerance must be positive");

    const PlaneMap surrogate = power_map(map, q, p, true);
    const bool enclosable = map.enclose_extended(Rect{0.0, 0.0, 0.0, 0.0}).has_value();
    auto keep = [&](const Box& b) {
        return enclosable ? enclosure_contains_zero(map, b, q, p) : may_contain_zero(surrogate, b, options.safety);
    };
    std::vector<Box> boxes{{w.x_lo, w.x_hi, w.t_lo, w.t_hi}};
    if (!keep(boxes.front())) boxes.clear();
    for (int level = 0; level < options.depth && !boxes.empty(); ++level) {
        std::vector<Box> next;
        next.reserve(boxes.size() * 4);
        for (const auto& b : boxes) {
            const double xm = 0.5 * (b.x0 + b.x1), tm = 0.5 * (b.t0 + b.t1);
            for (const Box& c : {Box{b.x0, xm, b.t0, tm}, Box{xm, b.x1, b.t0, tm}, Box{b.x0, xm, tm, b.t1},
                                 Box{xm, b.x1, tm, b.t1}}) {
                if (keep(c)) next.push_back(c);
            }
        }
        if (next.size() > options.max_boxes) {
            throw NumericError("candidate boxes exceed the limit; lower the depth or shrink the window");
        }
        boxes = std::move(next);
    }

    SearchResult result;
    result.surviving_boxes = boxes.size();
    const PlaneMap truth = power_map(map, q, p, false);
    const double slack = 1e-9;
    auto inside = [&](const LiftPoint& z, double x0, double x1, double t0, double t1) {
        return z.x >= x0 - slack && z.x <= x1 + slack && z.t >= t0 - slack && z.t <= t1 + slack;
    };
    auto certify = [&](const LiftPoint& z) -> std::optional<PeriodicOrbit> {
        if (!inside(z, w.x_lo, w.x_hi, w.t_lo, w.t_hi)) return std::nullopt;
        PeriodicOrbit orbit;
        orbit.point = z;
        orbit.q = q;
        orbit.p = p;
        try {
            const auto image = truth(z);
            orbit.residual = std::max(std::abs(image.x - z.x), std::abs(image.t - z.t));
            if (!(orbit.residual < options.tol)) return std::nullopt;
            orbit.rotation = rotation_of_periodic(map, z, q);
        } catch (const NumericError&) {
            return std::nullopt;
        }
        if (orbit.rotation.p != p) return std::nullopt;
        return orbit;
    };
    // Boxes whose Newton starts all fail are split again, up to
    // options.refine_levels more times.
    std::vector<std::pair<Box, int>> work;
    for (auto it = boxes.rbegin(); it != boxes.rend(); ++it) work.push_back({*it, 0});
    while (!work.empty()) {
        const auto [b, extra] = work.back();
        work.pop_back();
        bool known = false;
        for (const auto& o : result.orbits) known = known || inside(o.point, b.x0, b.x1, b.t0, b.t1);
        if (known) continue;
        // Roots next to a seam of the surrogate can defeat Newton from the
        // center, so the quarter points are tried as well.
        const double xs[5] = {0.5, 0.25, 0.75, 0.25, 0.75};
        const double ts[5] = {0.5, 0.25, 0.25, 0.75, 0.75};
        bool settled = false;
        for (int k = 0; k < 5 && !settled; ++k) {
            const LiftPoint start{b.x0 + xs[k] * (b.x1 - b.x0), b.t0 + ts[k] * (b.t1 - b.t0)};
            const double wx = b.x1 - b.x0, wt = b.t1 - b.t0;
            const auto z = polish(surrogate, start, wx, Box{b.x0 - wx, b.x1 + wx, b.t0 - wt, b.t1 + wt});
            if (!z || !inside(*z, b.x0 - wx, b.x1 + wx, b.t0 - wt, b.t1 + wt)) continue;
            const auto g = surrogate(*z);
            if (!(std::max(std::abs(g.x - z->x), std::abs(g.t - z->t)) < options.tol)) continue;
            // A surrogate root in this box or a neighbor, certified or not.
            settled = true;
            auto orbit = certify(*z);
            if (!orbit) continue;
            bool dup = false;
            for (const auto& o : result.orbits) {
                dup = dup || (std::abs(o.point.x - z->x) < options.dedupe && std::abs(o.point.t - z->t) < options.dedupe);
            }
            if (dup) continue;
            try {
                const double r = std::min(1e-7, 0.25 * options.dedupe * 10.0);
                orbit->index = fixed_point_index(surrogate, square_loop(*z, r), options.index_samples);
            } catch (const NumericError&) {
                orbit->index.reset();
            }
            result.orbits.push_back(*orbit);
        }
        if (settled || extra >= options.refine_levels) continue;
        const double xm = 0.5 * (b.x0 + b.x1), tm = 0.5 * (b.t0 + b.t1);
        for (const Box& c : {Box{b.x0, xm, b.t0, tm}, Box{xm, b.x1, b.t0, tm}, Box{b.x0, xm, tm, b.t1},
                             Box{xm, b.x1, tm, b.t1}}) {
            if (keep(c)) work.push_back({c, extra + 1});
        }
    }
    std::sort(result.orbits.begin(), result.orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        return a.point.x < b.point.x || (a.point.x == b.point.x && a.point.t < b.point.t);
    });
    return result;
}

DynamicalIndex chain_dynamical_index(const AnnulusMap& map, const std::vector<AnnulusPoint>& chain,
                                     double delta) {
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (delta >= 0.5) throw AmbiguousLift("delta >= 1/2 does not determine the lifted jumps");
    if (chain.size() < 2) throw InvalidChain("a chain needs at least two points");
    LiftPoint z = lift(AnnulusPoint{wrap_angle(chain.front().theta), chain.front().t});
    for (std::size_t k = 1; k < chain.size(); ++k) {
        LiftPoint image;
        try {
            image = map.eval(z);
        } catch (const OutOfDomain&) {
            throw InvalidChain("chain point " + std::to_string(k - 1) + " lies outside the domain");
        }
        const double th = wrap_angle(chain[k].theta);
        const LiftPoint next{th + std::round(image.x - th), chain[k].t};
        if (!(std::hypot(next.x - image.x, next.t - image.t) < delta)) {
            throw InvalidChain("jump " + std::to_string(k - 1) + " exceeds delta");
        }
        z = next;
    }
    const double th_end = wrap_angle(chain.back().theta);
    return {static_cast<std::int64_t>(chain.size() - 1), static_cast<std::int64_t>(std::llround(z.x - th_end))};
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw ConfigError("concat_solver overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw ConfigError("concat_solver overflow");
    return r;
}

std::int64_t ceil_div(std::int64_t n, std::int64_t d) {
    // d > 0
    std::int64_t q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return q;
}

}  // namespace

ConcatSolution concat_solver(std::int64_t a, std::int64_t b, std::int64_t p1, std::int64_t p2,
                             std::int64_t eta_min) {
    if (a < 1) throw ConfigError("concat_solver needs a >= 1");
    if (!(checked_add(p1, 1) < p2)) throw ConfigError("concat_solver needs p1 + 1 < p2");
    const std::int64_t slope = p2 - p1 - 1;               // >= 1
    const std::int64_t base = checked_add(checked_add(b, -checked_mul(p1, a)), -a);  // zeta at eta = 0
    // zeta >= 1 <=> eta >= (1 - base) / slope; xi = zeta + eta + a > zeta then.
    const std::int64_t need = ceil_div(checked_add(1, -base), slope);
    ConcatSolution s;
    s.eta = std::max({eta_min, std::int64_t{1}, need});
    s.zeta = checked_add(checked_mul(s.eta, slope), base);
    s.xi = checked_add(checked_mul(s.eta, p2 - p1), checked_add(b, -checked_mul(p1, a)));
    return s;
}

}  // namespace annulus
