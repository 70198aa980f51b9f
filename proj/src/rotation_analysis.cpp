#include "annulus/rotation_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annulus/errors.hpp"

namespace annulus {

std::string RationalRot::reduced() const {
    const std::int64_t g = std::gcd(p, q);
    const std::int64_t a = g ? p / g : p, b = g ? q / g : q;
    return std::to_string(a) + "/" + std::to_string(b);
}

RationalRot rotation_of_periodic(const AnnulusMap& map, const LiftPoint& p, std::int64_t q, double tol) {
    if (q < 1) throw ConfigError("period must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("lift tolerance must be positive");
    const LiftPoint z = iterate(map, p, q);
    const double delta = z.x - p.x;
    if (!std::isfinite(delta) || !std::isfinite(z.t)) throw NotLifted("non-finite displacement");
    if (annulus_distance(project(z), project(p)) >= tol) {
        throw NotPeriodic("h^q does not return to the point (distance " +
                          std::to_string(annulus_distance(project(z), project(p))) + ")");
    }
    const double k = std::round(delta);
    if (std::abs(delta - k) >= tol) throw NotLifted("lift displacement is not near an integer");
    return {static_cast<std::int64_t>(k), q};
}

RationalRot rotation_of_periodic(const AnnulusMap& map, const ExactLiftPoint& p, std::int64_t q) {
    if (q < 1) throw ConfigError("period must be >= 1");
    const ExactLiftPoint z = iterate(map, p, q);
    const Rational delta = z.x - p.x;
    if (z.t != p.t || delta.denominator() != 1) {
        throw NotPeriodic("h^q does not return to the point exactly");
    }
    return {delta.numerator(), q};
}

RotationInterval rotation_interval_of_class(const BoxDigraph& dg, const Condensation& c,
                                            std::size_t class_id) {
    if (class_id >= c.classes.size()) throw ConfigError("class id out of range");
    const auto& cls = c.classes[class_id];
    if (!cls.recurrent) throw ConfigError("rotation interval needs a recurrent class");
    const auto m = cycle_means(dg, cls.nodes);
    RotationInterval r;
    r.lo = m.min_mean;
    r.hi = m.max_mean;
    r.slack = dg.eps() + dg.grid().box_diameter();
    return r;
}

RotationInterval rotation_interval_of_recurrent_set(const BoxDigraph& dg, const Condensation& c) {
    const auto ids = c.recurrent_ids();
    if (ids.empty()) throw ConfigError("digraph has no recurrent class");
    RotationInterval out = rotation_interval_of_class(dg, c, ids.front());
    for (std::size_t k = 1; k < ids.size(); ++k) {
        const auto r = rotation_interval_of_class(dg, c, ids[k]);
        out.lo = std::min(out.lo, r.lo);
        out.hi = std::max(out.hi, r.hi);
    }
    return out;
}

PowerReport power_rotation_check(const AnnulusMap& map, const BoxDigraph& dg, const Condensation& c,
                                 std::size_t class_id, std::int64_t q, const TransitionOptions& options) {
    if (q < 1 || q > 64) throw ConfigError("power must lie in [1, 64]");
    PowerReport rep;
    rep.q = q;
    rep.base = rotation_interval_of_class(dg, c, class_id);
    if (q == 1) {
        rep.power = rep.base;
    } else {
        TransitionOptions opt = options;
        opt.eps = dg.eps();
        opt.power = static_cast<int>(q);
        opt.seed = dg.seed();
        opt.active.assign(dg.grid().size(), 0);
        for (std::size_t v : c.classes[class_id].nodes) {
            if (v < opt.active.size()) opt.active[v] = 1;
        }
        const auto dq = transition_graph(map, dg.grid(), opt);
        const auto cq = chain_classes(dq);
        rep.power = rotation_interval_of_recurrent_set(dq, cq);
    }
    const double qd = static_cast<double>(q);
    rep.deviation = std::max(std::abs(rep.power.lo - qd * rep.base.lo), std::abs(rep.power.hi - qd * rep.base.hi));
    rep.allowed = qd * rep.base.slack + rep.power.slack;
    rep.pass = rep.deviation <= rep.allowed;
    return rep;
}

std::vector<std::int64_t> atkinson_small_sums(const AnnulusMap& map, const LiftPoint& x, std::int64_t p,
                                              std::int64_t q, double eps, std::int64_t n_max) {
    if (q < 1 || n_max < 1 || !(eps > 0.0)) throw ConfigError("atkinson sums need q, n_max >= 1 and eps > 0");
    std::vector<std::int64_t> out;
    LiftPoint z = x;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        z = deck(iterate(map, z, q), -p);
        if (std::abs(z.x - x.x) < eps) out.push_back(n);
    }
    return out;
}

std::vector<std::int64_t> atkinson_small_sums(const AnnulusMap& map, const ExactLiftPoint& x,
                                              std::int64_t p, std::int64_t q, double eps,
                                              std::int64_t n_max) {
    if (q < 1 || n_max < 1 || !(eps > 0.0)) throw ConfigError("atkinson sums need q, n_max >= 1 and eps > 0");
    std::vector<std::int64_t> out;
    ExactLiftPoint z = x;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        z = deck(iterate(map, z, q), -p);
        if (std::abs(to_double(z.x - x.x)) < eps) out.push_back(n);
    }
    return out;
}

PrimeEndEstimate prime_end_rotation_estimate(const AnnulusMap& map, const AnnulusPoint& seed,
                                             std::int64_t n, End end, const PrimeEndOptions& options) {
    if (n < 1) throw ConfigError("prime-end estimate needs n >= 1");
    const auto basin = classify_basin(map, seed, options.t_hi, options.t_lo, options.basin_iter);
    PrimeEndEstimate est;
    est.n = n;
    if (end == End::plus) {
        if (!basin.plus) throw NotInBasin("seed was not seen to enter the basin of +infinity");
        est.basin_steps = basin.plus_steps;
    } else {
        if (!basin.minus) throw NotInBasin("seed was not seen to enter the basin of -infinity");
        est.basin_steps = basin.minus_steps;
    }
    const auto b = birkhoff_rotation(map, lift(seed), n, end == End::plus ? Direction::backward : Direction::forward);
    est.value = b.value;
    est.complete = b.complete;
    return est;
}

}  // namespace annulus
