#include "annulus/annulus_core.hpp"

#include <cmath>
#include <limits>

#include "annulus/errors.hpp"

namespace annulus {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string to_string(MapVariant v) {
    switch (v) {
        case MapVariant::paper_example: return "paper_example";
        case MapVariant::horseshoe_core: return "horseshoe_core";
        case MapVariant::rigid_translation: return "rigid_translation";
    }
    return "unknown";
}

MapVariant parse_variant(const std::string& name) {
    if (name == "paper_example" || name == "paper") return MapVariant::paper_example;
    if (name == "horseshoe_core" || name == "horseshoe") return MapVariant::horseshoe_core;
    if (name == "rigid_translation" || name == "rigid") return MapVariant::rigid_translation;
    throw ConfigError("unknown map variant '" + name + "'");
}

MapVariant AnnulusMap::variant() const {
    return std::visit(Overloaded{
                          [](const RigidTranslation&) { return MapVariant::rigid_translation; },
                          [](const PaperExample&) { return MapVariant::paper_example; },
                          [](const HorseshoeCore&) { return MapVariant::horseshoe_core; },
                      },
                      model_);
}

LiftPoint AnnulusMap::eval(const LiftPoint& p) const {
    return std::visit([&](const auto& m) { return m.eval(p); }, model_);
}

LiftPoint AnnulusMap::inverse(const LiftPoint& p) const {
    return std::visit([&](const auto& m) { return m.inverse(p); }, model_);
}

bool AnnulusMap::in_domain(const LiftPoint& p) const {
    if (const auto* h = as<HorseshoeCore>()) return h->in_domain(p);
    return std::isfinite(p.x) && std::isfinite(p.t);
}

std::optional<LiftPoint> AnnulusMap::try_eval(const LiftPoint& p) const {
    if (!in_domain(p)) return std::nullopt;
    return eval(p);
}

LiftPoint AnnulusMap::eval_extended(const LiftPoint& p) const {
    if (const auto* h = as<HorseshoeCore>()) return h->eval_extended(p);
    return eval(p);
}

std::optional<Rect> AnnulusMap::enclose_extended(const Rect& r) const {
    if (const auto* h = as<HorseshoeCore>()) return h->enclose_extended(r);
    if (const auto* m = as<RigidTranslation>()) {
        return Rect{r.x0 + m->alpha, r.x1 + m->alpha, r.t0 + m->drift, r.t1 + m->drift};
    }
    return std::nullopt;
}

bool AnnulusMap::supports_exact() const { return as<HorseshoeCore>() != nullptr; }

ExactLiftPoint AnnulusMap::eval_exact(const ExactLiftPoint& p) const {
    const auto* h = as<HorseshoeCore>();
    if (!h) throw ConfigError("exact evaluation is only available for the horseshoe core");
    return h->eval(p);
}

AnnulusMap build_paper_example(const RotationParam& alpha, const RotationParam& beta,
                               Tolerances tol) {
    return AnnulusMap(PaperExample(alpha, beta, tol));
}

AnnulusMap build_paper_example(double alpha, double beta, Tolerances tol) {
    return build_paper_example(RotationParam::resolve(alpha), RotationParam::resolve(beta), tol);
}

AnnulusMap build_horseshoe_core() { return AnnulusMap(HorseshoeCore{}); }

AnnulusMap build_rigid_translation(double alpha, double drift) {
    if (!std::isfinite(alpha) || !std::isfinite(drift)) {
        throw ConfigError("rigid translation parameters must be finite");
    }
    return AnnulusMap(RigidTranslation{alpha, drift});
}

LiftPoint iterate(const AnnulusMap& map, LiftPoint p, std::int64_t n) {
    if (n >= 0) {
        for (std::int64_t k = 0; k < n; ++k) p = map.eval(p);
    } else {
        for (std::int64_t k = 0; k < -n; ++k) p = map.inverse(p);
    }
    return p;
}

ExactLiftPoint iterate(const AnnulusMap& map, ExactLiftPoint p, std::int64_t n) {
    if (n < 0) throw ConfigError("exact iteration supports forward steps only");
    for (std::int64_t k = 0; k < n; ++k) p = map.eval_exact(p);
    return p;
}

double displacement(const AnnulusMap& map, const AnnulusPoint& p) {
    const LiftPoint base = lift(p);
    return map.eval(base).x - base.x;
}

BirkhoffResult birkhoff_rotation(const AnnulusMap& map, const LiftPoint& p, std::int64_t n,
                                 Direction direction) {
    if (n < 1) throw ConfigError("Birkhoff average needs n >= 1");
    LiftPoint z = p;
    BirkhoffResult out;
    try {
        for (; out.steps < n; ++out.steps) {
            z = direction == Direction::forward ? map.eval(z) : map.inverse(z);
        }
    } catch (const OutOfDomain&) {
        out.complete = false;
    }
    if (out.steps == 0) {
        out.value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const double span = direction == Direction::forward ? z.x - p.x : p.x - z.x;
    out.value = span / static_cast<double>(out.steps);
    return out;
}

BirkhoffResult birkhoff_rotation(const AnnulusMap& map, const ExactLiftPoint& p,
                                 std::int64_t n) {
    if (n < 1) throw ConfigError("Birkhoff average needs n >= 1");
    ExactLiftPoint z = p;
    BirkhoffResult out;
    try {
        for (; out.steps < n; ++out.steps) z = map.eval_exact(z);
    } catch (const OutOfDomain&) {
        out.complete = false;
    }
    if (out.steps == 0) {
        out.value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.value = to_double((z.x - p.x) / Rational(out.steps));
    return out;
}

std::string to_string(Basin b) {
    switch (b) {
        case Basin::plus: return "PlusBasin";
        case Basin::minus: return "MinusBasin";
        case Basin::both: return "Both";
        case Basin::undetermined: return "Undetermined";
    }
    return "Undetermined";
}

Basin BasinReport::verdict() const {
    if (plus && minus) return Basin::both;
    if (plus) return Basin::plus;
    if (minus) return Basin::minus;
    return Basin::undetermined;
}

BasinReport classify_basin(const AnnulusMap& map, const AnnulusPoint& p, double t_hi, double t_lo,
                           std::int64_t max_iter) {
    if (!(t_lo < t_hi)) throw ConfigError("classify_basin needs t_lo < t_hi");
    if (max_iter < 0) throw ConfigError("classify_basin needs max_iter >= 0");
    BasinReport r;
    r.max_backward_t = p.t;
    r.min_forward_t = p.t;

    LiftPoint z = lift(p);
    for (std::int64_t k = 0;; ++k) {
        r.max_backward_t = std::max(r.max_backward_t, z.t);
        if (z.t > t_hi) {
            r.plus = true;
            r.plus_steps = k;
            break;
        }
        if (k == max_iter) break;
        try {
            z = map.inverse(z);
        } catch (const NumericError&) {
            break;
        }
    }
    z = lift(p);
    for (std::int64_t k = 0;; ++k) {
        r.min_forward_t = std::min(r.min_forward_t, z.t);
        if (z.t < t_lo) {
            r.minus = true;
            r.minus_steps = k;
            break;
        }
        if (k == max_iter) break;
        try {
            z = map.eval(z);
        } catch (const NumericError&) {
            break;
        }
    }
    return r;
}

}  // namespace annulus
