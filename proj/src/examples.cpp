#include "annulus/examples.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "annulus/errors.hpp"

namespace annulus {

// ---------------------------------------------------------------------------
// Rotation parameters

RotationParam RotationParam::resolve(double value, std::optional<Kind> requested,
                                     std::vector<std::string>* notes) {
    if (!std::isfinite(value)) throw ConfigError("rotation number must be finite");
    RotationParam r;
    r.value = value;
    r.fraction = rational_approximation(value);
    r.kind = r.fraction ? Kind::rational : Kind::irrational;
    if (requested && *requested != r.kind && notes) {
        std::ostringstream os;
        os.precision(17);
        if (r.kind == Kind::rational) {
            os << "NearRational: " << value << " resolved to " << r.fraction->p << "/"
               << r.fraction->q << "; using the rigid rotation";
        } else {
            os << "value " << value << " has no denominator <= " << kMaxGuardDenominator
               << "; using a Denjoy lift";
        }
        notes->push_back(os.str());
    }
    return r;
}

RotationParam RotationParam::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return resolve(std::stod(text));
        const long long p = std::stoll(text.substr(0, slash));
        const long long q = std::stoll(text.substr(slash + 1));
        if (q <= 0) throw ConfigError("denominator must be positive in '" + text + "'");
        RotationParam r = resolve(static_cast<double>(p) / static_cast<double>(q));
        return r;
    } catch (const std::invalid_argument&) {
        throw ConfigError("cannot parse rotation number '" + text + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("rotation number out of range '" + text + "'");
    }
}

// ---------------------------------------------------------------------------
// Paper example

double Bump::value(double t) const {
    const double s = t - center;
    if (s <= -4.0 || s >= 4.0) return 0.0;
    return 0.5 * (1.0 + std::cos(M_PI * s / 4.0));
}

double Bump::derivative(double t) const {
    const double s = t - center;
    if (s <= -4.0 || s >= 4.0) return 0.0;
    return -0.5 * (M_PI / 4.0) * std::sin(M_PI * s / 4.0);
}

namespace {

CircleLift lift_for(const RotationParam& r, double tol) {
    if (r.kind == RotationParam::Kind::rational) return make_rigid_rotation(r.value);
    return make_denjoy(r.value, tol);
}

}  // namespace

PaperExample::PaperExample(RotationParam alpha, RotationParam beta, Tolerances tol)
    : alpha_(alpha),
      beta_(beta),
      tol_(tol),
      f_alpha_(lift_for(alpha, tol.denjoy)),
      f_beta_(lift_for(beta, tol.denjoy)) {}

double PaperExample::g(double theta, double t) const {
    const double la = lambda(t);
    const double mb = mu(t);
    double out = 1.0;
    if (la > 0.0) out -= la * (1.0 - f_alpha_.g_alpha(theta));
    if (mb > 0.0) out -= mb * (1.0 - f_beta_.g_alpha(theta));
    return out;
}

double PaperExample::dg_dt(double theta, double t) const {
    const double da = upper_.derivative(t);
    const double db = lower_.derivative(t);
    double out = 0.0;
    if (da != 0.0) out -= da * (1.0 - f_alpha_.g_alpha(theta));
    if (db != 0.0) out -= db * (1.0 - f_beta_.g_alpha(theta));
    return out;
}

double PaperExample::weight(double t) const { return std::clamp((t + 5.0) / 10.0, 0.0, 1.0); }

double PaperExample::phi(double x, double t) const {
    const double w = weight(t);
    if (w >= 1.0) return f_alpha_.eval(x);
    if (w <= 0.0) return f_beta_.eval(x);
    return w * f_alpha_.eval(x) + (1.0 - w) * f_beta_.eval(x);
}

double PaperExample::phi_inverse(double x, double t) const {
    const double w = weight(t);
    if (w >= 1.0) return f_alpha_.inverse(x);
    if (w <= 0.0) return f_beta_.inverse(x);
    // Monotone bisection on [x-2, x+2], widened by the displacement of the two lifts.
    double lo = x - 2.0 - std::abs(alpha_.value) - std::abs(beta_.value);
    double hi = x + 2.0 + std::abs(alpha_.value) + std::abs(beta_.value);
    if (!(phi(lo, t) <= x && phi(hi, t) >= x)) {
        throw NoConvergence("isotopy inverse: bracket does not contain the root");
    }
    for (int it = 0; it < tol_.bisection_max_iter && hi - lo > tol_.bisection; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid, t) < x) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LiftPoint PaperExample::eval(const LiftPoint& p) const {
    return {phi(p.x, p.t), p.t - g(wrap_angle(p.x), p.t)};
}

double PaperExample::solve_height(double theta, double t_image, double lo, double hi) const {
    // t -> t - g(theta, t) is strictly increasing since dg/dt < 1.
    auto f = [&](double t) { return t - g(theta, t) - t_image; };
    if (f(lo) > 0.0 || f(hi) < 0.0) {
        throw NoConvergence("height inverse: bracket does not contain the root");
    }
    for (int it = 0; it < tol_.bisection_max_iter && hi - lo > tol_.bisection; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LiftPoint PaperExample::inverse(const LiftPoint& p) const {
    if (p.t >= 4.0) {
        const double x = f_alpha_.inverse(p.x);
        return {x, solve_height(wrap_angle(x), p.t, std::max(5.0, p.t), p.t + 1.0)};
    }
    if (p.t <= -6.0) {
        const double x = f_beta_.inverse(p.x);
        return {x, solve_height(wrap_angle(x), p.t, p.t, std::min(-5.0, p.t + 1.0))};
    }
    // g == 1 on the middle band.
    const double t = p.t + 1.0;
    return {phi_inverse(p.x, t), t};
}

// ---------------------------------------------------------------------------
// Horseshoe core

namespace {

constexpr double kR0Right = 1.0 / 20.0;
constexpr double kR1Left = 1.0 / 5.0;
constexpr double kRRight = 1.0 / 4.0;

// Split x into k + theta with theta in [-slack, 1 - slack).
std::pair<double, double> split_lift(double x, double slack) {
    double k = std::floor(x);
    double th = x - k;
    if (th >= 1.0 - slack) {
        th -= 1.0;
        k += 1.0;
    }
    return {k, th};
}

}  // namespace

std::optional<int> HorseshoeCore::branch(const LiftPoint& p) {
    constexpr double s = kDomainSlack;
    if (!(p.t >= -0.25 - s && p.t <= s)) return std::nullopt;
    const auto [k, th] = split_lift(p.x, s);
    (void)k;
    if (th >= -s && th <= kR0Right + s) return 0;
    if (th >= kR1Left - s && th <= kRRight + s) return 1;
    return std::nullopt;
}

LiftPoint HorseshoeCore::eval(const LiftPoint& p) const {
    const auto b = branch(p);
    if (!b) throw OutOfDomain("horseshoe core evaluated outside R0 u R1");
    const auto [k, th] = split_lift(p.x, kDomainSlack);
    if (*b == 0) return {k + 5.0 * th, p.t / 5.0};
    return {k + 5.0 * th, p.t / 5.0 - 0.2};
}

LiftPoint HorseshoeCore::inverse(const LiftPoint& p) const {
    constexpr double s = kDomainSlack;
    const auto [k, th] = split_lift(p.x, s);
    if (!(th >= -s && th <= kRRight + s)) throw OutOfDomain("point outside the horseshoe image");
    if (p.t >= -0.05 - s && p.t <= s) return {k + th / 5.0, 5.0 * p.t};
    if (p.t >= -0.25 - s && p.t <= -0.2 + s) return {k - 1.0 + (th + 1.0) / 5.0, 5.0 * p.t + 1.0};
    throw OutOfDomain("point outside the horseshoe image");
}

LiftPoint HorseshoeCore::eval_extended(const LiftPoint& p) const {
    // theta in [-1/8, 7/8): x-part 5*theta on [-1/8, 3/8], then slope -3 back
    // to the next turn; t-shift 0 near R0, -1/5 near R1, linear in between.
    double k = std::floor(p.x + 0.125);
    const double th = p.x - k;
    double fx, shift;
    if (th <= 0.375) {
        fx = 5.0 * th;
    } else {
        fx = 1.875 - 3.0 * (th - 0.375);
    }
    if (th <= kR0Right) {
        shift = 0.0;
    } else if (th <= kR1Left) {
        shift = -(th - kR0Right) * (4.0 / 3.0);
    } else if (th <= 0.375) {
        shift = -0.2;
    } else {
        shift = -0.2 + (th - 0.375) * 0.4;
    }
    return {k + fx, p.t / 5.0 + shift};
}

namespace {

// Extremes of the lifted function v over [a, b], which is linear between
// the points k + c for c in `breaks`.
template <class F, std::size_t N>
std::pair<double, double> pl_range(F v, double a, double b, const double (&breaks)[N]) {
    double lo = std::min(v(a), v(b)), hi = std::max(v(a), v(b));
    for (double k = std::floor(a) - 1.0; k <= std::floor(b) + 1.0; k += 1.0) {
        for (double c : breaks) {
            const double x = k + c;
            if (x > a && x < b) {
                lo = std::min(lo, v(x));
                hi = std::max(hi, v(x));
            }
        }
    }
    return {lo, hi};
}

}  // namespace

Rect HorseshoeCore::enclose_extended(const Rect& r) const {
    if (!(r.x0 <= r.x1) || !(r.t0 <= r.t1)) throw ConfigError("enclosure needs an ordered rectangle");
    if (r.x1 - r.x0 > 64.0) throw NumericError("enclosure interval spans too many turns");
    static constexpr double kXBreaks[] = {0.375, 0.875};
    static constexpr double kShiftBreaks[] = {kR0Right, kR1Left, 0.375, 0.875};
    const auto fx = pl_range([this](double x) { return eval_extended({x, 0.0}).x; }, r.x0, r.x1, kXBreaks);
    const auto sh = pl_range([this](double x) { return eval_extended({x, 0.0}).t; }, r.x0, r.x1, kShiftBreaks);
    return {fx.first, fx.second, r.t0 / 5.0 + sh.first, r.t1 / 5.0 + sh.second};
}

std::optional<int> HorseshoeCore::branch(const ExactLiftPoint& p) {
    if (p.t < Rational(-1, 4) || p.t > Rational(0)) return std::nullopt;
    const Rational th = p.x - floor_div(p.x);
    if (th <= Rational(1, 20)) return 0;
    if (th >= Rational(1, 5) && th <= Rational(1, 4)) return 1;
    return std::nullopt;
}

ExactLiftPoint HorseshoeCore::eval(const ExactLiftPoint& p) const {
    const auto b = branch(p);
    if (!b) throw OutOfDomain("horseshoe core evaluated outside R0 u R1 (exact)");
    const std::int64_t k = floor_div(p.x);
    const Rational th = p.x - k;
    if (*b == 0) return {k + 5 * th, p.t / 5};
    return {k + 5 * th, p.t / 5 - Rational(1, 5)};
}

SymbolicPoint horseshoe_symbolic_point(const std::string& word) {
    if (word.empty()) throw ConfigError("itinerary word must be nonempty");
    if (word.size() > 20) throw ConfigError("itinerary words longer than 20 overflow exact arithmetic");
    const auto q = static_cast<std::int64_t>(word.size());
    std::int64_t pow5 = 1;
    for (std::int64_t i = 0; i < q; ++i) pow5 *= 5;
    // theta_{k+1} = 5 theta_k - w_k and t_{k+1} = (t_k - w_k)/5 closed up after q steps.
    std::int64_t xnum = 0, tnum = 0, ones = 0, pk = 1;
    for (std::int64_t k = 0; k < q; ++k) {
        const char c = word[static_cast<std::size_t>(k)];
        if (c != '0' && c != '1') throw ConfigError("itinerary word must be binary: '" + word + "'");
        const int w = c - '0';
        ones += w;
        xnum = 5 * xnum + w;  // sum_k w_k 5^{q-1-k}
        tnum += w * pk;       // sum_k w_k 5^k
        pk *= 5;
    }
    SymbolicPoint out;
    out.q = q;
    out.p = ones;
    out.point = {Rational(xnum, pow5 - 1), Rational(-tnum, pow5 - 1)};

    const HorseshoeCore h;
    out.orbit.push_back(out.point);
    ExactLiftPoint z = out.point;
    for (std::int64_t k = 0; k < q; ++k) {
        const auto b = HorseshoeCore::branch(z);
        const int w = word[static_cast<std::size_t>(k)] - '0';
        if (!b || *b != w) {
            throw ItineraryViolation("orbit of '" + word + "' leaves its rectangle at step " +
                                     std::to_string(k));
        }
        z = h.eval(z);
        out.orbit.push_back(z);
    }
    if (!(z == deck(out.point, out.p))) {
        throw ItineraryViolation("lift relation h^q = T^p fails for '" + word + "'");
    }
    return out;
}

HeteroclinicChain horseshoe_heteroclinic_chain(double eps) {
    if (!(eps > 0.0)) throw ConfigError("chain tolerance must be positive");
    const HorseshoeCore h;
    HeteroclinicChain chain;
    auto push = [&](const ExactLiftPoint& z) { chain.points.push_back(project(z.to_double())); };
    auto close = [&](const ExactLiftPoint& a, const ExactLiftPoint& b) {
        const AnnulusPoint pa = project(a.to_double()), pb = project(b.to_double());
        return annulus_distance(pa, pb) < eps;
    };

    const ExactLiftPoint a{Rational(0), Rational(0)};
    const ExactLiftPoint b{Rational(1, 4), Rational(-1, 4)};

    // a -> b along W^u(a) = {t = 0}, then down the column theta = 1/4 into b.
    push(a);
    Rational start(1, 4);
    while (!(to_double(start) < eps)) start /= 5;
    ExactLiftPoint z{start, Rational(0)};
    if (!(z == a)) {
        for (;;) {
            push(z);
            const ExactLiftPoint next = h.eval(z);
            if (close(next, b)) break;
            z = next;
        }
    }
    chain.b_index = chain.points.size();
    push(b);

    // b -> a along W^u(b) = {t = -1/4}, through (1/5,-1/4) -> (0,-1/4), then up into a.
    Rational delta(1, 20);
    while (!(to_double(delta) < eps)) delta /= 5;
    z = {Rational(1, 4) - delta, Rational(-1, 4)};
    for (;;) {
        push(z);
        const ExactLiftPoint next = h.eval(z);
        if (close(next, a)) break;
        z = next;
    }
    push(a);
    return chain;
}

}  // namespace annulus
