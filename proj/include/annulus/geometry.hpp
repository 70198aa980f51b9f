#pragma once

#include <cmath>
#include <cstdint>

#include <boost/rational.hpp>

namespace annulus {

/// Point of the universal cover R x R: x lifts the angle, t is the height.
struct LiftPoint {
    double x = 0.0;
    double t = 0.0;

    friend bool operator==(const LiftPoint&, const LiftPoint&) = default;
};

/// Point of the annulus S^1 x R with theta in [0,1).
/// Axis-aligned rectangle [x0, x1] x [t0, t1] in lift coordinates.
struct Rect {
    double x0, x1, t0, t1;
};

struct AnnulusPoint {
    double theta = 0.0;
    double t = 0.0;

    friend bool operator==(const AnnulusPoint&, const AnnulusPoint&) = default;
};

inline double wrap_angle(double x) {
    double th = x - std::floor(x);
    return th >= 1.0 ? 0.0 : th;
}

inline AnnulusPoint project(const LiftPoint& p) { return {wrap_angle(p.x), p.t}; }

inline LiftPoint lift(const AnnulusPoint& p, std::int64_t k = 0) {
    return {p.theta + static_cast<double>(k), p.t};
}

/// The covering transformation T^k(x, t) = (x + k, t).
inline LiftPoint deck(const LiftPoint& p, std::int64_t k) {
    return {p.x + static_cast<double>(k), p.t};
}

/// Signed angular difference b - a reduced to [-1/2, 1/2).
inline double angle_difference(double a, double b) {
    double d = b - a;
    d -= std::floor(d + 0.5);
    return d;
}

/// Flat distance on the annulus (circle metric in the angle).
inline double annulus_distance(const AnnulusPoint& a, const AnnulusPoint& b) {
    return std::hypot(angle_difference(a.theta, b.theta), b.t - a.t);
}

using Rational = boost::rational<std::int64_t>;

inline std::int64_t floor_div(const Rational& r) {
    const std::int64_t n = r.numerator();
    const std::int64_t d = r.denominator();  // always positive
    std::int64_t q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
}

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Lift point with exact rational coordinates (horseshoe oracle path).
struct ExactLiftPoint {
    Rational x{0};
    Rational t{0};

    LiftPoint to_double() const { return {annulus::to_double(x), annulus::to_double(t)}; }
    friend bool operator==(const ExactLiftPoint&, const ExactLiftPoint&) = default;
};

inline ExactLiftPoint deck(const ExactLiftPoint& p, std::int64_t k) { return {p.x + k, p.t}; }

}  // namespace annulus
