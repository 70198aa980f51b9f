#pragma once

// Degree-one circle lifts: rigid rotations and Denjoy maps whose wandering
// intervals form a single orbit.
//
// A Denjoy lift is built from the rotation orbit c_i = frac(i*alpha). Each
// orbit point is blown up into an inserted interval of length
//
//     l_i = c / ((|i|+1)(|i|+2)),   c = 1/3,  so  sum_i l_i = 1/2.
//
// Only |i| <= N are inserted, with N the smallest index whose tail
// sum_{|i|>N} l_i = 2c/(N+2) falls below the requested tolerance. The domain
// side of the lift uses the indices D = [-N, N-1] and the image side uses
// D+1 = [-N+1, N]; both carry the same total length, so
//
//     F = sigma_{D+1} o (u -> u + alpha) o sigma_D^{-1}
//
// is an honest circle homeomorphism that maps interval i affinely onto
// interval i+1 for every i in D and translates the gaps rigidly.

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace annulus {

/// Default truncation tolerance for Denjoy lifts.
inline constexpr double kDefaultDenjoyTol = 1e-6;
/// Largest denominator tried by the irrationality guard.
inline constexpr std::int64_t kMaxGuardDenominator = 1'000'000;
/// Distance below which a float is taken to be the rational p/q.
inline constexpr double kRationalTol = 1e-14;

struct Fraction {
    std::int64_t p = 0;
    std::int64_t q = 1;
};

/// Continued-fraction search for p/q with q <= max_den and |x - p/q| <= tol.
/// Every hit is a convergent because tol < 1/(2 max_den^2).
std::optional<Fraction> rational_approximation(double x,
                                               std::int64_t max_den = kMaxGuardDenominator,
                                               double tol = kRationalTol);

enum class LiftKind { rigid, denjoy };

struct InsertedInterval {
    std::int64_t index = 0;
    double base = 0.0;    // frac(index * alpha)
    double left = 0.0;    // left endpoint in [0,1)
    double length = 0.0;
};

/// Length of inserted interval i under the fixed summable law.
double inserted_length(std::int64_t i);

class DenjoyTable;

class CircleLift {
public:
    static CircleLift rigid(double alpha);
    static CircleLift denjoy(double alpha, double tol = kDefaultDenjoyTol);

    LiftKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double tolerance() const { return tol_; }

    double eval(double x) const;
    double operator()(double x) const { return eval(x); }
    double inverse(double y) const;

    /// The function g_alpha: zero exactly on the minimal set, at most 1/2.
    double g_alpha(double theta) const;

    /// Rational rotation number of a rigid lift, if one was recognized.
    std::optional<Fraction> rational() const { return rational_; }

    // Denjoy geometry. All of these throw std::logic_error on a rigid lift.
    std::int64_t truncation() const;
    std::optional<std::int64_t> interval_index(double theta) const;
    InsertedInterval interval(std::int64_t i) const;
    /// Projection of the inserted intervals to points: the semiconjugacy to
    /// the rigid rotation, as a degree-one map of the line.
    double collapse(double x) const;
    /// Lebesgue measure of the complement of the inserted intervals.
    double minimal_set_measure() const;

private:
    CircleLift() = default;

    LiftKind kind_ = LiftKind::rigid;
    double alpha_ = 0.0;
    double tol_ = 0.0;
    std::optional<Fraction> rational_;
    std::shared_ptr<const DenjoyTable> table_;
};

CircleLift make_rigid_rotation(double alpha);

/// Throws NearRational when alpha is a float image of a rational with
/// denominator at most kMaxGuardDenominator.
CircleLift make_denjoy(double alpha, double tol = kDefaultDenjoyTol);

inline double eval_lift(const CircleLift& f, double x) { return f.eval(x); }
inline double eval_g_alpha(const CircleLift& f, double theta) { return f.g_alpha(theta); }

/// (F^n(x0) - x0) / n.
double rotation_number_estimate(const CircleLift& f, double x0, std::int64_t n);

}  // namespace annulus
