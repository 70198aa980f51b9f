#pragma once

// The two concrete annulus systems: the attractor-repellor example built
// from a pair of circle lifts, and the affine core of the winding horseshoe.

#include <optional>
#include <string>
#include <vector>

#include "annulus/circle_dynamics.hpp"
#include "annulus/geometry.hpp"

namespace annulus {

/// Rotation-number parameter as given by the user together with the kind the
/// irrationality guard resolved it to.
struct RotationParam {
    enum class Kind { rational, irrational };

    double value = 0.0;
    Kind kind = Kind::rational;
    std::optional<Fraction> fraction;  // set when kind == rational

    /// Resolve a value through the guard. When `requested` says irrational but
    /// the value is a float rational, the rational kind wins and a note is
    /// appended to `notes`.
    static RotationParam resolve(double value, std::optional<Kind> requested = std::nullopt,
                                 std::vector<std::string>* notes = nullptr);
    /// Parse "p/q" or a decimal literal.
    static RotationParam parse(const std::string& text);
};

struct Tolerances {
    double denjoy = kDefaultDenjoyTol;
    double bisection = 1e-12;
    int bisection_max_iter = 200;
};

/// (x, t) -> (x + alpha, t + drift).
struct RigidTranslation {
    double alpha = 0.0;
    double drift = -1.0;

    LiftPoint eval(const LiftPoint& p) const { return {p.x + alpha, p.t + drift}; }
    LiftPoint inverse(const LiftPoint& p) const { return {p.x - alpha, p.t - drift}; }
};

/// Cosine bump of height 1 on [center-4, center+4].
struct Bump {
    double center = 10.0;

    double value(double t) const;
    double derivative(double t) const;
};

/// h(theta, t) = (phi_t(theta), t - g(theta, t)) with
///   g = 1 - lambda(t)(1 - g_alpha) - mu(t)(1 - g_beta),
///   phi_t = w(t) f_alpha + (1 - w(t)) f_beta,  w(t) = clamp((t+5)/10, 0, 1).
class PaperExample {
public:
    PaperExample(RotationParam alpha, RotationParam beta, Tolerances tol = {});

    const RotationParam& alpha() const { return alpha_; }
    const RotationParam& beta() const { return beta_; }
    const Tolerances& tolerances() const { return tol_; }
    const CircleLift& f_alpha() const { return f_alpha_; }
    const CircleLift& f_beta() const { return f_beta_; }
    const std::vector<std::string>& notes() const { return notes_; }

    double lambda(double t) const { return upper_.value(t); }
    double mu(double t) const { return lower_.value(t); }
    double g(double theta, double t) const;
    double dg_dt(double theta, double t) const;
    double weight(double t) const;
    double phi(double x, double t) const;
    double phi_inverse(double x, double t) const;

    LiftPoint eval(const LiftPoint& p) const;
    /// Exact region split: images of t >= 5, t <= -5 and the middle band are
    /// t' >= 4, t' <= -6 and (-6, 4) respectively.
    LiftPoint inverse(const LiftPoint& p) const;

private:
    double solve_height(double theta, double t_image, double lo, double hi) const;

    RotationParam alpha_;
    RotationParam beta_;
    Tolerances tol_;
    CircleLift f_alpha_;
    CircleLift f_beta_;
    Bump upper_{10.0};
    Bump lower_{-10.0};
    std::vector<std::string> notes_;
};

/// Affine core of the horseshoe on R0 u R1 inside R = [0,1/4] x [-1/4,0].
/// Branch 0 on R0 = [0,1/20] x [-1/4,0]: (x, t) -> (5x, t/5).
/// Branch 1 on R1 = [1/5,1/4] x [-1/4,0]: (x, t) -> (5x, t/5 - 1/5) in the
/// lift, i.e. (5 theta - 1, ...) on the annulus with one extra deck turn.
class HorseshoeCore {
public:
    static constexpr double kDomainSlack = 1e-12;

    /// Branch containing the point, if any.
    static std::optional<int> branch(const LiftPoint& p);
    static bool in_domain(const LiftPoint& p) { return branch(p).has_value(); }

    LiftPoint eval(const LiftPoint& p) const;
    LiftPoint inverse(const LiftPoint& p) const;

    /// Continuous degree-one extension to the whole annulus, equal to the
    /// affine branches on R0 u R1 and on a neighborhood of the two fixed
    /// points. Used only to drive searches; answers are checked with eval().
    LiftPoint eval_extended(const LiftPoint& p) const;
    /// Exact bounding box of the image of r under eval_extended (the
    /// extension is piecewise linear with known breakpoints).
    Rect enclose_extended(const Rect& r) const;

    static std::optional<int> branch(const ExactLiftPoint& p);
    ExactLiftPoint eval(const ExactLiftPoint& p) const;
};

/// Exact periodic point for a binary itinerary through (R0, R1).
struct SymbolicPoint {
    ExactLiftPoint point;
    std::int64_t p = 0;  // number of 1s = deck shift after q steps
    std::int64_t q = 0;
    std::vector<ExactLiftPoint> orbit;  // q+1 lifted points, orbit[q] = T^p(orbit[0])
};

SymbolicPoint horseshoe_symbolic_point(const std::string& word);

struct HeteroclinicChain {
    std::vector<AnnulusPoint> points;  // a ... b ... a
    std::size_t b_index = 0;
};

/// epsilon-chain a -> b -> a through the heteroclinic points (1/4, 0) and (0, -1/4).
HeteroclinicChain horseshoe_heteroclinic_chain(double eps);

}  // namespace annulus
