#pragma once

// Rotation numbers: periodic orbits via the lift relation h~^q = T^p,
// rotation intervals of grid chain classes via extremal cycle means, the
// power-scaling check, Atkinson small sums and the prime-end estimator.

#include <cstdint>
#include <string>
#include <vector>

#include "annulus/annulus_core.hpp"
#include "annulus/conley.hpp"

namespace annulus {

/// p/q, not reduced (p and q need not be coprime).
struct RationalRot {
    std::int64_t p = 0;
    std::int64_t q = 1;

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    /// Reduced form for display, e.g. "1/2".
    std::string reduced() const;
};

inline constexpr double kDefaultLiftTol = 1e-6;

/// Delta = Pi_1(h~^q(p)) - Pi_1(p) must be within tol of an integer and the
/// height must return within tol. Throws NotPeriodic / NotLifted.
RationalRot rotation_of_periodic(const AnnulusMap& map, const LiftPoint& p, std::int64_t q,
                                 double tol = kDefaultLiftTol);
/// Exact rational path: requires h~^q(p) = T^k(p) exactly.
RationalRot rotation_of_periodic(const AnnulusMap& map, const ExactLiftPoint& p, std::int64_t q);

struct RotationInterval {
    double lo = 0.0;
    double hi = 0.0;
    std::string method = "cycle-mean";
    double slack = 0.0;  // eps + box diameter of the digraph it came from

    bool contains(double a, double b) const { return lo <= a && b <= hi; }
};

/// Extremal cycle means of the edge displacements over a recurrent class.
RotationInterval rotation_interval_of_class(const BoxDigraph& dg, const Condensation& c,
                                            std::size_t class_id);

/// Hull of the rotation intervals of all recurrent classes of dg.
RotationInterval rotation_interval_of_recurrent_set(const BoxDigraph& dg, const Condensation& c);

struct PowerReport {
    std::int64_t q = 1;
    RotationInterval base;    // interval under h
    RotationInterval power;   // interval under h^q, same grid, restricted to the class
    double deviation = 0.0;   // max endpoint distance between power and q * base
    double allowed = 0.0;     // q * base.slack + power.slack
    bool pass = false;
};

PowerReport power_rotation_check(const AnnulusMap& map, const BoxDigraph& dg, const Condensation& c,
                                 std::size_t class_id, std::int64_t q,
                                 const TransitionOptions& options = {});

/// All n in [1, n_max] with |Pi_1((T^{-p} h~^q)^n(x)) - Pi_1(x)| < eps.
/// OutOfDomain propagates when the orbit leaves the domain.
std::vector<std::int64_t> atkinson_small_sums(const AnnulusMap& map, const LiftPoint& x, std::int64_t p,
                                              std::int64_t q, double eps, std::int64_t n_max);
std::vector<std::int64_t> atkinson_small_sums(const AnnulusMap& map, const ExactLiftPoint& x,
                                              std::int64_t p, std::int64_t q, double eps,
                                              std::int64_t n_max);

enum class End { plus, minus };

struct PrimeEndOptions {
    double t_hi = 15.0;
    double t_lo = -15.0;
    std::int64_t basin_iter = 10000;
};

struct PrimeEndEstimate {
    double value = 0.0;
    std::int64_t n = 0;
    std::int64_t basin_steps = 0;  // iterations needed to certify basin membership
    bool complete = true;
};

/// Plus end: backward Birkhoff average; minus end: forward. The seed must
/// first be seen to enter the corresponding basin (NotInBasin otherwise).
PrimeEndEstimate prime_end_rotation_estimate(const AnnulusMap& map, const AnnulusPoint& seed,
                                             std::int64_t n, End end,
                                             const PrimeEndOptions& options = {});

}  // namespace annulus
