#pragma once

// Periodic points of prescribed rotation number as zeros of
// G = T^{-p} h~^q - Id, the winding-number fixed point index, and the
// dynamical index of delta-chains.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "annulus/annulus_core.hpp"
#include "annulus/rotation_analysis.hpp"

namespace annulus {

using PlaneMap = std::function<LiftPoint(const LiftPoint&)>;

/// z -> T^{-p} h~^q(z). With `extended` the horseshoe uses its total
/// extension, so loops may leave R0 u R1.
PlaneMap power_map(const AnnulusMap& map, std::int64_t q, std::int64_t p, bool extended = true);

/// Axis-aligned square loop (counterclockwise) of half-side r around c.
std::vector<LiftPoint> square_loop(const LiftPoint& c, double r);

inline constexpr int kDefaultIndexSamples = 1024;
inline constexpr int kIndexRefinement = 256;  // max factor applied to `samples`

/// Winding number of G = f - Id along the closed polygon `loop`, sampled at
/// `samples` points evenly spaced in arc length, doubled while the checks
/// below fail (up to max_refinement times as many; 1 disables refinement). Throws ZeroOnBoundary when
/// the smallest |G| stays below ten times the largest step of G between
/// samples, and UnresolvedWinding when one step keeps turning by pi/2 or more.
int fixed_point_index(const PlaneMap& f, const std::vector<LiftPoint>& loop,
                      int samples = kDefaultIndexSamples, int max_refinement = kIndexRefinement);

struct PeriodicOrbit {
    LiftPoint point;
    std::int64_t q = 1;
    std::int64_t p = 0;
    double residual = 0.0;  // sup norm of T^{-p} h~^q(z) - z with the true map
    std::optional<int> index;
    RationalRot rotation;
};

struct SearchWindow {
    double x_lo = 0.0;  // lift coordinates
    double x_hi = 0.25;
    double t_lo = -0.25;
    double t_hi = 0.0;
};

struct SearchOptions {
    SearchWindow window;
    int depth = 10;
    int refine_levels = 6;      // extra local splits for boxes where Newton fails
    double tol = 1e-10;
    double safety = 2.0;        // multiplier on the sampled Lipschitz bound
    double dedupe = 1e-8;
    int index_samples = kDefaultIndexSamples;
    std::size_t max_boxes = 1u << 22;
};

struct SearchResult {
    std::vector<PeriodicOrbit> orbits;  // sorted by (x, t)
    std::size_t surviving_boxes = 0;    // after the last subdivision level
    /// Informational only: an empty list never certifies absence.
    bool no_candidates() const { return orbits.empty(); }
};

/// Subdivides the window, discarding boxes where G = T^{-p} S^q - Id cannot
/// vanish (S is the extended map; exact enclosures when the variant has
/// them, a sampled Lipschitz test otherwise), polishes survivors with
/// Newton and keeps points whose true-map residual is below tol.
SearchResult find_fixed_points_of_power(const AnnulusMap& map, std::int64_t q, std::int64_t p,
                                        const SearchOptions& options = {});

struct DynamicalIndex {
    std::int64_t i = 0;  // number of steps
    std::int64_t j = 0;  // deck displacement of the lifted endpoint
};

/// Lifts the chain from the canonical lift of its first point, choosing at
/// every step the lift of the next point within delta of the image.
DynamicalIndex chain_dynamical_index(const AnnulusMap& map, const std::vector<AnnulusPoint>& chain,
                                     double delta);

struct ConcatSolution {
    std::int64_t eta = 0;
    std::int64_t xi = 0;
    std::int64_t zeta = 0;
};

/// Smallest eta >= max(eta_min, 1) with xi = eta(p2-p1) + (b - p1 a) >= 1 and
/// zeta = eta(p2-p1-1) + (b - p1 a - a) >= 1. Then a + zeta + eta = xi and
/// b + zeta p1 + eta p2 = xi (p1 + 1). Requires p1 + 1 < p2 and a >= 1.
ConcatSolution concat_solver(std::int64_t a, std::int64_t b, std::int64_t p1, std::int64_t p2,
                             std::int64_t eta_min = 1);

}  // namespace annulus
