#pragma once

// Uniform interface over the lifted annulus maps: evaluation, inverse,
// deck transformation, displacement, Birkhoff averages and basin tests.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "annulus/examples.hpp"
#include "annulus/geometry.hpp"

namespace annulus {

enum class MapVariant { paper_example, horseshoe_core, rigid_translation };

std::string to_string(MapVariant v);
MapVariant parse_variant(const std::string& name);

/// A lifted, orientation- and end-preserving annulus homeomorphism.
/// Immutable and cheap to copy (Denjoy tables are shared).
class AnnulusMap {
public:
    using Model = std::variant<RigidTranslation, PaperExample, HorseshoeCore>;

    explicit AnnulusMap(Model model) : model_(std::move(model)) {}

    MapVariant variant() const;
    const Model& model() const { return model_; }

    template <class T>
    const T* as() const {
        return std::get_if<T>(&model_);
    }

    /// Throws OutOfDomain for the horseshoe core outside R0 u R1.
    LiftPoint eval(const LiftPoint& p) const;
    LiftPoint inverse(const LiftPoint& p) const;
    bool in_domain(const LiftPoint& p) const;
    std::optional<LiftPoint> try_eval(const LiftPoint& p) const;

    /// Total continuous extension used to drive searches. Coincides with
    /// eval() on the domain.
    LiftPoint eval_extended(const LiftPoint& p) const;
    /// Bounding box of the image of r under eval_extended when the variant
    /// admits an exact one (horseshoe core, rigid translation).
    std::optional<Rect> enclose_extended(const Rect& r) const;

    /// Exact rational evaluation; only the horseshoe core supports it.
    bool supports_exact() const;
    ExactLiftPoint eval_exact(const ExactLiftPoint& p) const;

private:
    Model model_;
};

AnnulusMap build_paper_example(const RotationParam& alpha, const RotationParam& beta,
                               Tolerances tol = {});
AnnulusMap build_paper_example(double alpha, double beta, Tolerances tol = {});
AnnulusMap build_horseshoe_core();
AnnulusMap build_rigid_translation(double alpha, double drift = -1.0);

inline LiftPoint lift_eval(const AnnulusMap& map, const LiftPoint& p) { return map.eval(p); }
inline LiftPoint lift_inverse(const AnnulusMap& map, const LiftPoint& p) { return map.inverse(p); }

/// h^n for n >= 0, (h^{-1})^{|n|} otherwise.
LiftPoint iterate(const AnnulusMap& map, LiftPoint p, std::int64_t n);
ExactLiftPoint iterate(const AnnulusMap& map, ExactLiftPoint p, std::int64_t n);

/// Pi_1(h~(p~)) - Pi_1(p~); independent of the chosen lift.
double displacement(const AnnulusMap& map, const AnnulusPoint& p);

enum class Direction { forward, backward };

struct BirkhoffResult {
    double value = 0.0;
    std::int64_t steps = 0;   // steps actually taken
    bool complete = true;     // false when the orbit left the domain early
};

/// Forward: (Pi_1 h~^n(p) - Pi_1 p)/n. Backward: (Pi_1 p - Pi_1 h~^{-n}(p))/n.
BirkhoffResult birkhoff_rotation(const AnnulusMap& map, const LiftPoint& p, std::int64_t n,
                                 Direction direction);
/// Forward average along the exact rational orbit (horseshoe core only).
/// Floating orbits of the expanding branches lose one digit per step or so.
BirkhoffResult birkhoff_rotation(const AnnulusMap& map, const ExactLiftPoint& p, std::int64_t n);

enum class Basin { plus, minus, both, undetermined };

std::string to_string(Basin b);

/// One-sided basin evidence. `plus` is set once a backward iterate rises
/// above t_hi, `minus` once a forward iterate drops below t_lo (iterate 0
/// included). Absence of evidence is never a proof of non-membership.
struct BasinReport {
    bool plus = false;
    bool minus = false;
    std::int64_t plus_steps = -1;
    std::int64_t minus_steps = -1;
    double max_backward_t = 0.0;  // highest height seen on the backward orbit
    double min_forward_t = 0.0;   // lowest height seen on the forward orbit

    Basin verdict() const;
};

BasinReport classify_basin(const AnnulusMap& map, const AnnulusPoint& p, double t_hi, double t_lo,
                           std::int64_t max_iter);

}  // namespace annulus
