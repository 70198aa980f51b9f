#pragma once

// Grid-level chain recurrence. A window of the annulus is cut into
// 2^d x 2^d boxes; sampled images dilated by eps give an outer approximation
// of the one-step eps-chain relation. Strongly connected components of that
// digraph are the grid chain classes.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "annulus/annulus_core.hpp"

namespace annulus {

/// [x_lo, x_hi] x [t_lo, t_hi] in annulus coordinates. An angular extent of
/// exactly 1 makes the grid cyclic in x.
struct Window {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double t_lo = -1.0;
    double t_hi = 1.0;

    void validate() const;
    static Window horseshoe() { return {0.0, 0.25, -0.25, 0.0}; }
};

using BoxBounds = Rect;

class Grid {
public:
    Grid(Window window, int depth);

    const Window& window() const { return window_; }
    int depth() const { return depth_; }
    std::int64_t side() const { return side_; }
    std::size_t size() const { return static_cast<std::size_t>(side_ * side_); }
    bool cyclic() const { return cyclic_; }

    double box_width() const { return dx_; }
    double box_height() const { return dt_; }
    double box_diameter() const;

    std::size_t id(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>(j * side_ + i);
    }
    std::int64_t column(std::size_t id) const { return static_cast<std::int64_t>(id) % side_; }
    std::int64_t row(std::size_t id) const { return static_cast<std::int64_t>(id) / side_; }

    BoxBounds bounds(std::size_t id) const;
    LiftPoint center(std::size_t id) const;

    /// Box containing the projection of p, or nullopt outside the window.
    /// Points on the closing edges x = x_hi, t = t_hi belong to the last box.
    std::optional<std::size_t> box_of(const LiftPoint& p) const;
    std::optional<std::size_t> box_of(const AnnulusPoint& p) const { return box_of(lift(p)); }

    /// All boxes meeting the square of radius r (sup norm) around p.
    void boxes_near(const LiftPoint& p, double r, std::vector<std::size_t>& out) const;

    /// Angular position of x relative to x_lo, reduced to [0,1).
    double angular_offset(double x) const;

private:
    Window window_;
    int depth_;
    std::int64_t side_;
    bool cyclic_;
    double dx_, dt_;
};

struct TransitionOptions {
    double eps = 0.0;            // <= 0 selects 2 x box diameter
    int interior_samples = 8;    // random points per box besides corners and center
    std::uint64_t seed = 1;
    int power = 1;               // digraph of h^power
    unsigned threads = 0;        // 0 = hardware concurrency
    /// Optional mask; inactive boxes get no out-edges and are treated as
    /// outside the window when hit.
    std::vector<char> active;
};

/// Outer-approximation digraph in CSR form. Node ids 0..boxes-1 are grid
/// boxes and node `exit_node()` is the EXIT sink.
class BoxDigraph {
public:
    BoxDigraph() = default;

    const Grid& grid() const { return *grid_; }
    double eps() const { return eps_; }
    int power() const { return power_; }
    std::uint64_t seed() const { return seed_; }

    std::size_t node_count() const { return offsets_.size() - 1; }
    std::size_t exit_node() const { return node_count() - 1; }
    std::size_t edge_count() const { return targets_.size(); }

    std::size_t begin(std::size_t u) const { return offsets_[u]; }
    std::size_t end(std::size_t u) const { return offsets_[u + 1]; }
    std::uint32_t target(std::size_t e) const { return targets_[e]; }
    /// Displacement range over the witness samples of the edge.
    double weight_lo(std::size_t e) const { return w_lo_[e]; }
    double weight_hi(std::size_t e) const { return w_hi_[e]; }

    bool has_edge(std::size_t u, std::size_t v) const;

    /// Build from explicit edges (u, v, weight); used for toy graphs. The grid
    /// is a 1x1 placeholder unless given.
    struct Edge {
        std::size_t u, v;
        double w_lo, w_hi;
    };
    static BoxDigraph from_edges(std::size_t nodes, const std::vector<Edge>& edges);

private:
    friend BoxDigraph transition_graph(const AnnulusMap&, const Grid&, const TransitionOptions&);

    std::shared_ptr<const Grid> grid_;
    double eps_ = 0.0;
    int power_ = 1;
    std::uint64_t seed_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> targets_;
    std::vector<double> w_lo_;
    std::vector<double> w_hi_;
};

BoxDigraph transition_graph(const AnnulusMap& map, const Grid& grid,
                            const TransitionOptions& options = {});

/// Image of a sample under h^power with the lift displacement, or nullopt
/// when the orbit leaves the domain. Exposed for soundness tests.
std::optional<LiftPoint> power_image(const AnnulusMap& map, const LiftPoint& p, int power);

struct ChainClass {
    std::size_t id = 0;               // position in topological order
    std::vector<std::size_t> nodes;   // sorted node ids
    bool recurrent = false;
};

/// SCC condensation. Classes come in topological order (every edge goes
/// from a class to itself or to a later class). Covers every node,
/// including EXIT.
struct Condensation {
    std::vector<ChainClass> classes;
    std::vector<std::size_t> class_of;  // node -> class id

    std::vector<std::size_t> recurrent_ids() const;
};

Condensation chain_classes(const BoxDigraph& dg);

/// Per node (EXIT included): set on boxes of recurrent classes.
std::vector<char> recurrent_mask(const BoxDigraph& dg, const Condensation& c);

/// Point on the middle-thirds Cantor set: numerator over 3^digits with all
/// ternary digits in {0, 2}.
struct CantorValue {
    std::int64_t numerator = 0;
    int digits = 0;

    double value() const;
    bool verify() const;
};

struct GridLyapunov {
    std::vector<double> value;                // per node
    std::vector<std::optional<CantorValue>> plateau;  // per class, set on recurrent classes
};

GridLyapunov lyapunov(const BoxDigraph& dg, const Condensation& c);
GridLyapunov lyapunov(const BoxDigraph& dg);

struct LyapunovCheck {
    std::size_t cross_edges = 0;
    std::size_t decreasing = 0;
    bool plateaus_constant = true;
    bool plateaus_distinct = true;
    bool plateaus_cantor = true;

    bool ok() const {
        return decreasing == cross_edges && plateaus_constant && plateaus_distinct && plateaus_cantor;
    }
};

LyapunovCheck verify_lyapunov(const BoxDigraph& dg, const Condensation& c, const GridLyapunov& l);

struct AttractorPair {
    std::vector<std::size_t> morse_classes;  // recurrent class ids in the attractor
    std::vector<std::size_t> attractor;      // node ids
    std::vector<std::size_t> dual_repeller;  // node ids
};

struct AttractorReport {
    std::vector<AttractorPair> pairs;  // includes the empty and the full attractor
    bool cap_exceeded = false;
    /// Set when the enumeration completed: recurrent set == intersection of
    /// (A u A*) over all pairs.
    std::optional<bool> identity_holds;
};

inline constexpr std::size_t kAttractorCap = 1u << 12;

AttractorReport attractor_pairs(const BoxDigraph& dg, const Condensation& c,
                                std::size_t cap = kAttractorCap);

/// Extremal cycle means over the subgraph induced by `nodes` (must be
/// strongly connected with at least one edge). Minimum uses weight_lo,
/// maximum uses weight_hi.
struct CycleMeans {
    double min_mean = 0.0;
    double max_mean = 0.0;
};

CycleMeans cycle_means(const BoxDigraph& dg, const std::vector<std::size_t>& nodes);

/// Karp's recurrence on the same subgraph; O(n m), reference for small inputs.
CycleMeans cycle_means_karp(const BoxDigraph& dg, const std::vector<std::size_t>& nodes);

/// Boxes of the recurrent class of dg containing the box of p.
std::optional<std::size_t> class_containing(const BoxDigraph& dg, const Condensation& c,
                                            const AnnulusPoint& p);

/// Active mask on a finer grid over the same window: the boxes of `mask`
/// dilated by `halo` coarse boxes, subdivided. A trailing EXIT entry in
/// `mask` is ignored.
std::vector<char> refine_mask(const Grid& coarse, const std::vector<char>& mask, const Grid& fine,
                              int halo = 1);

}  // namespace annulus
