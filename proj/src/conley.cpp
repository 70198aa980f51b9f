#include "annulus/conley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>

#include "annulus/errors.hpp"

namespace annulus {

namespace {

constexpr double kEdgeSlack = 1e-12;
constexpr int kMaxDepth = 12;

}  // namespace

// ---------------------------------------------------------------------------
// Grid

void Window::validate() const {
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !std::isfinite(t_lo) || !std::isfinite(t_hi)) {
        throw ConfigError("window bounds must be finite");
    }
    if (!(x_lo < x_hi) || !(t_lo < t_hi)) throw ConfigError("window bounds must be ordered");
    if (x_hi - x_lo > 1.0 + 1e-12) throw ConfigError("window angular extent exceeds one turn");
}

Grid::Grid(Window window, int depth) : window_(window), depth_(depth) {
    window_.validate();
    if (depth < 0 || depth > kMaxDepth) {
        throw ConfigError("grid depth must lie in [0, " + std::to_string(kMaxDepth) + "]");
    }
    side_ = std::int64_t{1} << depth;
    cyclic_ = std::abs(window_.x_hi - window_.x_lo - 1.0) <= 1e-12;
    if (cyclic_) window_.x_hi = window_.x_lo + 1.0;
    dx_ = (window_.x_hi - window_.x_lo) / static_cast<double>(side_);
    dt_ = (window_.t_hi - window_.t_lo) / static_cast<double>(side_);
}

double Grid::box_diameter() const { return std::hypot(dx_, dt_); }

BoxBounds Grid::bounds(std::size_t id) const {
    const auto i = static_cast<double>(column(id));
    const auto j = static_cast<double>(row(id));
    return {window_.x_lo + i * dx_, window_.x_lo + (i + 1) * dx_, window_.t_lo + j * dt_,
            window_.t_lo + (j + 1) * dt_};
}

LiftPoint Grid::center(std::size_t id) const {
    const auto b = bounds(id);
    return {0.5 * (b.x0 + b.x1), 0.5 * (b.t0 + b.t1)};
}

double Grid::angular_offset(double x) const {
    const double u = x - window_.x_lo;
    const double r = u - std::floor(u);
    return r >= 1.0 ? 0.0 : r;
}

std::optional<std::size_t> Grid::box_of(const LiftPoint& p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.t)) return std::nullopt;
    double u = angular_offset(p.x);
    const double width = window_.x_hi - window_.x_lo;
    if (!cyclic_) {
        if (u > width) {
            if (u - width <= kEdgeSlack) {
                u = width;
            } else if (1.0 - u <= kEdgeSlack) {
                u = 0.0;
            } else {
                return std::nullopt;
            }
        }
    }
    const double v = p.t - window_.t_lo;
    const double height = window_.t_hi - window_.t_lo;
    if (v < -kEdgeSlack || v > height + kEdgeSlack) return std::nullopt;
    const auto i = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(u / dx_)), 0, side_ - 1);
    const auto j = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(v / dt_)), 0, side_ - 1);
    return id(i, j);
}

void Grid::boxes_near(const LiftPoint& p, double r, std::vector<std::size_t>& out) const {
    out.clear();
    const double u = angular_offset(p.x);
    const double v = p.t - window_.t_lo;
    const double height = window_.t_hi - window_.t_lo;
    if (v + r < 0.0 || v - r > height) return;
    const auto j0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((v - r) / dt_)));
    const auto j1 = std::min<std::int64_t>(side_ - 1, static_cast<std::int64_t>(std::floor((v + r) / dt_)));

    std::vector<std::int64_t> cols;
    if (cyclic_) {
        const auto i0 = static_cast<std::int64_t>(std::floor((u - r) / dx_));
        const auto i1 = static_cast<std::int64_t>(std::floor((u + r) / dx_));
        if (i1 - i0 + 1 >= side_) {
            for (std::int64_t i = 0; i < side_; ++i) cols.push_back(i);
        } else {
            for (std::int64_t i = i0; i <= i1; ++i) cols.push_back(((i % side_) + side_) % side_);
        }
    } else {
        const double width = window_.x_hi - window_.x_lo;
        for (double shift : {-1.0, 0.0, 1.0}) {
            const double a = u + shift - r, b = u + shift + r;
            if (b < 0.0 || a > width) continue;
            const auto i0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(a / dx_)));
            const auto i1 = std::min<std::int64_t>(side_ - 1, static_cast<std::int64_t>(std::floor(b / dx_)));
            for (std::int64_t i = i0; i <= i1; ++i) cols.push_back(i);
        }
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    }
    for (std::int64_t j = j0; j <= j1; ++j) {
        for (std::int64_t i : cols) out.push_back(id(i, j));
    }
}

// ---------------------------------------------------------------------------
// Transition digraph

std::optional<LiftPoint> power_image(const AnnulusMap& map, const LiftPoint& p, int power) {
    LiftPoint z = p;
    for (int k = 0; k < power; ++k) {
        if (!map.in_domain(z)) return std::nullopt;
        try {
            z = map.eval(z);
        } catch (const NumericError&) {
            return std::nullopt;
        }
    }
    return z;
}

bool BoxDigraph::has_edge(std::size_t u, std::size_t v) const {
    const auto first = targets_.begin() + static_cast<std::ptrdiff_t>(begin(u));
    const auto last = targets_.begin() + static_cast<std::ptrdiff_t>(end(u));
    return std::binary_search(first, last, static_cast<std::uint32_t>(v));
}

BoxDigraph BoxDigraph::from_edges(std::size_t nodes, const std::vector<Edge>& edges) {
    BoxDigraph g;
    g.grid_ = std::make_shared<const Grid>(Window{}, 0);
    std::vector<std::vector<std::pair<std::uint32_t, std::pair<double, double>>>> adj(nodes + 1);
    for (const auto& e : edges) {
        if (e.u >= nodes || e.v >= nodes) throw ConfigError("edge endpoint out of range");
        adj[e.u].push_back({static_cast<std::uint32_t>(e.v), {e.w_lo, e.w_hi}});
    }
    g.offsets_.assign(1, 0);
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        for (std::size_t k = 0; k < list.size();) {
            std::size_t m = k;
            double lo = list[k].second.first, hi = list[k].second.second;
            while (m < list.size() && list[m].first == list[k].first) {
                lo = std::min(lo, list[m].second.first);
                hi = std::max(hi, list[m].second.second);
                ++m;
            }
            g.targets_.push_back(list[k].first);
            g.w_lo_.push_back(lo);
            g.w_hi_.push_back(hi);
            k = m;
        }
        g.offsets_.push_back(g.targets_.size());
    }
    return g;
}

namespace {

struct LocalCsr {
    std::vector<std::size_t> counts;
    std::vector<std::uint32_t> targets;
    std::vector<double> lo, hi;
};

struct Hit {
    std::uint32_t target;
    double w;
    bool operator<(const Hit& o) const { return target < o.target || (target == o.target && w < o.w); }
};

void build_rows(const AnnulusMap& map, const Grid& grid, const TransitionOptions& opt, double eps,
                std::size_t first, std::size_t last, LocalCsr& out) {
    const auto exit_id = static_cast<std::uint32_t>(grid.size());
    const bool masked = !opt.active.empty();
    std::vector<Hit> hits;
    std::vector<std::size_t> near;
    std::vector<LiftPoint> samples;
    for (std::size_t b = first; b < last; ++b) {
        hits.clear();
        if (!masked || opt.active[b]) {
            const auto bb = grid.bounds(b);
            samples.assign({{bb.x0, bb.t0}, {bb.x1, bb.t0}, {bb.x0, bb.t1}, {bb.x1, bb.t1},
                            grid.center(b)});
            std::seed_seq seq{static_cast<std::uint64_t>(opt.seed), static_cast<std::uint64_t>(b)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> ux(bb.x0, bb.x1), ut(bb.t0, bb.t1);
            for (int k = 0; k < opt.interior_samples; ++k) samples.push_back({ux(rng), ut(rng)});

            for (const auto& s : samples) {
                const auto z = power_image(map, s, opt.power);
                if (!z) {
                    hits.push_back({exit_id, 0.0});
                    continue;
                }
                const double w = z->x - s.x;
                const auto home = grid.box_of(*z);
                if (!home || (masked && !opt.active[*home])) hits.push_back({exit_id, 0.0});
                grid.boxes_near(*z, eps, near);
                for (std::size_t v : near) {
                    if (masked && !opt.active[v]) continue;
                    hits.push_back({static_cast<std::uint32_t>(v), w});
                }
            }
            std::sort(hits.begin(), hits.end());
        }
        std::size_t count = 0;
        for (std::size_t k = 0; k < hits.size();) {
            std::size_t m = k;
            while (m < hits.size() && hits[m].target == hits[k].target) ++m;
            out.targets.push_back(hits[k].target);
            out.lo.push_back(hits[k].w);
            out.hi.push_back(hits[m - 1].w);
            ++count;
            k = m;
        }
        out.counts.push_back(count);
    }
}

}  // namespace

BoxDigraph transition_graph(const AnnulusMap& map, const Grid& grid, const TransitionOptions& options) {
    if (options.power < 1) throw ConfigError("digraph power must be >= 1");
    if (options.interior_samples < 0) throw ConfigError("interior sample count must be >= 0");
    if (!options.active.empty() && options.active.size() != grid.size()) {
        throw ConfigError("active mask size does not match the grid");
    }
    const double eps = options.eps > 0.0 ? options.eps : 2.0 * grid.box_diameter();
    if (!std::isfinite(eps)) throw ConfigError("eps must be finite");

    const std::size_t n = grid.size();
    unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, n / 64))));
    std::vector<LocalCsr> parts(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    if (threads == 1) {
        build_rows(map, grid, options, eps, 0, n, parts[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t a = std::min(n, t * chunk), b = std::min(n, (t + 1) * chunk);
            pool.emplace_back([&, a, b, t] { build_rows(map, grid, options, eps, a, b, parts[t]); });
        }
        for (auto& th : pool) th.join();
    }

    BoxDigraph g;
    g.grid_ = std::make_shared<const Grid>(grid);
    g.eps_ = eps;
    g.power_ = options.power;
    g.seed_ = options.seed;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.targets.size();
    g.targets_.reserve(total);
    g.w_lo_.reserve(total);
    g.w_hi_.reserve(total);
    g.offsets_.reserve(n + 2);
    for (auto& p : parts) {
        for (std::size_t c : p.counts) g.offsets_.push_back(g.offsets_.back() + c);
        g.targets_.insert(g.targets_.end(), p.targets.begin(), p.targets.end());
        g.w_lo_.insert(g.w_lo_.end(), p.lo.begin(), p.lo.end());
        g.w_hi_.insert(g.w_hi_.end(), p.hi.begin(), p.hi.end());
        p = LocalCsr{};
    }
    g.offsets_.push_back(g.offsets_.back());  // EXIT has no out-edges
    return g;
}

// ---------------------------------------------------------------------------
// Strongly connected components (iterative Tarjan)

std::vector<std::size_t> Condensation::recurrent_ids() const {
    std::vector<std::size_t> out;
    for (const auto& c : classes) {
        if (c.recurrent) out.push_back(c.id);
    }
    return out;
}

Condensation chain_classes(const BoxDigraph& dg) {
    const std::size_t n = dg.node_count();
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next edge
    std::vector<std::vector<std::size_t>> found;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        call.push_back({root, dg.begin(root)});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, e] = call.back();
            if (e < dg.end(v)) {
                const std::size_t w = dg.target(e++);
                if (index[w] == kUnset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, dg.begin(w)});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            call.pop_back();
            if (!call.empty()) {
                const std::size_t parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
            if (low[done] == index[done]) {
                std::vector<std::size_t> members;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = found.size();
                    members.push_back(w);
                } while (w != done);
                found.push_back(std::move(members));
            }
        }
    }

    // Tarjan emits sinks first; reverse for topological order.
    Condensation c;
    const std::size_t k = found.size();
    c.classes.resize(k);
    c.class_of.assign(n, 0);
    for (std::size_t s = 0; s < k; ++s) {
        auto& cls = c.classes[k - 1 - s];
        cls.id = k - 1 - s;
        cls.nodes = std::move(found[s]);
        std::sort(cls.nodes.begin(), cls.nodes.end());
        for (std::size_t v : cls.nodes) c.class_of[v] = cls.id;
    }
    for (auto& cls : c.classes) {
        if (cls.nodes.size() > 1) {
            cls.recurrent = true;
        } else {
            cls.recurrent = dg.has_edge(cls.nodes[0], cls.nodes[0]);
        }
    }
    return c;
}

std::vector<char> recurrent_mask(const BoxDigraph& dg, const Condensation& c) {
    std::vector<char> mask(dg.node_count(), 0);
    for (const auto& cls : c.classes) {
        if (!cls.recurrent) continue;
        for (std::size_t v : cls.nodes) mask[v] = 1;
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Lyapunov function

double CantorValue::value() const {
    return static_cast<double>(numerator) / std::pow(3.0, digits);
}

bool CantorValue::verify() const {
    if (digits < 0 || digits > 39 || numerator < 0) return false;
    std::int64_t scale = 1;
    for (int k = 0; k < digits; ++k) scale *= 3;
    if (numerator > scale) return false;
    std::int64_t n = numerator;
    for (int k = 0; k < digits; ++k) {
        if (n % 3 == 1) return false;
        n /= 3;
    }
    return n == 0;
}

namespace {

CantorValue cantor_code(std::int64_t code, int digits) {
    CantorValue v;
    v.digits = digits;
    std::int64_t p3 = 1;
    for (int k = 0; k < digits; ++k) {
        if ((code >> k) & 1) v.numerator += 2 * p3;
        p3 *= 3;
    }
    return v;
}

}  // namespace

GridLyapunov lyapunov(const BoxDigraph& dg) { return lyapunov(dg, chain_classes(dg)); }

GridLyapunov lyapunov(const BoxDigraph& dg, const Condensation& c) {
    const std::size_t k = c.classes.size();
    const auto rec = c.recurrent_ids();
    const auto r = static_cast<std::int64_t>(rec.size());
    int digits = 1;
    while ((std::int64_t{1} << digits) < r + 2) ++digits;
    if (digits > 39) throw ConfigError("too many recurrent classes for exact Cantor plateaus");

    GridLyapunov out;
    out.plateau.assign(k, std::nullopt);
    std::vector<double> class_value(k, 0.0);
    // Recurrent classes in topological order get decreasing codes r, r-1, ..., 1.
    for (std::int64_t j = 0; j < r; ++j) {
        const auto cv = cantor_code(r - j, digits);
        out.plateau[rec[static_cast<std::size_t>(j)]] = cv;
        class_value[rec[static_cast<std::size_t>(j)]] = cv.value();
    }
    // Transient runs interpolate strictly between the neighboring anchors
    // (1 before the first class, 0 after the last).
    std::size_t pos = 0;
    double upper = 1.0;
    while (pos < k) {
        std::size_t next = pos;
        while (next < k && !c.classes[next].recurrent) ++next;
        const double lower = next < k ? class_value[next] : 0.0;
        const std::size_t m = next - pos;
        for (std::size_t s = 0; s < m; ++s) {
            class_value[pos + s] =
                upper - (upper - lower) * static_cast<double>(s + 1) / static_cast<double>(m + 1);
        }
        if (next < k) upper = class_value[next];
        pos = next + 1;
    }
    out.value.resize(dg.node_count());
    for (std::size_t v = 0; v < dg.node_count(); ++v) out.value[v] = class_value[c.class_of[v]];
    return out;
}

LyapunovCheck verify_lyapunov(const BoxDigraph& dg, const Condensation& c, const GridLyapunov& l) {
    LyapunovCheck chk;
    for (std::size_t u = 0; u < dg.node_count(); ++u) {
        for (std::size_t e = dg.begin(u); e < dg.end(u); ++e) {
            const std::size_t v = dg.target(e);
            if (c.class_of[u] == c.class_of[v]) continue;
            ++chk.cross_edges;
            if (l.value[u] > l.value[v]) ++chk.decreasing;
        }
    }
    std::vector<double> plateaus;
    for (const auto& cls : c.classes) {
        if (!cls.recurrent) continue;
        const double v0 = l.value[cls.nodes.front()];
        for (std::size_t v : cls.nodes) {
            if (l.value[v] != v0) chk.plateaus_constant = false;
        }
        const auto& cv = l.plateau[cls.id];
        if (!cv || !cv->verify() || cv->value() != v0) chk.plateaus_cantor = false;
        plateaus.push_back(v0);
    }
    std::sort(plateaus.begin(), plateaus.end());
    if (std::adjacent_find(plateaus.begin(), plateaus.end()) != plateaus.end()) {
        chk.plateaus_distinct = false;
    }
    return chk;
}

// ---------------------------------------------------------------------------
// Attractor / dual repeller pairs

namespace {

struct Reverse {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> sources;
};

Reverse reverse_of(const BoxDigraph& dg) {
    const std::size_t n = dg.node_count();
    Reverse r;
    r.offsets.assign(n + 1, 0);
    for (std::size_t e = 0; e < dg.edge_count(); ++e) ++r.offsets[dg.target(e) + 1];
    for (std::size_t v = 0; v < n; ++v) r.offsets[v + 1] += r.offsets[v];
    r.sources.resize(dg.edge_count());
    auto fill = r.offsets;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t e = dg.begin(u); e < dg.end(u); ++e) {
            r.sources[fill[dg.target(e)]++] = static_cast<std::uint32_t>(u);
        }
    }
    return r;
}

std::vector<char> forward_reach(const BoxDigraph& dg, const std::vector<std::size_t>& seeds) {
    std::vector<char> seen(dg.node_count(), 0);
    std::vector<std::size_t> queue;
    for (std::size_t s : seeds) {
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const std::size_t u = queue.back();
        queue.pop_back();
        for (std::size_t e = dg.begin(u); e < dg.end(u); ++e) {
            const std::size_t v = dg.target(e);
            if (!seen[v]) {
                seen[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

std::vector<char> backward_reach(const Reverse& r, std::size_t n, const std::vector<std::size_t>& seeds) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> queue;
    for (std::size_t s : seeds) {
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const std::size_t v = queue.back();
        queue.pop_back();
        for (std::size_t k = r.offsets[v]; k < r.offsets[v + 1]; ++k) {
            const std::size_t u = r.sources[k];
            if (!seen[u]) {
                seen[u] = 1;
                queue.push_back(u);
            }
        }
    }
    return seen;
}

using Bits = std::vector<std::uint64_t>;

bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1u; }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

}  // namespace

AttractorReport attractor_pairs(const BoxDigraph& dg, const Condensation& c, std::size_t cap) {
    const std::size_t n = dg.node_count();
    const auto rec = c.recurrent_ids();
    const std::size_t r = rec.size();
    const std::size_t words = (r + 63) / 64 + 1;
    std::vector<std::size_t> ordinal(c.classes.size(), r);
    for (std::size_t j = 0; j < r; ++j) ordinal[rec[j]] = j;

    // below[k]: recurrent classes reachable from class k (excluding k itself).
    std::vector<Bits> below(c.classes.size(), Bits(words, 0));
    {
        std::vector<std::vector<std::size_t>> succ(c.classes.size());
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t e = dg.begin(u); e < dg.end(u); ++e) {
                const std::size_t a = c.class_of[u], b = c.class_of[dg.target(e)];
                if (a != b) succ[a].push_back(b);
            }
        }
        for (std::size_t k = c.classes.size(); k-- > 0;) {
            auto& s = succ[k];
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            for (std::size_t b : s) {
                for (std::size_t w = 0; w < words; ++w) below[k][w] |= below[b][w];
                if (ordinal[b] < r) set_bit(below[k], ordinal[b]);
            }
        }
    }

    // Enumerate downsets: S closed under "reachable from a member".
    AttractorReport report;
    std::set<Bits> seen;
    std::vector<Bits> order;
    const Bits empty(words, 0);
    seen.insert(empty);
    order.push_back(empty);
    for (std::size_t head = 0; head < order.size(); ++head) {
        const Bits cur = order[head];
        for (std::size_t j = 0; j < r; ++j) {
            if (test_bit(cur, j)) continue;
            const Bits& need = below[rec[j]];
            bool closed = true;
            for (std::size_t w = 0; w < words && closed; ++w) closed = (need[w] & ~cur[w]) == 0;
            if (!closed) continue;
            Bits next = cur;
            set_bit(next, j);
            if (seen.insert(next).second) {
                if (order.size() >= cap) {
                    report.cap_exceeded = true;
                    break;
                }
                order.push_back(std::move(next));
            }
        }
        if (report.cap_exceeded) break;
    }

    const Reverse rev = reverse_of(dg);
    std::vector<std::size_t> rec_nodes;
    for (std::size_t id : rec) {
        rec_nodes.insert(rec_nodes.end(), c.classes[id].nodes.begin(), c.classes[id].nodes.end());
    }
    const auto from_rec = forward_reach(dg, rec_nodes);
    const auto to_rec = backward_reach(rev, n, rec_nodes);

    std::vector<char> meet(n, 1);
    for (const Bits& s : order) {
        AttractorPair pair;
        std::vector<std::size_t> in_nodes, out_nodes;
        for (std::size_t j = 0; j < r; ++j) {
            const auto& nodes = c.classes[rec[j]].nodes;
            if (test_bit(s, j)) {
                pair.morse_classes.push_back(rec[j]);
                in_nodes.insert(in_nodes.end(), nodes.begin(), nodes.end());
            } else {
                out_nodes.insert(out_nodes.end(), nodes.begin(), nodes.end());
            }
        }
        const auto reach_s = forward_reach(dg, in_nodes);
        const auto reaches_rest = backward_reach(rev, n, out_nodes);
        for (std::size_t v = 0; v < n; ++v) {
            const bool inv = from_rec[v] && to_rec[v];
            const bool in_a = inv && reach_s[v];
            const bool in_dual = inv && !reach_s[v] && reaches_rest[v];
            if (in_a) pair.attractor.push_back(v);
            if (in_dual) pair.dual_repeller.push_back(v);
            if (!in_a && !in_dual) meet[v] = 0;
        }
        report.pairs.push_back(std::move(pair));
    }
    if (!report.cap_exceeded) {
        const auto rmask = recurrent_mask(dg, c);
        report.identity_holds = std::equal(rmask.begin(), rmask.end(), meet.begin(),
                                           [](char a, char b) { return (a != 0) == (b != 0); });
    }
    return report;
}

// ---------------------------------------------------------------------------
// Cycle means

namespace {

struct SubGraph {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> targets;
    std::vector<double> weight;
};

SubGraph induced(const BoxDigraph& dg, const std::vector<std::size_t>& nodes, bool upper, double sign) {
    std::unordered_map<std::size_t, std::uint32_t> local;
    local.reserve(nodes.size() * 2);
    for (std::size_t k = 0; k < nodes.size(); ++k) local.emplace(nodes[k], static_cast<std::uint32_t>(k));
    SubGraph g;
    g.offsets.push_back(0);
    for (std::size_t u : nodes) {
        for (std::size_t e = dg.begin(u); e < dg.end(u); ++e) {
            const auto it = local.find(dg.target(e));
            if (it == local.end()) continue;
            g.targets.push_back(it->second);
            g.weight.push_back(sign * (upper ? dg.weight_hi(e) : dg.weight_lo(e)));
        }
        g.offsets.push_back(g.targets.size());
    }
    for (std::size_t u = 0; u < nodes.size(); ++u) {
        if (g.offsets[u] == g.offsets[u + 1]) {
            throw ConfigError("cycle means need every node of the class to have an internal edge");
        }
    }
    return g;
}

// Howard policy iteration for the maximum cycle mean.
double howard_max(const SubGraph& g) {
    const std::size_t n = g.offsets.size() - 1;
    constexpr double kTol = 1e-12;
    std::vector<std::size_t> policy(n);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t best = g.offsets[v];
        for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
            if (g.weight[e] > g.weight[best]) best = e;
        }
        policy[v] = best;
    }
    std::vector<double> eta(n), x(n);
    std::vector<std::size_t> stamp(n);
    std::vector<std::size_t> path;
    for (int iter = 0; iter < 100000; ++iter) {
        // Value determination on the functional graph of the policy.
        constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
        std::fill(stamp.begin(), stamp.end(), kNone);
        std::vector<char> solved(n, 0);
        for (std::size_t s = 0; s < n; ++s) {
            if (solved[s]) continue;
            path.clear();
            std::size_t v = s;
            while (!solved[v] && stamp[v] != s) {
                stamp[v] = s;
                path.push_back(v);
                v = g.targets[policy[v]];
            }
            std::size_t stop = path.size();
            if (!solved[v]) {
                // v closes a new cycle inside path.
                const std::size_t start =
                    static_cast<std::size_t>(std::find(path.begin(), path.end(), v) - path.begin());
                double sum = 0.0;
                for (std::size_t k = start; k < path.size(); ++k) sum += g.weight[policy[path[k]]];
                const double mean = sum / static_cast<double>(path.size() - start);
                x[v] = 0.0;
                eta[v] = mean;
                solved[v] = 1;
                for (std::size_t k = path.size(); k-- > start + 1;) {
                    const std::size_t u = path[k];
                    const std::size_t w = g.targets[policy[u]];
                    eta[u] = mean;
                    x[u] = g.weight[policy[u]] - mean + x[w];
                    solved[u] = 1;
                }
                stop = start;
            }
            for (std::size_t k = stop; k-- > 0;) {
                const std::size_t u = path[k];
                const std::size_t w = g.targets[policy[u]];
                eta[u] = eta[w];
                x[u] = g.weight[policy[u]] - eta[w] + x[w];
                solved[u] = 1;
            }
        }
        // Policy improvement: first on eta, then on x.
        bool changed = false;
        for (std::size_t v = 0; v < n; ++v) {
            std::size_t best = policy[v];
            double best_eta = eta[g.targets[best]];
            for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                if (eta[g.targets[e]] > best_eta + kTol) {
                    best = e;
                    best_eta = eta[g.targets[e]];
                }
            }
            if (best != policy[v] && best_eta > eta[v] + kTol) {
                policy[v] = best;
                changed = true;
            }
        }
        if (!changed) {
            for (std::size_t v = 0; v < n; ++v) {
                std::size_t best = policy[v];
                double best_val = x[v];
                for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                    const std::size_t w = g.targets[e];
                    if (std::abs(eta[w] - eta[v]) > kTol) continue;
                    const double val = g.weight[e] - eta[v] + x[w];
                    if (val > best_val + kTol) {
                        best = e;
                        best_val = val;
                    }
                }
                if (best != policy[v]) {
                    policy[v] = best;
                    changed = true;
                }
            }
        }
        if (!changed) return *std::max_element(eta.begin(), eta.end());
    }
    throw NoConvergence("policy iteration for cycle means did not converge");
}

double karp_max(const SubGraph& g) {
    const std::size_t n = g.offsets.size() - 1;
    if (n > 4000) throw ConfigError("Karp reference limited to 4000 nodes");
    constexpr double kNeg = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, kNeg));
    d[0][0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t u = 0; u < n; ++u) {
            if (d[k - 1][u] == kNeg) continue;
            for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
                const std::size_t v = g.targets[e];
                d[k][v] = std::max(d[k][v], d[k - 1][u] + g.weight[e]);
            }
        }
    }
    double best = kNeg;
    for (std::size_t v = 0; v < n; ++v) {
        if (d[n][v] == kNeg) continue;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            if (d[k][v] == kNeg) continue;
            worst = std::min(worst, (d[n][v] - d[k][v]) / static_cast<double>(n - k));
        }
        best = std::max(best, worst);
    }
    return best;
}

}  // namespace

CycleMeans cycle_means(const BoxDigraph& dg, const std::vector<std::size_t>& nodes) {
    if (nodes.empty()) throw ConfigError("cycle means of an empty class");
    CycleMeans out;
    out.max_mean = howard_max(induced(dg, nodes, true, 1.0));
    out.min_mean = 0.0 - howard_max(induced(dg, nodes, false, -1.0));
    return out;
}

CycleMeans cycle_means_karp(const BoxDigraph& dg, const std::vector<std::size_t>& nodes) {
    if (nodes.empty()) throw ConfigError("cycle means of an empty class");
    CycleMeans out;
    out.max_mean = karp_max(induced(dg, nodes, true, 1.0));
    out.min_mean = 0.0 - karp_max(induced(dg, nodes, false, -1.0));
    return out;
}

std::optional<std::size_t> class_containing(const BoxDigraph& dg, const Condensation& c,
                                            const AnnulusPoint& p) {
    const auto box = dg.grid().box_of(p);
    if (!box) return std::nullopt;
    const std::size_t id = c.class_of[*box];
    if (!c.classes[id].recurrent) return std::nullopt;
    return id;
}

std::vector<char> refine_mask(const Grid& coarse, const std::vector<char>& mask, const Grid& fine,
                              int halo) {
    if (mask.size() != coarse.size() && mask.size() != coarse.size() + 1) {
        throw ConfigError("mask size does not match the coarse grid");
    }
    if (fine.depth() < coarse.depth()) throw ConfigError("refinement needs a finer grid");
    const Window& a = coarse.window();
    const Window& b = fine.window();
    if (a.x_lo != b.x_lo || a.x_hi != b.x_hi || a.t_lo != b.t_lo || a.t_hi != b.t_hi) {
        throw ConfigError("refinement needs identical windows");
    }
    const std::int64_t n = coarse.side();
    const std::int64_t f = fine.side() / n;
    std::vector<char> out(fine.size(), 0);
    for (std::size_t id = 0; id < coarse.size(); ++id) {
        if (!mask[id]) continue;
        const std::int64_t ci = coarse.column(id), cj = coarse.row(id);
        for (std::int64_t dj = -halo; dj <= halo; ++dj) {
            const std::int64_t j = cj + dj;
            if (j < 0 || j >= n) continue;
            for (std::int64_t di = -halo; di <= halo; ++di) {
                std::int64_t i = ci + di;
                if (coarse.cyclic()) {
                    i = ((i % n) + n) % n;
                } else if (i < 0 || i >= n) {
                    continue;
                }
                for (std::int64_t fj = j * f; fj < (j + 1) * f; ++fj) {
                    for (std::int64_t fi = i * f; fi < (i + 1) * f; ++fi) out[fine.id(fi, fj)] = 1;
                }
            }
        }
    }
    return out;
}

}  // namespace annulus
