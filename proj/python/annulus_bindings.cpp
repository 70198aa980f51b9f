// Python module _annulus. Points cross the boundary as (x, t) tuples,
// exact rationals as (numerator, denominator) pairs.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "annulus/conley.hpp"
#include "annulus/emit.hpp"
#include "annulus/errors.hpp"
#include "annulus/map_spec.hpp"
#include "annulus/periodic_search.hpp"
#include "annulus/rotation_analysis.hpp"

namespace py = pybind11;
using namespace annulus;

namespace {

using Pair = std::pair<double, double>;
using Frac = std::pair<std::int64_t, std::int64_t>;

LiftPoint lp(const Pair& p) { return {p.first, p.second}; }
Pair tup(const LiftPoint& p) { return {p.x, p.t}; }
Frac frac(const Rational& r) { return {r.numerator(), r.denominator()}; }

RotationParam rotation_param(const py::object& v) {
    if (py::isinstance<py::str>(v)) return RotationParam::parse(v.cast<std::string>());
    return RotationParam::resolve(v.cast<double>());
}

Window window_of(const std::optional<std::vector<double>>& w, MapVariant variant) {
    if (!w) return variant == MapVariant::horseshoe_core ? Window::horseshoe() : Window{0.0, 1.0, -15.0, 15.0};
    if (w->size() != 4) throw ConfigError("window needs (x_lo, x_hi, t_lo, t_hi)");
    Window out{(*w)[0], (*w)[1], (*w)[2], (*w)[3]};
    out.validate();
    return out;
}

// Grid, digraph and condensation kept together so class ids stay meaningful.
struct ChainRun {
    std::shared_ptr<Grid> grid;
    BoxDigraph dg;
    Condensation cond;
    TransitionOptions options;
    nlohmann::json config;
};

std::shared_ptr<ChainRun> make_run(const AnnulusMap& map, const std::optional<std::vector<double>>& window,
                                   int depth, std::optional<double> eps, int samples, std::uint64_t seed,
                                   unsigned threads) {
    auto r = std::make_shared<ChainRun>();
    const Window w = window_of(window, map.variant());
    if (depth < 1 || depth > 12) throw ConfigError("depth must lie in [1, 12]");
    r->grid = std::make_shared<Grid>(w, depth);
    r->options.seed = seed;
    r->options.interior_samples = samples;
    r->options.threads = threads;
    if (eps) r->options.eps = *eps;
    {
        py::gil_scoped_release nogil;
        r->dg = transition_graph(map, *r->grid, r->options);
        r->cond = chain_classes(r->dg);
    }
    r->config = {{"map", to_json(spec_of(map))},
                 {"seed", seed},
                 {"grid", {{"window", {w.x_lo, w.x_hi, w.t_lo, w.t_hi}}, {"depth", depth},
                           {"eps", r->dg.eps()}, {"interior_samples", samples}}}};
    return r;
}

py::dict interval_dict(const RotationInterval& ri) {
    py::dict d;
    d["lo"] = ri.lo;
    d["hi"] = ri.hi;
    d["slack"] = ri.slack;
    d["method"] = ri.method;
    return d;
}

}  // namespace

PYBIND11_MODULE(_annulus, m) {
    m.doc() = "Rotation, chain recurrence and periodic orbits of annulus homeomorphisms";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto config_error = py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    auto numeric_error = py::register_exception<NumericError>(m, "NumericError", error.ptr());
    py::register_exception<NearRational>(m, "NearRational", config_error.ptr());
    py::register_exception<AmbiguousLift>(m, "AmbiguousLift", config_error.ptr());
    py::register_exception<OutOfDomain>(m, "OutOfDomain", numeric_error.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", numeric_error.ptr());
    py::register_exception<NotPeriodic>(m, "NotPeriodic", numeric_error.ptr());
    py::register_exception<NotLifted>(m, "NotLifted", numeric_error.ptr());
    py::register_exception<ItineraryViolation>(m, "ItineraryViolation", numeric_error.ptr());
    py::register_exception<ZeroOnBoundary>(m, "ZeroOnBoundary", numeric_error.ptr());
    py::register_exception<UnresolvedWinding>(m, "UnresolvedWinding", numeric_error.ptr());
    py::register_exception<InvalidChain>(m, "InvalidChain", numeric_error.ptr());
    py::register_exception<NotInBasin>(m, "NotInBasin", numeric_error.ptr());

    py::class_<AnnulusMap>(m, "AnnulusMap")
        .def_property_readonly("variant", [](const AnnulusMap& a) { return to_string(a.variant()); })
        .def("eval", [](const AnnulusMap& a, const Pair& p) { return tup(a.eval(lp(p))); }, py::arg("point"))
        .def("inverse", [](const AnnulusMap& a, const Pair& p) { return tup(a.inverse(lp(p))); }, py::arg("point"))
        .def("in_domain", [](const AnnulusMap& a, const Pair& p) { return a.in_domain(lp(p)); }, py::arg("point"))
        .def("spec_json", [](const AnnulusMap& a) { return dump_map_spec(spec_of(a)); })
        .def("__repr__", [](const AnnulusMap& a) { return "<AnnulusMap " + to_string(a.variant()) + ">"; });

    m.def("horseshoe_core", &build_horseshoe_core);
    m.def(
        "paper_example",
        [](const py::object& alpha, const py::object& beta, double denjoy_tol) {
            Tolerances tol;
            tol.denjoy = denjoy_tol;
            return build_paper_example(rotation_param(alpha), rotation_param(beta), tol);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("denjoy_tol") = kDefaultDenjoyTol,
        "alpha, beta: float or 'p/q' string, resolved through the irrationality guard");
    m.def("rigid_translation", &build_rigid_translation, py::arg("alpha"), py::arg("drift"));
    m.def("map_from_spec", [](const std::string& text) { return build_map(parse_map_spec(text)); },
          py::arg("text"));

    m.def(
        "birkhoff_rotation",
        [](const AnnulusMap& a, const Pair& p, std::int64_t n, bool backward) {
            const auto r = birkhoff_rotation(a, lp(p), n, backward ? Direction::backward : Direction::forward);
            return py::make_tuple(r.value, r.steps, r.complete);
        },
        py::arg("map"), py::arg("point"), py::arg("n"), py::arg("backward") = false,
        "(value, steps, complete)");

    m.def(
        "classify_basin",
        [](const AnnulusMap& a, const Pair& p, double t_hi, double t_lo, std::int64_t max_iter) {
            const auto r = classify_basin(a, {p.first, p.second}, t_hi, t_lo, max_iter);
            py::dict d;
            d["verdict"] = to_string(r.verdict());
            d["plus"] = r.plus;
            d["minus"] = r.minus;
            d["plus_steps"] = r.plus_steps;
            d["minus_steps"] = r.minus_steps;
            d["max_backward_t"] = r.max_backward_t;
            d["min_forward_t"] = r.min_forward_t;
            return d;
        },
        py::arg("map"), py::arg("point"), py::arg("t_hi") = 15.0, py::arg("t_lo") = -15.0,
        py::arg("max_iter") = 10000);

    py::class_<ChainRun, std::shared_ptr<ChainRun>>(m, "ChainRun")
        .def_property_readonly("nodes", [](const ChainRun& r) { return r.dg.node_count(); })
        .def_property_readonly("edges", [](const ChainRun& r) { return r.dg.edge_count(); })
        .def_property_readonly("eps", [](const ChainRun& r) { return r.dg.eps(); })
        .def("recurrent_classes",
             [](const ChainRun& r) {
                 std::vector<std::pair<std::size_t, std::size_t>> out;
                 for (const auto& c : r.cond.classes) {
                     if (c.recurrent) out.emplace_back(c.id, c.nodes.size());
                 }
                 return out;
             },
             "[(class id, box count)] of recurrent classes")
        .def("class_of",
             [](const ChainRun& r, const Pair& p) -> std::optional<std::size_t> {
                 const auto box = r.grid->box_of(AnnulusPoint{p.first, p.second});
                 if (!box) return std::nullopt;
                 return r.cond.class_of[*box];
             },
             py::arg("point"))
        .def("is_recurrent", [](const ChainRun& r, std::size_t id) { return r.cond.classes.at(id).recurrent; },
             py::arg("class_id"))
        .def("rotation_interval",
             [](const ChainRun& r, std::optional<std::size_t> id) {
                 return interval_dict(id ? rotation_interval_of_class(r.dg, r.cond, *id)
                                         : rotation_interval_of_recurrent_set(r.dg, r.cond));
             },
             py::arg("class_id") = py::none())
        .def("lyapunov",
             [](const ChainRun& r, std::size_t cap) {
                 const auto l = lyapunov(r.dg, r.cond);
                 const auto chk = verify_lyapunov(r.dg, r.cond, l);
                 const auto rep = attractor_pairs(r.dg, r.cond, cap);
                 py::dict d;
                 d["values"] = l.value;
                 d["ok"] = chk.ok();
                 d["cross_edges"] = chk.cross_edges;
                 d["decreasing"] = chk.decreasing;
                 d["attractor_pairs"] = rep.pairs.size();
                 d["cap_exceeded"] = rep.cap_exceeded;
                 d["identity_holds"] = rep.identity_holds;
                 return d;
             },
             py::arg("cap") = kAttractorCap)
        .def("box_table_csv",
             [](const ChainRun& r, bool with_lyapunov) {
                 if (!with_lyapunov) return box_table_csv(r.config, box_rows(r.dg, r.cond));
                 const auto l = lyapunov(r.dg, r.cond);
                 return box_table_csv(r.config, box_rows(r.dg, r.cond, &l.value));
             },
             py::arg("with_lyapunov") = false);

    m.def("chain_classes", &make_run, py::arg("map"), py::arg("window") = py::none(), py::arg("depth") = 6,
          py::arg("eps") = py::none(), py::arg("samples") = 8, py::arg("seed") = 1, py::arg("threads") = 0,
          "Box digraph and its chain classes; eps=None selects twice the box diameter");

    m.def(
        "svg_from_csv",
        [](const std::string& csv, const std::string& coloring, int pixels) {
            if (coloring != "class" && coloring != "value") throw ConfigError("coloring must be 'class' or 'value'");
            return svg_from_csv(csv, coloring == "class" ? SvgColoring::chain_class : SvgColoring::value, pixels);
        },
        py::arg("csv"), py::arg("coloring") = "class", py::arg("pixels") = 512);

    m.def(
        "rotation_of_periodic",
        [](const AnnulusMap& a, const Pair& p, std::int64_t q, double tol) {
            const auto r = rotation_of_periodic(a, lp(p), q, tol);
            return Frac{r.p, r.q};
        },
        py::arg("map"), py::arg("point"), py::arg("q"), py::arg("tol") = kDefaultLiftTol, "(p, q), not reduced");

    m.def(
        "prime_end_rotation",
        [](const AnnulusMap& a, const Pair& seed, std::int64_t n, const std::string& end, double t_hi,
           double t_lo, std::int64_t basin_iter) {
            if (end != "plus" && end != "minus") throw ConfigError("end must be 'plus' or 'minus'");
            PrimeEndOptions opt{t_hi, t_lo, basin_iter};
            const auto r = prime_end_rotation_estimate(a, {seed.first, seed.second}, n,
                                                       end == "plus" ? End::plus : End::minus, opt);
            py::dict d;
            d["value"] = r.value;
            d["n"] = r.n;
            d["basin_steps"] = r.basin_steps;
            d["complete"] = r.complete;
            return d;
        },
        py::arg("map"), py::arg("seed"), py::arg("n"), py::arg("end"), py::arg("t_hi") = 15.0,
        py::arg("t_lo") = -15.0, py::arg("basin_iter") = 10000);

    m.def(
        "atkinson_small_sums",
        [](const AnnulusMap& a, const py::object& start, std::int64_t p, std::int64_t q, double eps,
           std::int64_t n_max) {
            if (py::isinstance<py::str>(start)) {
                return atkinson_small_sums(a, horseshoe_symbolic_point(start.cast<std::string>()).point, p, q,
                                           eps, n_max);
            }
            return atkinson_small_sums(a, lp(start.cast<Pair>()), p, q, eps, n_max);
        },
        py::arg("map"), py::arg("start"), py::arg("p"), py::arg("q"), py::arg("eps"), py::arg("n_max"),
        "start is a point or a horseshoe itinerary word (exact arithmetic)");

    m.def(
        "find_periodic",
        [](const AnnulusMap& a, std::int64_t q, std::int64_t p, std::optional<std::vector<double>> window,
           int depth, double tol) {
            SearchOptions opt;
            if (window) {
                if (window->size() != 4) throw ConfigError("window needs (x_lo, x_hi, t_lo, t_hi)");
                opt.window = {(*window)[0], (*window)[1], (*window)[2], (*window)[3]};
            }
            opt.depth = depth;
            opt.tol = tol;
            SearchResult r;
            {
                py::gil_scoped_release nogil;
                r = find_fixed_points_of_power(a, q, p, opt);
            }
            py::list out;
            for (const auto& o : r.orbits) {
                py::dict d;
                d["point"] = tup(o.point);
                d["residual"] = o.residual;
                d["index"] = o.index;
                d["rotation"] = Frac{o.rotation.p, o.rotation.q};
                out.append(d);
            }
            return out;
        },
        py::arg("map"), py::arg("q"), py::arg("p"), py::arg("window") = py::none(), py::arg("depth") = 10,
        py::arg("tol") = 1e-10, "Certified fixed points of T^-p h^q");

    m.def(
        "fixed_point_index",
        [](const AnnulusMap& a, std::int64_t q, std::int64_t p, const Pair& center, double radius, int samples) {
            return fixed_point_index(power_map(a, q, p), square_loop(lp(center), radius), samples);
        },
        py::arg("map"), py::arg("q"), py::arg("p"), py::arg("center"), py::arg("radius"),
        py::arg("samples") = kDefaultIndexSamples);

    m.def(
        "symbolic_point",
        [](const std::string& word) {
            const auto s = horseshoe_symbolic_point(word);
            std::vector<std::pair<Frac, Frac>> orbit;
            for (const auto& z : s.orbit) orbit.emplace_back(frac(z.x), frac(z.t));
            py::dict d;
            d["point"] = std::make_pair(frac(s.point.x), frac(s.point.t));
            d["p"] = s.p;
            d["q"] = s.q;
            d["orbit"] = orbit;
            return d;
        },
        py::arg("word"));

    m.def(
        "heteroclinic_chain",
        [](double eps) {
            std::vector<Pair> out;
            for (const auto& z : horseshoe_heteroclinic_chain(eps).points) out.emplace_back(z.theta, z.t);
            return out;
        },
        py::arg("eps"));

    m.def(
        "chain_dynamical_index",
        [](const AnnulusMap& a, const std::vector<Pair>& chain, double delta) {
            std::vector<AnnulusPoint> pts;
            for (const auto& z : chain) pts.push_back({z.first, z.second});
            const auto r = chain_dynamical_index(a, pts, delta);
            return std::make_pair(r.i, r.j);
        },
        py::arg("map"), py::arg("chain"), py::arg("delta"), "(i, j)");

    m.def(
        "concat_solver",
        [](std::int64_t a, std::int64_t b, std::int64_t p1, std::int64_t p2, std::int64_t eta_min) {
            const auto s = concat_solver(a, b, p1, p2, eta_min);
            return py::make_tuple(s.eta, s.xi, s.zeta);
        },
        py::arg("a"), py::arg("b"), py::arg("p1"), py::arg("p2"), py::arg("eta_min") = 1, "(eta, xi, zeta)");
}
