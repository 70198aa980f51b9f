// annulus: command line front end. JSON results go to stdout or --out,
// box tables to --csv, rasters to --svg. Every artifact embeds the config.
//
// Exit codes: 0 ok, 2 configuration error, 3 numeric failure, 4 partial result.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "annulus/conley.hpp"
#include "annulus/emit.hpp"
#include "annulus/errors.hpp"
#include "annulus/map_spec.hpp"
#include "annulus/periodic_search.hpp"
#include "annulus/rotation_analysis.hpp"

using namespace annulus;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPartial = 4;

struct MapArgs {
    std::string path;
    std::string variant;
    std::string alpha = "1/3";
    std::string beta = "0.41421356237309503";
    double drift = -1.0;
    double denjoy_tol = kDefaultDenjoyTol;
};

void add_map_options(CLI::App* cmd, MapArgs& m, const std::string& default_variant) {
    m.variant = default_variant;
    cmd->add_option("--map", m.path, "map-spec JSON file (overrides the inline parameters)");
    cmd->add_option("--variant", m.variant, "paper_example | horseshoe_core | rigid_translation")
        ->capture_default_str();
    cmd->add_option("--alpha", m.alpha, "rotation number at the plus end (or of the rigid map), p/q or decimal")
        ->capture_default_str();
    cmd->add_option("--beta", m.beta, "rotation number at the minus end")->capture_default_str();
    cmd->add_option("--drift", m.drift, "vertical drift of the rigid translation")->capture_default_str();
    cmd->add_option("--denjoy-tol", m.denjoy_tol, "truncation tolerance of Denjoy tables")->capture_default_str();
}

MapSpec resolve_spec(const MapArgs& m) {
    if (!m.path.empty()) return load_map_spec(m.path);
    MapSpec s;
    s.variant = parse_variant(m.variant);
    if (!(m.denjoy_tol >= 1e-7 && m.denjoy_tol < 1.0)) throw ConfigError("--denjoy-tol must lie in [1e-7, 1)");
    s.tolerances.denjoy = m.denjoy_tol;
    if (s.variant == MapVariant::paper_example) {
        s.alpha = RotationParam::parse(m.alpha);
        s.beta = RotationParam::parse(m.beta);
    } else if (s.variant == MapVariant::rigid_translation) {
        s.alpha = RotationParam::parse(m.alpha);
        if (!std::isfinite(m.drift)) throw ConfigError("--drift must be finite");
        s.drift = m.drift;
    }
    return s;
}

struct GridArgs {
    std::string window;  // "x_lo,x_hi,t_lo,t_hi"
    int depth = 6;
    std::string eps = "auto";
    int samples = 8;
    unsigned threads = 0;
};

void add_grid_options(CLI::App* cmd, GridArgs& g) {
    cmd->add_option("--window", g.window, "x_lo,x_hi,t_lo,t_hi (default: R for the horseshoe, [0,1]x[-15,15] otherwise)");
    cmd->add_option("--depth", g.depth, "grid depth d (2^d x 2^d boxes)")->capture_default_str();
    cmd->add_option("--eps", g.eps, "image dilation, or 'auto' for twice the box diameter")->capture_default_str();
    cmd->add_option("--samples", g.samples, "random interior samples per box")->capture_default_str();
    cmd->add_option("--threads", g.threads, "worker threads, 0 = all cores")->capture_default_str();
}

std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse " + what + " '" + text + "'");
        }
    }
    if (v.size() != n) throw ConfigError(what + " needs " + std::to_string(n) + " comma separated numbers");
    return v;
}

Window resolve_window(const GridArgs& g, MapVariant v) {
    if (g.window.empty()) return v == MapVariant::horseshoe_core ? Window::horseshoe() : Window{0.0, 1.0, -15.0, 15.0};
    const auto w = parse_list(g.window, 4, "--window");
    Window out{w[0], w[1], w[2], w[3]};
    out.validate();
    return out;
}

TransitionOptions resolve_transition(const GridArgs& g, std::uint64_t seed) {
    if (g.depth < 1 || g.depth > 12) throw ConfigError("--depth must lie in [1, 12]");
    if (g.samples < 0) throw ConfigError("--samples must be >= 0");
    TransitionOptions t;
    t.seed = seed;
    t.interior_samples = g.samples;
    t.threads = g.threads;
    if (g.eps != "auto") {
        const double e = parse_list(g.eps, 1, "--eps")[0];
        if (!(e > 0.0)) throw ConfigError("--eps must be positive");
        t.eps = e;
    }
    return t;
}

json window_json(const Window& w) { return {w.x_lo, w.x_hi, w.t_lo, w.t_hi}; }

json point_json(const LiftPoint& p) { return {p.x, p.t}; }

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

struct Output {
    std::string out;
    std::string csv;
    std::string svg;
};

void emit_json(const Output& o, const json& config, const json& result) {
    const json doc{{"config", config}, {"result", result}};
    write_text(o.out, doc.dump(2) + "\n");
}

// Builds the common part of every config record.
json base_config(const std::string& command, const MapSpec& spec, std::uint64_t seed) {
    return {{"command", command}, {"map", to_json(spec)}, {"seed", seed}};
}

struct PointArgs {
    double theta = 0.0;
    double t = 0.0;
};

void add_point_options(CLI::App* cmd, PointArgs& p, double theta, double t) {
    p.theta = theta;
    p.t = t;
    cmd->add_option("--theta", p.theta, "angular coordinate (lift)")->capture_default_str();
    cmd->add_option("--t", p.t, "height")->capture_default_str();
}

std::vector<AnnulusPoint> parse_points(const std::vector<std::string>& items) {
    std::vector<AnnulusPoint> out;
    for (const auto& s : items) {
        const auto v = parse_list(s, 2, "--point");
        out.push_back({v[0], v[1]});
    }
    return out;
}

struct GridRun {
    Window window;
    TransitionOptions options;
    std::unique_ptr<Grid> grid;
    BoxDigraph dg;
    Condensation cond;
};

GridRun build_grid(const AnnulusMap& map, const GridArgs& g, std::uint64_t seed) {
    GridRun r;
    r.window = resolve_window(g, map.variant());
    r.options = resolve_transition(g, seed);
    r.grid = std::make_unique<Grid>(r.window, g.depth);
    r.dg = transition_graph(map, *r.grid, r.options);
    r.cond = chain_classes(r.dg);
    return r;
}

json grid_config(const GridArgs& g, const GridRun& r) {
    return {{"window", window_json(r.window)}, {"depth", g.depth}, {"eps", r.dg.eps()},
            {"interior_samples", g.samples}};
}

std::vector<AnnulusPoint> default_marks(const AnnulusMap& map) {
    if (map.variant() == MapVariant::horseshoe_core) return {{0.0, 0.0}, {0.25, -0.25}};
    return {};
}

std::string rational_string(const Rational& r) {
    return std::to_string(r.numerator()) + (r.denominator() == 1 ? "" : "/" + std::to_string(r.denominator()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotation, chain recurrence and periodic orbits of annulus homeomorphisms"};
    app.require_subcommand(1);
    app.fallthrough();  // --seed and --out may follow the subcommand
    std::uint64_t seed = 1;
    Output out;
    app.add_option("--seed", seed, "seed of the sampling RNG")->capture_default_str();
    app.add_option("--out", out.out, "JSON output file (default stdout)");

    int status = kExitOk;
    std::function<void()> action;

    // example build
    auto* example = app.add_subcommand("example", "construct example systems");
    example->require_subcommand(1);
    MapArgs ex_map;
    auto* ex_build = example->add_subcommand("build", "write a map-spec file");
    add_map_options(ex_build, ex_map, "horseshoe_core");
    ex_build->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(ex_map);
            build_map(spec);  // validates the parameters
            write_text(out.out, dump_map_spec(spec) + "\n");
        };
    });

    // orbit
    auto* orbit = app.add_subcommand("orbit", "iterate a point and report the Birkhoff rotation average");
    MapArgs orb_map;
    PointArgs orb_pt;
    std::int64_t orb_n = 100;
    bool orb_back = false;
    add_map_options(orbit, orb_map, "paper_example");
    add_point_options(orbit, orb_pt, 0.0, 20.0);
    orbit->add_option("--n", orb_n, "number of iterates")->capture_default_str();
    orbit->add_flag("--backward", orb_back, "iterate the inverse");
    orbit->add_option("--csv", out.csv, "orbit table");
    orbit->callback([&] {
        action = [&] {
            if (orb_n < 1) throw ConfigError("--n must be >= 1");
            const auto spec = resolve_spec(orb_map);
            const auto map = build_map(spec);
            json config = base_config("orbit", spec, seed);
            config["theta"] = orb_pt.theta;
            config["t"] = orb_pt.t;
            config["n"] = orb_n;
            config["direction"] = orb_back ? "backward" : "forward";
            std::vector<LiftPoint> pts{{orb_pt.theta, orb_pt.t}};
            bool complete = true;
            try {
                for (std::int64_t k = 0; k < orb_n; ++k) pts.push_back(orb_back ? map.inverse(pts.back()) : map.eval(pts.back()));
            } catch (const OutOfDomain&) {
                complete = false;
            }
            const auto steps = static_cast<std::int64_t>(pts.size()) - 1;
            const double span = orb_back ? pts.front().x - pts.back().x : pts.back().x - pts.front().x;
            json result{{"steps", steps}, {"complete", complete}, {"final", point_json(pts.back())}};
            result["birkhoff"] = steps > 0 ? json(span / static_cast<double>(steps)) : json(nullptr);
            if (!out.csv.empty()) write_text(out.csv, orbit_csv(config, pts));
            emit_json(out, config, result);
            if (!complete) status = kExitPartial;
        };
    });

    // basin
    auto* basin = app.add_subcommand("basin", "one-sided basin evidence for a point");
    MapArgs bas_map;
    PointArgs bas_pt;
    double bas_hi = 15.0, bas_lo = -15.0;
    std::int64_t bas_iter = 10000;
    add_map_options(basin, bas_map, "paper_example");
    add_point_options(basin, bas_pt, 0.0, 8.0);
    basin->add_option("--t-hi", bas_hi, "plus threshold")->capture_default_str();
    basin->add_option("--t-lo", bas_lo, "minus threshold")->capture_default_str();
    basin->add_option("--max-iter", bas_iter, "iterations per direction")->capture_default_str();
    basin->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(bas_map);
            const auto map = build_map(spec);
            json config = base_config("basin", spec, seed);
            config.update({{"theta", bas_pt.theta}, {"t", bas_pt.t}, {"t_hi", bas_hi}, {"t_lo", bas_lo}, {"max_iter", bas_iter}});
            const auto r = classify_basin(map, {bas_pt.theta, bas_pt.t}, bas_hi, bas_lo, bas_iter);
            json result{{"verdict", to_string(r.verdict())}, {"plus", r.plus},
                        {"minus", r.minus}, {"plus_steps", r.plus_steps},
                        {"minus_steps", r.minus_steps}, {"max_backward_t", r.max_backward_t},
                        {"min_forward_t", r.min_forward_t}};
            emit_json(out, config, result);
            if (r.verdict() == Basin::undetermined) status = kExitPartial;
        };
    });

    // chain
    auto* chain = app.add_subcommand("chain", "grid chain classes of the outer-approximation digraph");
    MapArgs ch_map;
    GridArgs ch_grid;
    std::vector<std::string> ch_points;
    add_map_options(chain, ch_map, "horseshoe_core");
    add_grid_options(chain, ch_grid);
    chain->add_option("--point", ch_points, "theta,t whose class is reported (repeatable; default a and b for the horseshoe)");
    chain->add_option("--csv", out.csv, "box table");
    chain->add_option("--svg", out.svg, "raster of the recurrent classes");
    chain->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(ch_map);
            const auto map = build_map(spec);
            auto marks = parse_points(ch_points);
            if (marks.empty()) marks = default_marks(map);
            const auto run = build_grid(map, ch_grid, seed);
            json config = base_config("chain", spec, seed);
            config["grid"] = grid_config(ch_grid, run);
            json classes = json::array();
            for (const auto& c : run.cond.classes) {
                if (c.recurrent) classes.push_back({{"id", c.id}, {"boxes", c.nodes.size()}});
            }
            json marked = json::array();
            for (const auto& p : marks) {
                const auto box = run.grid->box_of(p);
                json m{{"point", {p.theta, p.t}}};
                m["box"] = box ? json(*box) : json(nullptr);
                m["class"] = box ? json(run.cond.class_of[*box]) : json(nullptr);
                m["recurrent"] = box ? run.cond.classes[run.cond.class_of[*box]].recurrent : false;
                marked.push_back(m);
            }
            json result{{"nodes", run.dg.node_count()}, {"edges", run.dg.edge_count()},
                        {"classes", run.cond.classes.size()}, {"recurrent_classes", classes},
                        {"points", marked}};
            if (!out.csv.empty() || !out.svg.empty()) {
                const auto csv = box_table_csv(config, box_rows(run.dg, run.cond));
                if (!out.csv.empty()) write_text(out.csv, csv);
                if (!out.svg.empty()) write_text(out.svg, svg_from_csv(csv, SvgColoring::chain_class));
            }
            emit_json(out, config, result);
        };
    });

    // lyapunov
    auto* lyap = app.add_subcommand("lyapunov", "grid Lyapunov function and attractor pairs");
    MapArgs ly_map;
    GridArgs ly_grid;
    std::size_t ly_cap = kAttractorCap;
    add_map_options(lyap, ly_map, "horseshoe_core");
    add_grid_options(lyap, ly_grid);
    lyap->add_option("--cap", ly_cap, "maximum number of attractors enumerated")->capture_default_str();
    lyap->add_option("--csv", out.csv, "box table with Lyapunov values");
    lyap->add_option("--svg", out.svg, "raster of the Lyapunov values");
    lyap->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(ly_map);
            const auto map = build_map(spec);
            const auto run = build_grid(map, ly_grid, seed);
            json config = base_config("lyapunov", spec, seed);
            config["grid"] = grid_config(ly_grid, run);
            config["cap"] = ly_cap;
            const auto l = lyapunov(run.dg, run.cond);
            const auto chk = verify_lyapunov(run.dg, run.cond, l);
            const auto rep = attractor_pairs(run.dg, run.cond, ly_cap);
            json plateaus = json::array();
            for (const auto& c : run.cond.classes) {
                if (!c.recurrent || !l.plateau[c.id]) continue;
                const auto& v = *l.plateau[c.id];
                plateaus.push_back({{"class", c.id}, {"numerator", v.numerator}, {"digits", v.digits}, {"value", v.value()}});
            }
            json result{{"cross_edges", chk.cross_edges}, {"decreasing", chk.decreasing},
                        {"plateaus_cantor", chk.plateaus_cantor}, {"plateaus_distinct", chk.plateaus_distinct},
                        {"ok", chk.ok()}, {"plateaus", plateaus},
                        {"attractor_pairs", rep.pairs.size()}, {"cap_exceeded", rep.cap_exceeded}};
            result["identity_holds"] = rep.identity_holds ? json(*rep.identity_holds) : json(nullptr);
            if (!out.csv.empty() || !out.svg.empty()) {
                const auto csv = box_table_csv(config, box_rows(run.dg, run.cond, &l.value));
                if (!out.csv.empty()) write_text(out.csv, csv);
                if (!out.svg.empty()) write_text(out.svg, svg_from_csv(csv, SvgColoring::value));
            }
            emit_json(out, config, result);
            if (rep.cap_exceeded) status = kExitPartial;
        };
    });

    // rot
    auto* rot = app.add_subcommand("rot", "rotation numbers");
    rot->require_subcommand(1);

    auto* rot_per = rot->add_subcommand("periodic", "rotation number p/q of a periodic point");
    MapArgs rp_map;
    PointArgs rp_pt;
    std::int64_t rp_q = 1;
    double rp_tol = kDefaultLiftTol;
    add_map_options(rot_per, rp_map, "horseshoe_core");
    add_point_options(rot_per, rp_pt, 0.0, 0.0);
    rot_per->add_option("--q", rp_q, "period")->capture_default_str();
    rot_per->add_option("--tol", rp_tol, "closing tolerance")->capture_default_str();
    rot_per->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(rp_map);
            const auto map = build_map(spec);
            json config = base_config("rot periodic", spec, seed);
            config.update({{"theta", rp_pt.theta}, {"t", rp_pt.t}, {"q", rp_q}, {"tol", rp_tol}});
            const auto r = rotation_of_periodic(map, LiftPoint{rp_pt.theta, rp_pt.t}, rp_q, rp_tol);
            emit_json(out, config, {{"p", r.p}, {"q", r.q}, {"reduced", r.reduced()}, {"value", r.value()}});
        };
    });

    auto* rot_int = rot->add_subcommand("interval", "rotation interval of a grid chain class");
    MapArgs ri_map;
    GridArgs ri_grid;
    std::string ri_point;
    add_map_options(rot_int, ri_map, "horseshoe_core");
    add_grid_options(rot_int, ri_grid);
    rot_int->add_option("--point", ri_point, "theta,t selecting the class (default: hull of all recurrent classes)");
    rot_int->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(ri_map);
            const auto map = build_map(spec);
            const auto run = build_grid(map, ri_grid, seed);
            json config = base_config("rot interval", spec, seed);
            config["grid"] = grid_config(ri_grid, run);
            RotationInterval ri;
            if (ri_point.empty()) {
                ri = rotation_interval_of_recurrent_set(run.dg, run.cond);
            } else {
                config["point"] = ri_point;
                const auto p = parse_points({ri_point}).front();
                const auto id = class_containing(run.dg, run.cond, p);
                if (!id) throw NumericError("the point is not in a recurrent grid class");
                ri = rotation_interval_of_class(run.dg, run.cond, *id);
            }
            emit_json(out, config, {{"lo", ri.lo}, {"hi", ri.hi}, {"slack", ri.slack}, {"method", ri.method}});
        };
    });

    auto* rot_pow = rot->add_subcommand("power", "compare the class interval under h^q with q times the h interval");
    MapArgs rw_map;
    GridArgs rw_grid;
    std::string rw_point = "0,0";
    std::int64_t rw_q = 2;
    add_map_options(rot_pow, rw_map, "horseshoe_core");
    add_grid_options(rot_pow, rw_grid);
    rot_pow->add_option("--point", rw_point, "theta,t selecting the class")->capture_default_str();
    rot_pow->add_option("--q", rw_q, "power")->capture_default_str();
    rot_pow->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(rw_map);
            const auto map = build_map(spec);
            const auto run = build_grid(map, rw_grid, seed);
            json config = base_config("rot power", spec, seed);
            config["grid"] = grid_config(rw_grid, run);
            config.update({{"point", rw_point}, {"q", rw_q}});
            const auto id = class_containing(run.dg, run.cond, parse_points({rw_point}).front());
            if (!id) throw NumericError("the point is not in a recurrent grid class");
            const auto r = power_rotation_check(map, run.dg, run.cond, *id, rw_q, run.options);
            emit_json(out, config, {{"base", {r.base.lo, r.base.hi}}, {"power", {r.power.lo, r.power.hi}},
                                    {"deviation", r.deviation}, {"allowed", r.allowed}, {"pass", r.pass}});
        };
    });

    auto* rot_atk = rot->add_subcommand("atkinson", "times n with small displacement sums");
    MapArgs ra_map;
    PointArgs ra_pt;
    std::string ra_word;
    std::int64_t ra_p = 0, ra_q = 1, ra_nmax = 100;
    double ra_eps = 0.1;
    add_map_options(rot_atk, ra_map, "horseshoe_core");
    add_point_options(rot_atk, ra_pt, 0.0, 0.0);
    rot_atk->add_option("--word", ra_word, "start at the exact horseshoe point of this 0/1 itinerary (exact arithmetic)");
    rot_atk->add_option("--p", ra_p, "deck shift per block")->capture_default_str();
    rot_atk->add_option("--q", ra_q, "block length")->capture_default_str();
    rot_atk->add_option("--eps", ra_eps, "threshold")->capture_default_str();
    rot_atk->add_option("--n-max", ra_nmax, "largest n")->capture_default_str();
    rot_atk->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(ra_map);
            const auto map = build_map(spec);
            json config = base_config("rot atkinson", spec, seed);
            config.update({{"p", ra_p}, {"q", ra_q}, {"eps", ra_eps}, {"n_max", ra_nmax}});
            std::vector<std::int64_t> n;
            if (!ra_word.empty()) {
                config["word"] = ra_word;
                if (!map.supports_exact()) throw ConfigError("--word needs the horseshoe core");
                n = atkinson_small_sums(map, horseshoe_symbolic_point(ra_word).point, ra_p, ra_q, ra_eps, ra_nmax);
            } else {
                config.update({{"theta", ra_pt.theta}, {"t", ra_pt.t}});
                n = atkinson_small_sums(map, LiftPoint{ra_pt.theta, ra_pt.t}, ra_p, ra_q, ra_eps, ra_nmax);
            }
            emit_json(out, config, {{"count", n.size()}, {"n", n}});
        };
    });

    auto* rot_pe = rot->add_subcommand("prime-end", "prime-end rotation numbers at the two ends");
    MapArgs pe_map;
    double pe_theta = 0.0, pe_height = 20.0;
    std::int64_t pe_n = 10000;
    std::string pe_end = "both";
    PrimeEndOptions pe_opt;
    add_map_options(rot_pe, pe_map, "paper_example");
    rot_pe->add_option("--theta", pe_theta, "angle of the seeds")->capture_default_str();
    rot_pe->add_option("--height", pe_height, "seeds start at (theta, +height) and (theta, -height)")->capture_default_str();
    rot_pe->add_option("--n", pe_n, "Birkhoff length")->capture_default_str();
    rot_pe->add_option("--end", pe_end, "plus | minus | both")->capture_default_str();
    rot_pe->add_option("--t-hi", pe_opt.t_hi, "plus basin threshold")->capture_default_str();
    rot_pe->add_option("--t-lo", pe_opt.t_lo, "minus basin threshold")->capture_default_str();
    rot_pe->add_option("--basin-iter", pe_opt.basin_iter, "iterations allowed to reach a basin")->capture_default_str();
    rot_pe->callback([&] {
        action = [&] {
            if (pe_end != "plus" && pe_end != "minus" && pe_end != "both") throw ConfigError("--end must be plus, minus or both");
            const auto spec = resolve_spec(pe_map);
            const auto map = build_map(spec);
            json config = base_config("rot prime-end", spec, seed);
            config.update({{"theta", pe_theta}, {"height", pe_height}, {"n", pe_n}, {"end", pe_end},
                           {"t_hi", pe_opt.t_hi}, {"t_lo", pe_opt.t_lo}, {"basin_iter", pe_opt.basin_iter}});
            json result;
            bool partial = false;
            auto run = [&](End e, const char* key, double t) {
                const auto r = prime_end_rotation_estimate(map, {pe_theta, t}, pe_n, e, pe_opt);
                result[key] = r.value;
                result[std::string(key) + "_steps"] = r.n;
                partial = partial || !r.complete;
            };
            if (pe_end != "minus") run(End::plus, "plus", pe_height);
            if (pe_end != "plus") run(End::minus, "minus", -pe_height);
            emit_json(out, config, result);
            if (partial) status = kExitPartial;
        };
    });

    // periodic
    auto* periodic = app.add_subcommand("periodic", "search fixed points of T^-p h^q in a window");
    MapArgs pd_map;
    SearchOptions pd_opt;
    std::int64_t pd_p = 0, pd_q = 1;
    std::string pd_window;
    add_map_options(periodic, pd_map, "horseshoe_core");
    periodic->add_option("--p", pd_p, "deck shift")->capture_default_str();
    periodic->add_option("--q", pd_q, "period")->capture_default_str();
    periodic->add_option("--window", pd_window, "x_lo,x_hi,t_lo,t_hi in lift coordinates (default R)");
    periodic->add_option("--depth", pd_opt.depth, "subdivision depth")->capture_default_str();
    periodic->add_option("--tol", pd_opt.tol, "certification residual")->capture_default_str();
    periodic->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(pd_map);
            const auto map = build_map(spec);
            if (!pd_window.empty()) {
                const auto w = parse_list(pd_window, 4, "--window");
                pd_opt.window = {w[0], w[1], w[2], w[3]};
            }
            json config = base_config("periodic", spec, seed);
            config.update({{"p", pd_p}, {"q", pd_q}, {"depth", pd_opt.depth}, {"tol", pd_opt.tol},
                           {"window", {pd_opt.window.x_lo, pd_opt.window.x_hi, pd_opt.window.t_lo, pd_opt.window.t_hi}}});
            const auto r = find_fixed_points_of_power(map, pd_q, pd_p, pd_opt);
            json orbits = json::array();
            for (const auto& o : r.orbits) {
                json j{{"point", point_json(o.point)}, {"residual", o.residual},
                       {"rotation", std::to_string(o.rotation.p) + "/" + std::to_string(o.rotation.q)}};
                j["index"] = o.index ? json(*o.index) : json(nullptr);
                orbits.push_back(j);
            }
            emit_json(out, config, {{"orbits", orbits}, {"no_candidates", r.no_candidates()},
                                    {"surviving_boxes", r.surviving_boxes}});
        };
    });

    // index
    auto* index = app.add_subcommand("index", "fixed point index of T^-p h^q around a square loop");
    MapArgs ix_map;
    PointArgs ix_pt;
    std::int64_t ix_p = 0, ix_q = 1;
    double ix_r = 1e-6;
    int ix_samples = kDefaultIndexSamples;
    add_map_options(index, ix_map, "horseshoe_core");
    add_point_options(index, ix_pt, 0.0, 0.0);
    index->add_option("--p", ix_p, "deck shift")->capture_default_str();
    index->add_option("--q", ix_q, "period")->capture_default_str();
    index->add_option("--radius", ix_r, "half side of the square loop")->capture_default_str();
    index->add_option("--samples", ix_samples, "initial boundary samples")->capture_default_str();
    index->callback([&] {
        action = [&] {
            const auto spec = resolve_spec(ix_map);
            const auto map = build_map(spec);
            json config = base_config("index", spec, seed);
            config.update({{"theta", ix_pt.theta}, {"t", ix_pt.t}, {"p", ix_p}, {"q", ix_q}, {"radius", ix_r}, {"samples", ix_samples}});
            const int i = fixed_point_index(power_map(map, ix_q, ix_p), square_loop({ix_pt.theta, ix_pt.t}, ix_r), ix_samples);
            emit_json(out, config, {{"index", i}});
        };
    });

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact horseshoe periodic point of an itinerary");
    std::string or_word;
    oracle->add_option("--word", or_word, "0/1 itinerary through R0, R1")->required();
    oracle->callback([&] {
        action = [&] {
            const auto s = horseshoe_symbolic_point(or_word);
            json config{{"command", "oracle"}, {"word", or_word}, {"seed", seed}};
            json orbit_pts = json::array();
            for (const auto& z : s.orbit) orbit_pts.push_back({rational_string(z.x), rational_string(z.t)});
            emit_json(out, config, {{"p", s.p}, {"q", s.q},
                                    {"point", {rational_string(s.point.x), rational_string(s.point.t)}},
                                    {"point_float", {to_double(s.point.x), to_double(s.point.t)}},
                                    {"orbit", orbit_pts}});
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    try {
        if (action) action();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return status;
}
