#include "annulus/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "annulus/errors.hpp"

namespace annulus {

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::vector<BoxRow> box_rows(const BoxDigraph& dg, const Condensation& c, const std::vector<double>* values) {
    const Grid& g = dg.grid();
    std::vector<BoxRow> rows(g.size());
    for (std::size_t id = 0; id < g.size(); ++id) {
        auto& r = rows[id];
        r.box = id;
        r.i = g.column(id);
        r.j = g.row(id);
        r.bounds = g.bounds(id);
        r.cls = static_cast<std::int64_t>(c.class_of[id]);
        r.recurrent = c.classes[c.class_of[id]].recurrent;
        if (values) r.value = (*values)[id];
    }
    return rows;
}

std::string box_table_csv(const nlohmann::json& config, const std::vector<BoxRow>& rows) {
    std::ostringstream out;
    out << "# config: " << config.dump() << "\n";
    out << "box,i,j,x0,x1,t0,t1,class,recurrent,value\n";
    for (const auto& r : rows) {
        out << r.box << ',' << r.i << ',' << r.j << ',' << format_double(r.bounds.x0) << ','
            << format_double(r.bounds.x1) << ',' << format_double(r.bounds.t0) << ','
            << format_double(r.bounds.t1) << ',' << r.cls << ',' << (r.recurrent ? 1 : 0) << ','
            << format_double(r.value) << '\n';
    }
    return out.str();
}

std::string orbit_csv(const nlohmann::json& config, const std::vector<LiftPoint>& orbit) {
    std::ostringstream out;
    out << "# config: " << config.dump() << "\n";
    out << "n,x,t\n";
    for (std::size_t n = 0; n < orbit.size(); ++n) {
        out << n << ',' << format_double(orbit[n].x) << ',' << format_double(orbit[n].t) << '\n';
    }
    return out.str();
}

namespace {

struct ParsedRow {
    std::int64_t i, j;
    double x0, x1, t0, t1;
    std::int64_t cls;
    bool recurrent;
    double value;
};

double parse_number(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("bad number '" + s + "' in box table");
    return v;
}

std::vector<ParsedRow> parse_box_table(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    bool header = false;
    std::vector<ParsedRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "box,i,j,x0,x1,t0,t1,class,recurrent,value") throw ConfigError("unexpected box table header");
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 10) throw ConfigError("box table row needs 10 fields");
        rows.push_back({std::stoll(f[1]), std::stoll(f[2]), parse_number(f[3]), parse_number(f[4]),
                        parse_number(f[5]), parse_number(f[6]), std::stoll(f[7]), f[8] == "1",
                        parse_number(f[9])});
    }
    if (!header) throw ConfigError("box table has no header");
    return rows;
}

std::string class_color(std::int64_t cls) {
    // Golden-angle hue walk.
    const double hue = std::fmod(static_cast<double>(cls) * 137.50776405, 360.0);
    std::ostringstream s;
    s << "hsl(" << static_cast<int>(hue) << ",70%,50%)";
    return s.str();
}

std::string gray(double v, double lo, double hi) {
    const double u = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    const int level = static_cast<int>(std::lround(40.0 + 200.0 * std::clamp(u, 0.0, 1.0)));
    std::ostringstream s;
    s << "rgb(" << level << ',' << level << ',' << level << ')';
    return s.str();
}

}  // namespace

std::string svg_from_csv(const std::string& csv, SvgColoring coloring, int pixels) {
    if (pixels < 16) throw ConfigError("svg needs at least 16 pixels");
    auto rows = parse_box_table(csv);
    std::string comments;
    {
        std::istringstream in(csv);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] != '#') continue;
            for (char ch : line.substr(1)) {
                switch (ch) {
                    case '&': comments += "&amp;"; break;
                    case '<': comments += "&lt;"; break;
                    case '>': comments += "&gt;"; break;
                    default: comments += ch;
                }
            }
            comments += '\n';
        }
    }
    double xl = INFINITY, xh = -INFINITY, tl = INFINITY, th = -INFINITY;
    double vl = INFINITY, vh = -INFINITY;
    for (const auto& r : rows) {
        xl = std::min(xl, r.x0);
        xh = std::max(xh, r.x1);
        tl = std::min(tl, r.t0);
        th = std::max(th, r.t1);
        vl = std::min(vl, r.value);
        vh = std::max(vh, r.value);
    }
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\"" << pixels
        << "\" viewBox=\"0 0 " << pixels << ' ' << pixels << "\">\n";
    if (!comments.empty()) out << "<desc>" << comments << "</desc>\n";
    out << "<rect width=\"" << pixels << "\" height=\"" << pixels << "\" fill=\"white\"/>\n";
    if (rows.empty()) {
        out << "</svg>\n";
        return out.str();
    }
    const double sx = pixels / (xh - xl), st = pixels / (th - tl);
    auto fill_of = [&](const ParsedRow& r) -> std::string {
        if (coloring == SvgColoring::chain_class) return r.recurrent ? class_color(r.cls) : "";
        return gray(r.value, vl, vh);
    };
    // Merge horizontal runs of equal fill within a grid row.
    std::sort(rows.begin(), rows.end(), [](const ParsedRow& a, const ParsedRow& b) {
        return a.j != b.j ? a.j < b.j : a.i < b.i;
    });
    for (std::size_t k = 0; k < rows.size();) {
        const std::string fill = fill_of(rows[k]);
        std::size_t m = k + 1;
        while (m < rows.size() && rows[m].j == rows[k].j && rows[m].i == rows[m - 1].i + 1 && fill_of(rows[m]) == fill) ++m;
        if (!fill.empty()) {
            const double x = (rows[k].x0 - xl) * sx, w = (rows[m - 1].x1 - rows[k].x0) * sx;
            const double y = (th - rows[k].t1) * st, h = (rows[k].t1 - rows[k].t0) * st;
            out << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y) << "\" width=\""
                << format_double(w) << "\" height=\"" << format_double(h) << "\" fill=\"" << fill << "\"/>\n";
        }
        k = m;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace annulus
