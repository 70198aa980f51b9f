#pragma once

// Text artifacts: CSV box tables with a "# config:" header line and SVG
// rasters rendered from that CSV text alone.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "annulus/conley.hpp"

namespace annulus {

struct BoxRow {
    std::size_t box = 0;
    std::int64_t i = 0;
    std::int64_t j = 0;
    BoxBounds bounds{0, 0, 0, 0};
    std::int64_t cls = -1;
    bool recurrent = false;
    double value = 0.0;
};

/// Rows for every grid box of dg; `value` is filled from `values` when given.
std::vector<BoxRow> box_rows(const BoxDigraph& dg, const Condensation& c,
                             const std::vector<double>* values = nullptr);

/// Columns: box,i,j,x0,x1,t0,t1,class,recurrent,value.
std::string box_table_csv(const nlohmann::json& config, const std::vector<BoxRow>& rows);

/// Columns: n,x,t.
std::string orbit_csv(const nlohmann::json& config, const std::vector<LiftPoint>& orbit);

enum class SvgColoring {
    chain_class,  // recurrent boxes colored by class id, others blank
    value,        // gray ramp over the value column
};

/// Pure function of the CSV text produced by box_table_csv.
std::string svg_from_csv(const std::string& csv, SvgColoring coloring, int pixels = 512);

/// Shortest round-trip decimal of x.
std::string format_double(double x);

}  // namespace annulus
