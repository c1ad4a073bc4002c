#pragma once

#include <json.hpp>
#include <string>
#include <variant>

#include "qwgtlab/graph.hpp"
#include "qwgtlab/knot.hpp"
#include "qwgtlab/qwgt.hpp"
#include "qwgtlab/scalar.hpp"

namespace qwgtlab {

using Json = nlohmann::json;

/// Reads and parses a JSON file; throws ParseError with byte-offset location
/// on malformed input.
Json load_json_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& origin);

/// {"vertices": N, "edges": [[i, j], ...], "w": [0|1, ...]}; "w" optional
/// (all-zero = ferromagnetic).
struct GraphFile {
    Graph graph;
    BondConfig bonds;
    bool w_given = false;
};

GraphFile parse_graph_json(const Json& j);

/// Dense 0/1 matrix from an array of row arrays.
Gf2Matrix parse_bit_matrix(const Json& j, const std::string& name);

/// {"A": [[...],...], "B": [[...],...], "x": literal, "y": literal} where a
/// literal is a decimal string, a "p/q" string, or {"re":, "im":}. The
/// literal forms select the scalar field: any complex literal makes the
/// instance complex, else any "p/q" makes it exact-rational, else real.
using LoadedQwgt =
    std::variant<QwgtInstance<Rational>, QwgtInstance<double>, QwgtInstance<Complex>>;

LoadedQwgt parse_qwgt_instance(const Json& j);

/// {"lattice": graph-JSON, "crossings": [+1|-1, ...],
///  "orientation": ["h"|"v", ...], "A": {"re":, "im":}}
struct CrossingFile {
    CrossingAssignment cfg;
    Complex a;
};

CrossingFile parse_crossing_json(const Json& j);

Complex parse_complex_json(const Json& j, const std::string& name);

// Scalar values serialize as strings (or {"re","im"} string pairs) so JSON
// number parsing never rounds them.
Json scalar_json(const Rational& v);
Json scalar_json(double v);
Json scalar_json(const Complex& v);

} // namespace qwgtlab
