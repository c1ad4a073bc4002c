#include "qwgtlab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qwgtlab {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

std::size_t get_size(const Json& j, const char* field) {
    if (!j.contains(field))
        fail(std::string("missing field \"") + field + "\"");
    const auto& v = j.at(field);
    if (!v.is_number_unsigned())
        fail(std::string("field \"") + field + "\" must be a nonnegative integer");
    return v.get<std::size_t>();
}

double number_from(const Json& j, const std::string& name) {
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
        return parse_double(j.get<std::string>());
    fail("field \"" + name + "\" must be a number or numeric string");
}

} // namespace

Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail(origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

GraphFile parse_graph_json(const Json& j) {
    if (!j.is_object())
        fail("graph document must be a JSON object");
    std::size_t nv = get_size(j, "vertices");
    if (!j.contains("edges") || !j.at("edges").is_array())
        fail("missing or non-array field \"edges\"");

    std::vector<Graph::Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
            !e[1].is_number_unsigned())
            fail("every edge must be a [i, j] pair of vertex indices");
        edges.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
    }

    GraphFile out;
    try {
        out.graph = Graph(nv, std::move(edges));
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }

    out.bonds = BondConfig::ferromagnetic(out.graph.num_edges());
    if (j.contains("w")) {
        const auto& w = j.at("w");
        if (!w.is_array() || w.size() != out.graph.num_edges())
            fail("field \"w\" must be an array of length " +
                 std::to_string(out.graph.num_edges()));
        for (std::size_t e = 0; e < w.size(); ++e) {
            if (!w[e].is_number_integer() || (w[e].get<int>() != 0 && w[e].get<int>() != 1))
                fail("field \"w\" entries must be 0 or 1");
            if (w[e].get<int>() == 1)
                out.bonds.w.flip(e);
        }
        out.w_given = true;
    }
    return out;
}

Gf2Matrix parse_bit_matrix(const Json& j, const std::string& name) {
    if (!j.is_array())
        fail("field \"" + name + "\" must be an array of rows");
    std::vector<std::vector<int>> rows;
    for (const auto& r : j) {
        if (!r.is_array())
            fail("field \"" + name + "\" rows must be arrays");
        std::vector<int> row;
        for (const auto& v : r) {
            if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
                fail("field \"" + name + "\" entries must be 0 or 1");
            row.push_back(v.get<int>());
        }
        rows.push_back(std::move(row));
    }
    try {
        return Gf2Matrix::from_rows(rows);
    } catch (const std::invalid_argument& e) {
        fail("field \"" + name + "\": " + e.what());
    }
}

Complex parse_complex_json(const Json& j, const std::string& name) {
    if (j.is_object()) {
        if (!j.contains("re") || !j.contains("im"))
            fail("field \"" + name + "\" must have \"re\" and \"im\"");
        return {number_from(j.at("re"), name + ".re"), number_from(j.at("im"), name + ".im")};
    }
    return {number_from(j, name), 0.0};
}

namespace {

enum class LiteralKind { RationalLit, RealLit, ComplexLit };

LiteralKind literal_kind(const Json& j, const std::string& name) {
    if (j.is_object())
        return LiteralKind::ComplexLit;
    if (j.is_string())
        return j.get<std::string>().find('/') != std::string::npos ? LiteralKind::RationalLit
                                                                   : LiteralKind::RealLit;
    if (j.is_number())
        return LiteralKind::RealLit;
    fail("field \"" + name + "\" must be a scalar literal (decimal string, \"p/q\", or {re, im})");
}

Rational rational_from(const Json& j, const std::string& name) {
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number())
        fail("field \"" + name + "\" must be a string in exact-rational instances");
    fail("field \"" + name + "\" is not a rational literal");
}

} // namespace

LoadedQwgt parse_qwgt_instance(const Json& j) {
    if (!j.is_object())
        fail("QWGT instance must be a JSON object");
    for (const char* f : {"A", "B", "x", "y"})
        if (!j.contains(f))
            fail(std::string("missing field \"") + f + "\"");
    Gf2Matrix a = parse_bit_matrix(j.at("A"), "A");
    Gf2Matrix b = parse_bit_matrix(j.at("B"), "B");

    auto kx = literal_kind(j.at("x"), "x");
    auto ky = literal_kind(j.at("y"), "y");
    auto build = [&](auto x, auto y) -> LoadedQwgt {
        using S = decltype(x);
        QwgtInstance<S> inst{std::move(a), std::move(b), std::move(x), std::move(y)};
        try {
            inst.validate();
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        return inst;
    };
    if (kx == LiteralKind::ComplexLit || ky == LiteralKind::ComplexLit)
        return build(parse_complex_json(j.at("x"), "x"), parse_complex_json(j.at("y"), "y"));
    if (kx == LiteralKind::RationalLit || ky == LiteralKind::RationalLit)
        return build(rational_from(j.at("x"), "x"), rational_from(j.at("y"), "y"));
    return build(number_from(j.at("x"), "x"), number_from(j.at("y"), "y"));
}

CrossingFile parse_crossing_json(const Json& j) {
    if (!j.is_object())
        fail("crossing document must be a JSON object");
    for (const char* f : {"lattice", "crossings", "orientation", "A"})
        if (!j.contains(f))
            fail(std::string("missing field \"") + f + "\"");

    GraphFile lattice = parse_graph_json(j.at("lattice"));

    const auto& cr = j.at("crossings");
    const auto& ori = j.at("orientation");
    if (!cr.is_array() || cr.size() != lattice.graph.num_edges())
        fail("field \"crossings\" must be an array of length " +
             std::to_string(lattice.graph.num_edges()));
    if (!ori.is_array() || ori.size() != lattice.graph.num_edges())
        fail("field \"orientation\" must be an array of length " +
             std::to_string(lattice.graph.num_edges()));

    std::vector<int> raw;
    for (const auto& v : cr) {
        if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1))
            fail("field \"crossings\" entries must be +1 or -1");
        raw.push_back(v.get<int>());
    }
    std::vector<CrossingAssignment::Orientation> orientation;
    for (const auto& v : ori) {
        if (!v.is_string() || (v.get<std::string>() != "h" && v.get<std::string>() != "v"))
            fail("field \"orientation\" entries must be \"h\" or \"v\"");
        orientation.push_back(v.get<std::string>() == "v"
                                  ? CrossingAssignment::Orientation::Vertical
                                  : CrossingAssignment::Orientation::Horizontal);
    }

    CrossingFile out;
    try {
        out.cfg = CrossingAssignment::from_raw(lattice.graph, raw, std::move(orientation));
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    out.a = parse_complex_json(j.at("A"), "A");
    if (out.a == Complex(0.0, 0.0))
        fail("field \"A\" must be nonzero");
    return out;
}

Json scalar_json(const Rational& v) { return format_scalar(v); }

Json scalar_json(double v) { return format_scalar(v); }

Json scalar_json(const Complex& v) {
    return Json{{"re", format_scalar(v.real())}, {"im", format_scalar(v.imag())}};
}

} // namespace qwgtlab
