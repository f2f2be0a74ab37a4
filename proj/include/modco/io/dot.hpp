#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "modco/coincidence.hpp"
#include "modco/io/spec_format.hpp"

namespace modco {

namespace detail {

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline void dot_edges(std::ostringstream& out, const std::vector<std::string>& labels, const std::vector<GraphEdge>& edges,
                      const std::vector<IntVec>& digits) {
    for (auto& e : edges)
        out << "  " << dot_quote(labels[e.from]) << " -> " << dot_quote(labels[e.to])
            << " [label=" << dot_quote(render_vector(digits[e.digit])) << "];\n";
}

}  // namespace detail

// Base vertices get a double border.
inline std::string emit_dot(const CoincidenceGraph& g, const std::vector<std::string>& names,
                            const std::string& title = "coincidence") {
    std::ostringstream out;
    std::vector<std::string> labels;
    for (auto& v : g.vertices) labels.push_back(v.to_string(names));
    out << "digraph " << detail::dot_quote(title) << " {\n  node [shape=ellipse];\n";
    for (std::size_t v = 0; v < g.size(); ++v) {
        out << "  " << detail::dot_quote(labels[v]);
        if (g.is_base(static_cast<int>(v))) out << " [peripheries=2]";
        out << ";\n";
    }
    detail::dot_edges(out, labels, g.edges, g.digits);
    out << "}\n";
    return out.str();
}

// Coincidence vertices {i} get a double border.
inline std::string emit_dot(const PairGraph& g, const std::vector<std::string>& names) {
    std::ostringstream out;
    std::vector<std::string> labels;
    for (auto& v : g.vertices) labels.push_back(v.to_string(names));
    out << "digraph \"pairs\" {\n  node [shape=ellipse];\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        out << "  " << detail::dot_quote(labels[v]);
        if (g.vertices[v].singleton()) out << " [peripheries=2]";
        out << ";\n";
    }
    detail::dot_edges(out, labels, g.edges, g.digits);
    out << "}\n";
    return out.str();
}

// The identity tuple is the base; constant tuples get a double border.
inline std::string emit_dot(const SubstitutionGraph& g, const std::vector<std::string>& names) {
    std::ostringstream out;
    std::vector<std::string> labels;
    for (auto& t : g.vertices) {
        std::string s = "(";
        for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + names[static_cast<std::size_t>(t[i])];
        labels.push_back(s + ")");
    }
    out << "digraph \"substitution\" {\n  node [shape=box];\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto& t = g.vertices[v];
        bool constant = std::all_of(t.begin(), t.end(), [&](Color c) { return c == t[0]; });
        out << "  " << detail::dot_quote(labels[v]);
        if (v == 0) out << " [style=bold]";
        else if (constant) out << " [peripheries=2]";
        out << ";\n";
    }
    detail::dot_edges(out, labels, g.edges, g.digits);
    out << "}\n";
    return out.str();
}

}  // namespace modco
