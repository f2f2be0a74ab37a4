#pragma once

#include <sstream>
#include <string>

#include "json.hpp"

#include "modco/analysis.hpp"
#include "modco/census.hpp"

namespace modco {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json json_matrix(const IntMatrix& m) {
    Json rows = Json::array();
    for (auto& r : m.row_list()) rows.push_back(r);
    return rows;
}

inline Json json_lattice(const Sublattice& l) {
    return Json{{"basis", json_matrix(l.basis())}, {"index", l.det()}, {"text", l.to_string()}};
}

inline Json json_profile(const CosetProfile& p, const std::vector<std::string>& names) {
    Json lat = Json::array();
    for (Color c = 0; c < p.colors(); ++c) {
        Json e{{"color", names[c]}};
        e.update(json_lattice(p.color_lattices[c]));
        e["sample_point"] = p.sample_points[c];
        lat.push_back(e);
    }
    Json psi = Json::array();
    for (auto& [label, set] : p.psi0) {
        Json cols = Json::array();
        for (Color c : set.members()) cols.push_back(names[c]);
        psi.push_back(Json{{"coset", label.representative}, {"colors", cols}});
    }
    return Json{{"color_lattices", lat}, {"lprime", json_lattice(p.lprime)}, {"index", p.index()},
                {"psi0", psi}, {"depth", p.depth}};
}

inline Json json_verdict(const CoincidenceAnalysis& a, const std::vector<std::string>& names) {
    const Verdict& v = a.verdict;
    Json j{{"status", status_name(v.status)}};
    j["min_k"] = v.min_k ? Json(*v.min_k) : Json(nullptr);
    j["note"] = v.note.empty() ? Json(nullptr) : Json(v.note);
    if (v.witness) {
        const Witness& w = *v.witness;
        Json digits = Json::array();
        for (auto z : w.path) digits.push_back(a.table.digits[z]);
        j["witness"] = Json{{"base_coset", a.profile.psi0[static_cast<std::size_t>(w.base_class)].first.representative},
                            {"digits", digits},
                            {"color", names[w.color]},
                            {"coset", w.coset ? Json(*w.coset) : Json(nullptr)}};
    } else {
        j["witness"] = nullptr;
    }
    j["bound_used"] = v.bound_used;
    Json fp = Json::array();
    for (auto& f : v.fast_paths)
        fp.push_back(Json{{"rule", fast_path_name(f.rule)}, {"implies", status_name(f.implies)}, {"note", f.note}});
    j["fast_paths"] = fp;
    std::size_t base = 0;
    for (std::size_t i = 0; i < a.graph.size(); ++i) base += a.graph.is_base(static_cast<int>(i));
    j["graph"] = Json{{"vertices", a.graph.size()}, {"edges", a.graph.edges.size()}, {"base_vertices", base}};
    return j;
}

}  // namespace detail

inline Json report_json(const Report& r) {
    const auto& names = r.spec.color_names;
    Json j;
    j["name"] = r.name;
    j["dim"] = r.spec.dim();
    j["expansion"] = detail::json_matrix(r.spec.source.expansion().matrix());
    j["colors"] = names;
    j["validation"] = Json{{"primitive", r.primitive},
                           {"admissible", r.admissibility.admissible},
                           {"admissibility_diagnostic", r.admissibility.admissible ? Json(nullptr) : Json(r.admissibility.diagnostic)},
                           {"bijective", r.bijective ? Json(*r.bijective) : Json(nullptr)}};
    j["seed"] = Json{{"color", names[r.spec.seed_color]}, {"position", r.spec.shift}, {"period", r.spec.seed_period}};
    j["cosets"] = r.profile ? detail::json_profile(*r.profile, names) : Json(nullptr);
    j["verdict"] = r.coincidence ? detail::json_verdict(*r.coincidence, names) : Json(nullptr);
    if (r.pair_graph)
        j["pair_graph"] = Json{{"vertices", r.pair_graph->vertices.size()},
                               {"edges", r.pair_graph->edges.size()},
                               {"all_pairs_reach_coincidence", r.pair_graph->verdict}};
    if (r.substitution_graph) {
        const auto& g = *r.substitution_graph;
        Json path = Json::array();
        for (auto z : g.path_to_constant()) path.push_back(g.digits[z]);
        j["substitution_graph"] = Json{{"vertices", g.vertices.size()},
                                       {"edges", g.edges.size()},
                                       {"constant_reached", g.constant_reached},
                                       {"path_to_constant", g.constant_reached ? path : Json(nullptr)}};
    }
    if (r.direct) {
        Json w = Json::array();
        for (auto& c : r.direct->witnesses)
            w.push_back(Json{{"coset", c.coset}, {"row", names[c.row]}, {"translations", c.translations}});
        j["direct_check"] = Json{{"k", r.direct->k}, {"coincident", r.direct->coincident}, {"witnesses", w}};
    }
    if (r.dekking) {
        const auto& d = *r.dekking;
        Json g = Json::object();
        for (std::size_t i = 0; i < d.height.g.size(); ++i) g[names[i]] = d.height.g[i];
        Json pure = nullptr;
        if (d.pure) {
            pure = Json::array();
            for (Color c = 0; c < d.pure->letters(); ++c)
                pure.push_back(Json{{"letter", d.pure->names[c]}, {"block", d.pure->blocks[c]}, {"word", d.pure->word_string(c)}});
        }
        const auto& res = d.result;
        j["dekking"] = Json{{"g", g},
                            {"r", d.height.r},
                            {"h", d.height.h},
                            {"pure_base", pure},
                            {"coincident", res.coincident},
                            {"k", res.k ? Json(*res.k) : Json(nullptr)},
                            {"j", res.j ? Json(*res.j) : Json(nullptr)},
                            {"letter", res.letter ? Json(res.pure.names[*res.letter]) : Json(nullptr)},
                            {"substitution_graph_vertices", res.substitution_graph_size},
                            {"internal_space", d.descriptor.to_string()},
                            {"internal_space_note", d.descriptor.note.empty() ? Json(nullptr) : Json(d.descriptor.note)}};
    }
    if (r.collaring) {
        const auto& c = *r.collaring;
        Json attempts = Json::array();
        for (auto& [radius, msg] : c.attempts) attempts.push_back(Json{{"radius", radius}, {"outcome", msg}});
        Json cj{{"attempts", attempts}};
        if (c.system) {
            cj["radius"] = c.system->clusters.radius;
            cj["classes"] = c.system->clusters.classes.size();
            Json refines = Json::object();
            for (std::size_t k = 0; k < c.system->color_map.size(); ++k)
                refines[c.system->spec.color_names[k]] = names[c.system->color_map[k]];
            cj["refines"] = refines;
            cj["verdict"] = detail::json_verdict(*c.analysis, c.system->spec.color_names);
            cj["transfer"] = c.transfer->message;
        }
        j["collaring"] = cj;
    }
    j["model_sets"] = r.model_sets;
    return j;
}

inline std::string report_text(const Report& r) {
    const auto& names = r.spec.color_names;
    std::ostringstream out;
    out << "system: " << (r.name.empty() ? "(unnamed)" : r.name) << "\n";
    out << "dimension " << r.spec.dim() << ", expansion " << r.spec.source.expansion().matrix().to_string() << ", "
        << names.size() << " colors\n";
    out << "primitive: yes\n";
    out << "admissible: " << (r.admissibility.admissible ? "yes" : "no (" + r.admissibility.diagnostic + ")") << "\n";
    if (r.bijective) out << "bijective: " << (*r.bijective ? "yes" : "no") << "\n";
    out << "seed: " << names[r.spec.seed_color] << " @ " << render_vector(r.spec.shift);
    if (r.spec.seed_period > 1)
        out << " (period " << r.spec.seed_period << "; analyzed as Phi^" << r.spec.seed_period << ")";
    out << "\n";
    if (r.profile) {
        const auto& p = *r.profile;
        for (Color c = 0; c < p.colors(); ++c) out << "  L_" << names[c] << " = " << p.color_lattices[c].to_string() << "\n";
        out << "  L' = " << p.lprime.to_string() << ", [L:L'] = " << p.index() << "\n";
        out << "  Psi_0:";
        for (auto& [label, set] : p.psi0) out << " " << render_vector(label.representative) << ":" << set.to_string(names);
        out << "\n";
    }
    if (r.coincidence) {
        const auto& a = *r.coincidence;
        out << "coincidence graph: " << a.graph.size() << " vertices, " << a.graph.edges.size() << " edges\n";
        out << "verdict: " << status_name(a.verdict.status);
        if (a.verdict.min_k) out << " (min k = " << *a.verdict.min_k << ")";
        out << "\n";
        if (a.verdict.witness) {
            const Witness& w = *a.verdict.witness;
            out << "  witness: " << a.profile.psi0[static_cast<std::size_t>(w.base_class)].second.to_string(names);
            for (auto z : w.path) out << " -" << render_vector(a.table.digits[z]) << "->";
            out << " {" << names[w.color] << "}";
            if (w.coset) out << ", coset " << render_vector(*w.coset);
            out << "\n";
        }
        for (auto& f : a.verdict.fast_paths)
            out << "  fast path " << fast_path_name(f.rule) << ": " << status_name(f.implies) << " (" << f.note << ")\n";
    }
    if (r.pair_graph)
        out << "pair graph: " << r.pair_graph->vertices.size() << " vertices; every pair reaches a coincidence: "
            << (r.pair_graph->verdict ? "yes" : "no") << "\n";
    if (r.substitution_graph)
        out << "substitution graph: " << r.substitution_graph->vertices.size() << " vertices; constant tuple "
            << (r.substitution_graph->constant_reached ? "reached" : "not reached") << "\n";
    if (r.direct) {
        out << "direct check at k=" << r.direct->k << ": " << (r.direct->coincident ? "coincidence" : "none") << "\n";
        for (auto& c : r.direct->witnesses) {
            out << "  class " << render_vector(c.coset) << " only in row " << names[c.row] << ":";
            for (auto& t : c.translations) out << " " << render_vector(t);
            out << "\n";
        }
    }
    if (r.dekking) {
        const auto& d = *r.dekking;
        out << "dekking: g =";
        for (std::size_t i = 0; i < d.height.g.size(); ++i) out << " " << names[i] << ":" << d.height.g[i];
        out << ", r = " << d.height.r << ", h = " << d.height.h << "\n";
        if (d.pure) {
            out << "  pure base:";
            for (Color c = 0; c < d.pure->letters(); ++c)
                out << " " << d.pure->names[c] << "=" << d.pure->blocks[c] << " -> " << d.pure->word_string(c) << ";";
            out << "\n";
        }
        out << "  coincidence: ";
        if (d.result.coincident)
            out << "yes (k=" << *d.result.k << ", j=" << *d.result.j << ", letter " << d.result.pure.names[*d.result.letter] << ")\n";
        else
            out << "no\n";
        out << "  internal space: " << d.descriptor.to_string();
        if (!d.descriptor.note.empty()) out << " (" << d.descriptor.note << ")";
        out << "\n";
    }
    if (r.collaring) {
        const auto& c = *r.collaring;
        out << "collaring:\n";
        for (auto& [radius, msg] : c.attempts) out << "  R=" << radius << ": " << msg << "\n";
        if (c.system) {
            const auto& v = c.analysis->verdict;
            out << "  collared system: " << c.system->clusters.classes.size() << " colors, verdict " << status_name(v.status);
            if (v.min_k) out << " (min k = " << *v.min_k << ")";
            out << "\n  " << c.transfer->message << "\n";
        }
    }
    out << r.model_sets << "\n";
    return out.str();
}

inline Json census_json(const CensusResult& c) {
    Json hist = Json::object();
    for (auto& [k, n] : c.histogram) hist[std::to_string(k)] = n;
    Json maxi = Json::array();
    for (auto& w : c.maximizers) maxi.push_back(format_words(w));
    return Json{{"m", c.m},
                {"q", c.q},
                {"enumerated", c.enumerated},
                {"distinct", c.distinct},
                {"primitive", c.primitive},
                {"not_coincident", c.not_coincident},
                {"histogram", hist},
                {"max_k", c.max_k},
                {"maximizers", maxi},
                {"worst_member_k", c.worst_member_k ? Json(*c.worst_member_k) : Json(nullptr)}};
}

inline std::string census_text(const CensusResult& c) {
    std::ostringstream out;
    out << "census m=" << c.m << " q=" << c.q << ": " << c.enumerated << " systems, " << c.distinct
        << " up to renaming, " << c.primitive << " primitive\n";
    out << "no coincidence: " << c.not_coincident << "\n";
    out << "min k histogram:";
    for (auto& [k, n] : c.histogram) out << " " << k << ":" << n;
    out << "\nmaximum min k: " << c.max_k << "\n";
    for (auto& w : c.maximizers) out << "  " << format_words(w) << "\n";
    if (c.worst_member_k) out << "worst-case family member: k=" << *c.worst_member_k << "\n";
    return out.str();
}

}  // namespace modco
