#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modco/collaring.hpp"
#include "modco/dekking.hpp"
#include "modco/io/spec_format.hpp"

namespace modco {

struct AnalysisOptions {
    std::optional<int> max_depth;        // coset analysis depth cap
    bool pair_graph = false;
    bool substitution_graph = false;
    std::optional<int> direct_check;     // run the direct oracle at this k
    bool collar = false;                 // collar even when admissible
    std::optional<Int> collar_radius;    // fixed R instead of the scan
    std::optional<std::size_t> max_states;
};

// Options written in the input file fill whatever the caller left unset.
inline AnalysisOptions merge_file_options(AnalysisOptions opt, const SpecDocument& doc) {
    auto number = [&](const std::string& key) -> std::optional<long long> {
        auto it = doc.options.find(key);
        if (it == doc.options.end()) return std::nullopt;
        try {
            std::size_t used = 0;
            long long v = std::stoll(it->second, &used);
            if (used == it->second.size()) return v;
        } catch (const std::exception&) {
        }
        throw Error(ErrorKind::SemanticError, "option " + key + " expects an integer, got '" + it->second + "'");
    };
    if (!opt.max_depth)
        if (auto v = number("max_depth")) opt.max_depth = static_cast<int>(*v);
    if (!opt.direct_check)
        if (auto v = number("direct_check")) opt.direct_check = static_cast<int>(*v);
    if (!opt.max_states)
        if (auto v = number("max_states")) opt.max_states = static_cast<std::size_t>(*v);
    if (!opt.collar && doc.options.count("collar")) {
        opt.collar = true;
        const std::string& v = doc.options.at("collar");
        if (v != "auto" && v != "yes" && v != "true") opt.collar_radius = number("collar");
    }
    return opt;
}

struct CoincidenceAnalysis {
    CosetProfile profile;
    DigitTable table;
    CoincidenceGraph graph;
    Verdict verdict;
};

inline CoincidenceAnalysis analyze_coincidence(const LssSpec& spec, const CosetOptions& copt) {
    CoincidenceAnalysis a;
    Admissibility adm = is_admissible(spec.source);
    if (!adm.admissible) throw Error(ErrorKind::NotAdmissible, adm.diagnostic);
    a.profile = color_lattices(spec, copt);
    a.table = adm.table;
    a.graph = coincidence_graph(a.profile, a.table);
    a.verdict = modular_coincidence(a.graph, a.profile, spec.source.expansion());
    a.verdict.fast_paths = fast_path_verdicts(spec.source, a.profile, a.table);
    for (auto& f : a.verdict.fast_paths)
        if (f.implies != a.verdict.status)
            throw Error(ErrorKind::InvalidInput, std::string("fast path ") + fast_path_name(f.rule) +
                                                     " contradicts the graph verdict");
    return a;
}

struct DekkingReport {
    HeightData height;
    std::optional<ConstantLengthSub> pure;  // only when h > 1
    DekkingResult result;
    InternalSpaceDescriptor descriptor;
};

struct CollaringReport {
    std::vector<std::pair<Int, std::string>> attempts;
    std::optional<CollaredSystem> system;
    std::optional<CoincidenceAnalysis> analysis;
    std::optional<TransferFinding> transfer;
};

struct Report {
    std::string name;
    SpecDocument doc;
    LssSpec spec;
    bool primitive = true;
    Admissibility admissibility;
    std::optional<bool> bijective;

    std::optional<CoincidenceAnalysis> coincidence;  // admissible inputs
    std::optional<CosetProfile> profile;             // always computed
    std::optional<PairGraph> pair_graph;
    std::optional<SubstitutionGraph> substitution_graph;
    std::optional<DirectResult> direct;
    std::optional<DekkingReport> dekking;
    std::optional<CollaringReport> collaring;

    std::string model_sets;  // final one-line statement
};

// Constant-length 1D systems with translations exactly 0..q-1.
inline bool is_constant_length(const Mfs& phi, const Admissibility& adm) {
    if (phi.dim() != 1 || !adm.admissible) return false;
    Int q = phi.expansion().matrix()(0, 0);
    if (q < 2) return false;
    for (auto& d : adm.table.digits)
        if (d[0] < 0 || d[0] >= q) return false;
    return true;
}

inline std::string coincidence_phrase(const Verdict& v) {
    if (*v.min_k == 0) return "sublattice coincidence (k=0)";
    return "modular coincidence at k=" + std::to_string(*v.min_k);
}

inline Report analyze(const SpecDocument& doc, AnalysisOptions opt = {}) {
    opt = merge_file_options(opt, doc);
    Report r;
    r.name = doc.name;
    r.doc = doc;
    Mfs phi = to_mfs(doc);
    if (!is_primitive(phi)) throw Error(ErrorKind::NotPrimitive, "the substitution matrix is not primitive");
    r.spec = to_lss(doc);
    r.admissibility = is_admissible(r.spec.source);
    CosetOptions copt;
    if (opt.max_depth) copt.max_depth = *opt.max_depth;
    const std::size_t max_states = opt.max_states ? substitution_state_budget(*opt.max_states) : substitution_state_budget();

    if (r.admissibility.admissible) {
        r.bijective = is_bijective(r.spec.source);
        r.coincidence = analyze_coincidence(r.spec, copt);
        r.profile = r.coincidence->profile;
        const CoincidenceAnalysis& c = *r.coincidence;
        if (opt.pair_graph) r.pair_graph = pair_coincidence_graph(c.profile, c.table);
        if (opt.substitution_graph) r.substitution_graph = substitution_graph(c.table, r.spec.colors(), max_states);
        if (is_constant_length(r.spec.source, r.admissibility)) {
            DekkingReport d;
            ConstantLengthSub sub = as_constant_length(r.spec.source, r.spec.color_names);
            d.height = height(c.profile, sub.q);
            d.result = dekking_coincidence(sub, max_states);
            if (d.height.h > 1) d.pure = d.result.pure;
            d.descriptor = internal_space_descriptor(c.profile, sub.q);
            r.dekking = d;
        }
        r.model_sets = c.verdict.status == Status::Coincident ? "model sets: YES (" + coincidence_phrase(c.verdict) + ")"
                                                              : "model sets: NO";
    } else {
        r.profile = color_lattices(r.spec, copt);
        r.model_sets = "model sets: UNDECIDED (not admissible; no collared system found)";
    }

    if (opt.direct_check) r.direct = direct_modular_coincidence(r.spec.source, *r.profile, *opt.direct_check);

    if (!r.admissibility.admissible || opt.collar) {
        CollaringReport cr;
        if (opt.collar_radius) {
            try {
                cr.system = admissibilize(r.spec, *opt.collar_radius);
                cr.attempts.push_back({*opt.collar_radius, "ok, " + std::to_string(cr.system->clusters.classes.size()) + " classes"});
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NotWellDefined && e.kind() != ErrorKind::NotNicelyGrowing && !e.is_budget())
                    throw;
                cr.attempts.push_back({*opt.collar_radius, e.what()});
            }
        } else {
            CollarSearch s = search_collar(r.spec);
            cr.attempts = s.attempts;
            cr.system = s.system;
        }
        if (cr.system) {
            cr.analysis = analyze_coincidence(cr.system->spec, copt);
            cr.transfer = transfer_verdict(cr.analysis->verdict);
            if (!r.admissibility.admissible) {
                const Verdict& v = cr.analysis->verdict;
                const std::string radius = std::to_string(cr.system->clusters.radius);
                r.model_sets = v.status == Status::Coincident
                                   ? "model sets: YES (collared at R=" + radius + ", " + coincidence_phrase(v) + ")"
                                   : "model sets: UNDECIDED (collared at R=" + radius + ", no coincidence)";
            }
        }
        r.collaring = std::move(cr);
    }
    return r;
}

}  // namespace modco
