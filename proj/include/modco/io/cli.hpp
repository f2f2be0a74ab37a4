#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "modco/io/builtins.hpp"
#include "modco/io/dot.hpp"
#include "modco/io/report.hpp"

namespace modco {

enum ExitCode { kExitOk = 0, kExitParse = 2, kExitInvalid = 3, kExitBudget = 4 };

inline int exit_code_for(const Error& e) {
    if (e.kind() == ErrorKind::SyntaxError) return kExitParse;
    if (e.is_budget()) return kExitBudget;
    return kExitInvalid;
}

// "builtin:NAME" or a path.
inline SpecDocument load_spec(const std::string& source) {
    if (source.rfind("builtin:", 0) == 0) return builtin(source.substr(8));
    std::ifstream in(source);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + source);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

namespace detail {

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    out << text;
}

// a.dot -> a.pair.dot
inline std::string sibling_path(const std::string& path, const std::string& tag) {
    auto slash = path.find_last_of('/');
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "." + tag + ".dot";
    return path.substr(0, dot) + "." + tag + path.substr(dot);
}

}  // namespace detail

// Exit codes: 0 done (whatever the verdict), 2 unparsable input, 3 invalid
// input or system, 4 a budget ran out.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decide modular coincidence for lattice substitution systems", "modco"};
    app.require_subcommand(1);

    std::string input, dot_path, format = "text";
    bool pair = false, subst = false;
    std::optional<int> direct, max_depth;
    std::optional<Int> collar_radius;
    auto* analyze_cmd = app.add_subcommand("analyze", "analyze a system");
    analyze_cmd->add_option("input", input, "spec file or builtin:NAME")->required();
    analyze_cmd->add_option("--dot", dot_path, "write the coincidence graph as DOT");
    analyze_cmd->add_flag("--pair-graph", pair, "build the pair coincidence graph");
    analyze_cmd->add_flag("--substitution-graph", subst, "build the substitution graph");
    analyze_cmd->add_option("--direct-check", direct, "run the direct oracle on Phi^K")->check(CLI::PositiveNumber);
    auto* collar_opt = analyze_cmd->add_option("--collar", collar_radius, "collar at radius R (scan when R is omitted)")
                           ->expected(0, 1)
                           ->check(CLI::NonNegativeNumber);
    analyze_cmd->add_option("--max-depth", max_depth, "depth cap for the coset analysis")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    int census_m = 0, census_q = 2;
    std::string census_format = "text";
    auto* census_cmd = app.add_subcommand("census", "minimal k over all length-q systems with one pairwise coincidence");
    census_cmd->add_option("--m", census_m, "alphabet size")->required()->check(CLI::Range(2, 6));
    census_cmd->add_option("--q", census_q, "word length")->check(CLI::Range(2, 8));
    census_cmd->add_option("--format", census_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* list_cmd = app.add_subcommand("list-builtins", "list the built-in systems");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "modco: " << e.what() << "\n" << app.help();
        return kExitParse;
    }

    try {
        if (*list_cmd) {
            for (auto& [name, summary] : list_builtins()) out << name << "  " << summary << "\n";
            return kExitOk;
        }
        if (*census_cmd) {
            CensusResult c = census(census_m, census_q);
            out << (census_format == "json" ? census_json(c).dump(2) + "\n" : census_text(c));
            return kExitOk;
        }
        SpecDocument doc = load_spec(input);
        AnalysisOptions opt;
        opt.pair_graph = pair;
        opt.substitution_graph = subst;
        opt.direct_check = direct;
        opt.max_depth = max_depth;
        if (collar_opt->count() > 0) {
            opt.collar = true;
            opt.collar_radius = collar_radius;
        }
        Report r = analyze(doc, opt);
        if (!dot_path.empty()) {
            if (r.coincidence)
                detail::write_file(dot_path, emit_dot(r.coincidence->graph, r.spec.color_names));
            else if (r.collaring && r.collaring->analysis)
                detail::write_file(dot_path, emit_dot(r.collaring->analysis->graph, r.collaring->system->spec.color_names));
            if (r.pair_graph) detail::write_file(detail::sibling_path(dot_path, "pair"), emit_dot(*r.pair_graph, r.spec.color_names));
            if (r.substitution_graph)
                detail::write_file(detail::sibling_path(dot_path, "substitution"),
                                   emit_dot(*r.substitution_graph, r.spec.color_names));
        }
        out << (format == "json" ? report_json(r).dump(2) + "\n" : report_text(r));
        return kExitOk;
    } catch (const Error& e) {
        err << "modco: " << kind_name(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace modco
