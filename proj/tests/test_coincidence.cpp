#include <cmath>
#include <cstdlib>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace modco;

namespace {

struct Fixture {
    LssSpec spec;
    CoincidenceAnalysis a;
};

Fixture load(const std::string& name) {
    LssSpec spec = to_lss(builtin(name));
    return {spec, analyze_coincidence(spec, {})};
}

std::set<std::string> vertex_names(const Fixture& f) {
    std::set<std::string> out;
    for (auto& v : f.a.graph.vertices) out.insert(v.to_string(f.spec.color_names));
    return out;
}

std::vector<std::string> fast_names(const Verdict& v) {
    std::vector<std::string> out;
    for (auto& f : v.fast_paths) out.push_back(fast_path_name(f.rule));
    return out;
}

const std::vector<std::string> kAdmissibleFixtures{"periodic1", "abab", "thue-morse", "kolakoski24", "chair",
                                                   "table", "paperfolding", "height2", "house",
                                                   "nonadmissible1-equivalent", "nonadmissible2-equivalent"};

}  // namespace

TEST(Children, KolakoskiDigits) {
    Fixture f = load("kolakoski24");
    ColorSet all;
    for (Color c = 0; c < 3; ++c) all.insert(c);
    EXPECT_EQ(children(all, 0, f.a.table).to_string(f.spec.color_names), "{a,b}");
    EXPECT_EQ(children(all, 1, f.a.table).to_string(f.spec.color_names), "{b,c}");
    EXPECT_EQ(children(all, 2, f.a.table).to_string(f.spec.color_names), "{a,c}");
}

TEST(Graph, Kolakoski) {
    Fixture f = load("kolakoski24");
    EXPECT_EQ(vertex_names(f), (std::set<std::string>{"{a,b,c}", "{a,b}", "{b,c}", "{a,c}", "{a}", "{b}", "{c}"}));
    EXPECT_EQ(f.a.verdict.status, Status::Coincident);
    EXPECT_EQ(f.a.verdict.min_k, 2);
    ASSERT_TRUE(f.a.verdict.witness.has_value());
    const Witness& w = *f.a.verdict.witness;
    EXPECT_EQ(w.path, (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(f.spec.name(w.color), "c");
    EXPECT_EQ(w.coset, IntVec{5});
    EXPECT_EQ(f.a.graph.edges.size(), 7u * 3u);
}

TEST(Graph, EveryVertexHasDetQEdges) {
    for (auto& name : kAdmissibleFixtures) {
        Fixture f = load(name);
        std::vector<int> out(f.a.graph.size(), 0);
        for (auto& e : f.a.graph.edges) ++out[e.from];
        for (int n : out) EXPECT_EQ(n, f.spec.source.expansion().abs_det()) << name;
    }
}

TEST(Graph, TableIsASingleLoop) {
    Fixture f = load("table");
    ASSERT_EQ(f.a.graph.size(), 1u);
    EXPECT_EQ(f.a.graph.edges.size(), 4u);
    EXPECT_EQ(f.a.verdict.status, Status::NotCoincident);
    EXPECT_EQ(fast_names(f.a.verdict), (std::vector<std::string>{"no-pairwise-coincidence", "bijective"}));
}

TEST(Graph, ThueMorse) {
    Fixture f = load("thue-morse");
    EXPECT_EQ(f.a.verdict.status, Status::NotCoincident);
    EXPECT_EQ(emit_dot(f.a.graph, f.spec.color_names),
              "digraph \"coincidence\" {\n"
              "  node [shape=ellipse];\n"
              "  \"{a,b}\" [peripheries=2];\n"
              "  \"{a,b}\" -> \"{a,b}\" [label=\"0\"];\n"
              "  \"{a,b}\" -> \"{a,b}\" [label=\"1\"];\n"
              "}\n");
    EXPECT_EQ(fast_names(f.a.verdict), (std::vector<std::string>{"no-pairwise-coincidence", "bijective", "paired-classes"}));
}

TEST(Graph, AbabIsSublatticeCoincidence) {
    Fixture f = load("abab");
    EXPECT_EQ(f.a.verdict.status, Status::Coincident);
    EXPECT_EQ(f.a.verdict.min_k, 0);
    EXPECT_EQ(f.a.verdict.note, "sublattice coincidence (k=0)");
    EXPECT_EQ(fast_names(f.a.verdict), (std::vector<std::string>{"singleton-class"}));
}

TEST(Graph, HouseNotCoincident) {
    Fixture f = load("house");
    EXPECT_EQ(f.a.verdict.status, Status::NotCoincident);
    for (auto& v : f.a.graph.vertices) EXPECT_FALSE(v.singleton());
}

// With both parity classes as bases, the chair graph reaches singletons after
// one step; the seven-vertex graph with first coincidence at depth 2 is the
// closure of the single start set {p,q,r,s}.
TEST(Graph, ChairParityClasses) {
    Fixture f = load("chair");
    EXPECT_EQ(vertex_names(f), (std::set<std::string>{"{p,r}", "{q,s}", "{p}", "{q}", "{r}", "{s}"}));
    EXPECT_EQ(f.a.verdict.min_k, 1);

    ColorSet all;
    for (Color c = 0; c < 4; ++c) all.insert(c);
    CoincidenceGraph g = closure_graph({all}, f.a.table);
    EXPECT_EQ(g.size(), 7u);
    EXPECT_EQ(g.edges.size(), 28u);
    int best = -1;
    for (std::size_t v = 0; v < g.size(); ++v)
        if (g.vertices[v].singleton() && (best < 0 || g.distance[v] < best)) best = g.distance[v];
    EXPECT_EQ(best, 2);
}

// Psi_k read directly off the point set agrees with the child recursion, and
// the first depth with a singleton coset is the graph's min_k.  Patches only
// ever show a subset of each Psi_k[a]; they grow until the sets fill up.
TEST(PatchOracle, PsiSetsMatchRecursion) {
    auto subset = [](const std::map<IntVec, ColorSet>& a, const std::map<IntVec, ColorSet>& b) {
        for (auto& [key, s] : a) {
            auto it = b.find(key);
            if (it == b.end()) return false;
            for (Color c : s.members())
                if (!it->second.contains(c)) return false;
        }
        return true;
    };
    for (auto& name : kAdmissibleFixtures) {
        Fixture f = load(name);
        const ExpansionMap& q = f.spec.source.expansion();
        for (int k = 0; k <= 3; ++k) {
            auto rec = oracle::recursive_psi(f.a.profile, f.a.table, q, k);
            PatchGrower g(f.spec);
            auto seen = oracle::patch_psi(f.spec, f.a.profile.lprime, k, g.patch());
            while (seen != rec && g.patch().size() < 1'500'000) {
                ASSERT_TRUE(subset(seen, rec)) << name << " k=" << k;
                g.grow();
                seen = oracle::patch_psi(f.spec, f.a.profile.lprime, k, g.patch());
            }
            EXPECT_EQ(seen, rec) << name << " k=" << k;
            bool graph_says = f.a.verdict.min_k && *f.a.verdict.min_k <= k;
            EXPECT_EQ(oracle::has_singleton(seen), graph_says) << name << " k=" << k;
        }
    }
}

// Each vertex is the union of the preimages of its children.
TEST(PatchOracle, ParentRecoveredFromChildren) {
    for (auto& name : kAdmissibleFixtures) {
        Fixture f = load(name);
        for (auto& s : f.a.graph.vertices) {
            ColorSet back;
            for (std::size_t z = 0; z < f.a.table.size(); ++z) {
                ColorSet kids = children(s, z, f.a.table);
                for (Color c : s.members())
                    if (kids.contains(f.a.table(c, z))) back.insert(c);
                EXPECT_LE(kids.size(), s.size());
            }
            EXPECT_EQ(back, s) << name;
        }
    }
}

TEST(Direct, KolakoskiWitnesses) {
    Fixture f = load("kolakoski24");
    DirectResult d1 = direct_modular_coincidence(f.spec.source, f.a.profile, 1);
    EXPECT_FALSE(d1.coincident);
    DirectResult d2 = direct_modular_coincidence(f.spec.source, f.a.profile, 2);
    ASSERT_TRUE(d2.coincident);
    ASSERT_EQ(d2.witnesses.size(), 3u);
    std::vector<std::pair<Int, std::string>> got;
    for (auto& w : d2.witnesses) got.push_back({w.coset[0], f.spec.name(w.row)});
    EXPECT_EQ(got, (std::vector<std::pair<Int, std::string>>{{5, "c"}, {6, "a"}, {7, "b"}}));
}

TEST(Direct, ThueMorseNeverCoincides) {
    Fixture f = load("thue-morse");
    PowerCache cache(f.spec.source);
    for (int k = 1; k <= 8; ++k) EXPECT_FALSE(direct_modular_coincidence(f.spec.source, f.a.profile, k, &cache).coincident);
}

TEST(Direct, AgreesWithGraphOnFixtures) {
    for (auto& name : kAdmissibleFixtures) {
        Fixture f = load(name);
        PowerCache cache(f.spec.source);
        for (int k = 1; k <= 3; ++k) {
            bool graph_says = f.a.verdict.min_k && *f.a.verdict.min_k <= k;
            EXPECT_EQ(direct_modular_coincidence(f.spec.source, f.a.profile, k, &cache).coincident, graph_says)
                << name << " k=" << k;
        }
    }
}

TEST(Direct, WorksWithoutAdmissibility) {
    LssSpec spec = to_lss(builtin("nonadmissible1"));
    CosetProfile prof = color_lattices(spec);
    EXPECT_TRUE(direct_modular_coincidence(spec.source, prof, 2).coincident);
    EXPECT_THROW(direct_modular_coincidence(spec.source, prof, 0), Error);
}

TEST(WorstFamily, MinimalDepthIsSquare) {
    for (int m = 2; m <= 8; ++m) EXPECT_EQ(minimal_coincidence_depth(worst_case_family(m)), (m - 1) * (m - 1)) << m;
}

TEST(WorstFamily, DirectOracleAgrees) {
    for (int m = 2; m <= 5; ++m) {
        LssSpec spec = to_lss(worst_case_document(m));
        CosetProfile prof = color_lattices(spec);
        PowerCache cache(spec.source);
        int k = (m - 1) * (m - 1);
        EXPECT_TRUE(direct_modular_coincidence(spec.source, prof, k, &cache).coincident) << m;
        if (k > 1) EXPECT_FALSE(direct_modular_coincidence(spec.source, prof, k - 1, &cache).coincident) << m;
    }
}

// The powerset bound used in verdicts is 2^m - m - 1.  The worst family sits
// one step above 2^m - m - 2 for m = 2 and m = 3.
TEST(DepthBound, WorstFamilyAgainstBounds) {
    EXPECT_EQ(coincidence_depth_bound(2), 1);
    EXPECT_EQ(coincidence_depth_bound(3), 4);
    EXPECT_EQ(coincidence_depth_bound(4), 11);
    for (int m = 2; m <= 6; ++m) {
        int k = *minimal_coincidence_depth(worst_case_family(m));
        EXPECT_LE(k, coincidence_depth_bound(m)) << m;
    }
    EXPECT_GT(*minimal_coincidence_depth(worst_case_family(2)), (1 << 2) - 2 - 2);
    EXPECT_GT(*minimal_coincidence_depth(worst_case_family(3)), (1 << 3) - 3 - 2);
}

TEST(PairGraph, AgreesWithGraph) {
    for (auto& name : kAdmissibleFixtures) {
        Fixture f = load(name);
        PairGraph g = pair_coincidence_graph(f.a.profile, f.a.table);
        EXPECT_EQ(g.verdict, f.a.verdict.status == Status::Coincident) << name;
        for (auto& v : g.vertices) {
            EXPECT_LE(v.size(), 2);
            auto mem = v.members();
            EXPECT_EQ(f.a.profile.class_index(mem.front()), f.a.profile.class_index(mem.back())) << name;
        }
    }
}

TEST(SubstitutionGraph, ThueMorseHasTwoVertices) {
    Fixture f = load("thue-morse");
    SubstitutionGraph g = substitution_graph(f.a.table, 2);
    EXPECT_EQ(g.vertices.size(), 2u);
    EXPECT_FALSE(g.constant_reached);
}

// For height 1 a constant tuple is reachable exactly when the system is
// coincident.  With h > 1 the letters split into h residue classes that never
// share a column, so the pure base has to be used instead.
TEST(SubstitutionGraph, ConstantTupleIffCoincidentAtHeightOne) {
    int height_one = 0;
    for (auto name : {"periodic1", "abab", "thue-morse", "kolakoski24", "paperfolding", "height2",
                      "nonadmissible1-equivalent", "nonadmissible2-equivalent", "worst:4", "worst:6"}) {
        Fixture f = load(name);
        SubstitutionGraph g = substitution_graph(f.a.table, f.spec.colors());
        EXPECT_LE(g.vertices.size(), static_cast<std::size_t>(std::pow(f.spec.colors(), f.spec.colors())));
        Int h = height(f.a.profile, static_cast<int>(f.spec.source.expansion().det())).h;
        if (h == 1) {
            ++height_one;
            EXPECT_EQ(g.constant_reached, f.a.verdict.status == Status::Coincident) << name;
        } else {
            EXPECT_FALSE(g.constant_reached) << name;
        }
    }
    EXPECT_GE(height_one, 7);
}

TEST(SubstitutionGraph, Budget) {
    Fixture f = load("house");
    try {
        substitution_graph(f.a.table, f.spec.colors(), 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::StateBudgetExceeded);
    }
    setenv("MODCO_MAX_STATES", "17", 1);
    EXPECT_EQ(substitution_state_budget(), 17u);
    setenv("MODCO_MAX_STATES", "junk", 1);
    EXPECT_EQ(substitution_state_budget(), kDefaultMaxStates);
    unsetenv("MODCO_MAX_STATES");
}

TEST(Dot, Deterministic) {
    for (auto& name : kAdmissibleFixtures) {
        Fixture a = load(name), b = load(name);
        EXPECT_EQ(emit_dot(a.a.graph, a.spec.color_names), emit_dot(b.a.graph, b.spec.color_names)) << name;
        EXPECT_EQ(emit_dot(pair_coincidence_graph(a.a.profile, a.a.table), a.spec.color_names),
                  emit_dot(pair_coincidence_graph(b.a.profile, b.a.table), b.spec.color_names));
    }
}

TEST(Dot, TwoDimensionalLabels) {
    Fixture f = load("table");
    std::string dot = emit_dot(f.a.graph, f.spec.color_names);
    EXPECT_NE(dot.find("[label=\"(0,0)\"]"), std::string::npos);
    EXPECT_NE(dot.find("[label=\"(1,1)\"]"), std::string::npos);
}
