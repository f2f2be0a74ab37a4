#pragma once

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "modco/coset_analysis.hpp"

namespace modco {

inline ColorSet children(ColorSet s, std::size_t digit, const DigitTable& table) {
    ColorSet out;
    for (Color c : s.members()) out.insert(table(c, digit));
    return out;
}

struct GraphEdge {
    int from;
    int to;
    std::size_t digit;
};

struct CoincidenceGraph {
    std::vector<ColorSet> vertices;
    std::vector<int> distance;
    std::vector<int> base_class;  // index into CosetProfile::psi0, -1 if not a base vertex
    std::vector<int> parent;      // BFS tree, -1 at base vertices
    std::vector<std::size_t> parent_digit;
    std::vector<GraphEdge> edges;  // grouped by source, digits in canonical order
    std::vector<IntVec> digits;

    std::size_t size() const { return vertices.size(); }
    bool is_base(int v) const { return base_class[static_cast<std::size_t>(v)] >= 0; }
};

// BFS closure of arbitrary start sets under the digit maps.
inline CoincidenceGraph closure_graph(const std::vector<ColorSet>& starts, const DigitTable& table) {
    CoincidenceGraph g;
    g.digits = table.digits;
    std::unordered_map<ColorSet, int, ColorSetHash> id;
    std::deque<int> queue;
    auto visit = [&](ColorSet s, int dist, int parent, std::size_t digit, int base) {
        auto [it, fresh] = id.emplace(s, static_cast<int>(g.vertices.size()));
        if (fresh) {
            g.vertices.push_back(s);
            g.distance.push_back(dist);
            g.base_class.push_back(base);
            g.parent.push_back(parent);
            g.parent_digit.push_back(digit);
            queue.push_back(it->second);
        }
        return it->second;
    };
    for (std::size_t k = 0; k < starts.size(); ++k) visit(starts[k], 0, -1, 0, static_cast<int>(k));
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (std::size_t z = 0; z < table.size(); ++z) {
            int w = visit(children(g.vertices[v], z, table), g.distance[v] + 1, v, z, -1);
            g.edges.push_back({v, w, z});
        }
    }
    return g;
}

inline CoincidenceGraph coincidence_graph(const CosetProfile& profile, const DigitTable& table) {
    std::vector<ColorSet> starts;
    for (auto& [label, set] : profile.psi0) starts.push_back(set);
    return closure_graph(starts, table);
}

// ---- verdicts -------------------------------------------------------------------

enum class Status { Coincident, NotCoincident, Inconclusive };

inline const char* status_name(Status s) {
    switch (s) {
    case Status::Coincident: return "Coincident";
    case Status::NotCoincident: return "NotCoincident";
    case Status::Inconclusive: return "Inconclusive";
    }
    return "";
}

enum class FastPath { SingletonClass, NoPairwise, Bijective, PairedClasses };

inline const char* fast_path_name(FastPath f) {
    switch (f) {
    case FastPath::SingletonClass: return "singleton-class";
    case FastPath::NoPairwise: return "no-pairwise-coincidence";
    case FastPath::Bijective: return "bijective";
    case FastPath::PairedClasses: return "paired-classes";
    }
    return "";
}

struct FastPathFinding {
    FastPath rule;
    Status implies;
    std::string note;
};

struct Witness {
    int base_class = 0;              // index into psi0
    std::vector<std::size_t> path;   // digit indices from the base vertex
    Color color = 0;                 // the color of the singleton
    std::optional<IntVec> coset;     // a with a + Q^k L' inside V_color
};

struct Verdict {
    Status status = Status::Inconclusive;
    std::optional<int> min_k;
    std::optional<Witness> witness;
    std::vector<FastPathFinding> fast_paths;
    Int bound_used = 0;
    std::string note;
};

// Depth bound from the powerset argument: a path that avoids singletons
// visits pairwise distinct non-singleton sets, of which there are 2^m - m - 1.
inline Int coincidence_depth_bound(int m) {
    if (m < 2) return 0;
    if (m >= 62) return INT64_MAX;
    return (Int{1} << m) - m - 1;
}

inline Verdict modular_coincidence(const CoincidenceGraph& g, const CosetProfile& profile, const ExpansionMap& q) {
    Verdict v;
    v.bound_used = coincidence_depth_bound(profile.colors());
    int best = -1;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.vertices[i].singleton() && (best < 0 || g.distance[i] < g.distance[best])) best = static_cast<int>(i);
    if (best < 0) {
        v.status = Status::NotCoincident;
        return v;
    }
    v.status = Status::Coincident;
    v.min_k = g.distance[best];
    Witness w;
    w.color = g.vertices[best].first();
    int cur = best;
    while (g.parent[cur] >= 0) {
        w.path.push_back(g.parent_digit[cur]);
        cur = g.parent[cur];
    }
    std::reverse(w.path.begin(), w.path.end());
    w.base_class = g.base_class[cur];
    try {
        IntVec a = profile.psi0[w.base_class].first.representative;
        for (std::size_t z : w.path) a = add(q.apply(a), g.digits[z]);
        Sublattice mod = profile.lprime;
        for (std::size_t k = 0; k < w.path.size(); ++k) mod = mod.image(q.matrix());
        w.coset = mod.reduce(a);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Overflow) throw;
    }
    v.witness = w;
    if (*v.min_k == 0) v.note = "sublattice coincidence (k=0)";
    return v;
}

// ---- direct oracle on Phi^k ----------------------------------------------------

struct DirectClass {
    IntVec coset;                    // class of Q^k y_j + t modulo Q^k L'
    Color row;                       // the single row it occupies
    std::vector<IntVec> translations;
};

struct DirectResult {
    bool coincident = false;
    int k = 0;
    std::vector<DirectClass> witnesses;  // every class confined to one row, by coset
};

// Groups the maps of Phi^k by the class of phi(y_j) modulo Q^k L' and asks
// whether some class lives in a single row.  Works for any system, admissible
// or not, and never looks at digit tables or graphs.
inline DirectResult direct_modular_coincidence(const Mfs& phi, const CosetProfile& profile, int k,
                                               PowerCache* cache = nullptr,
                                               std::size_t budget = kDefaultComposeBudget) {
    if (k < 1) throw Error(ErrorKind::InvalidInput, "direct check needs k >= 1");
    std::optional<PowerCache> local;
    if (!cache) {
        local.emplace(phi, budget);
        cache = &*local;
    }
    const Mfs& pk = cache->power(k);
    const ExpansionMap& qk = pk.expansion();
    Sublattice mod = profile.lprime.image(qk.matrix());
    struct Entry {
        ColorSet rows;
        std::vector<IntVec> translations;
    };
    std::map<IntVec, Entry> classes;
    for (Color j = 0; j < phi.colors(); ++j) {
        IntVec qy = qk.apply(profile.sample_points[j]);
        for (Color i = 0; i < phi.colors(); ++i)
            for (auto& t : pk.at(i, j)) {
                Entry& e = classes[mod.reduce(add(qy, t))];
                e.rows.insert(i);
                e.translations.push_back(t);
            }
    }
    DirectResult r;
    r.k = k;
    for (auto& [cls, e] : classes) {
        if (e.rows.singleton()) {
            std::sort(e.translations.begin(), e.translations.end());
            e.translations.erase(std::unique(e.translations.begin(), e.translations.end()), e.translations.end());
            r.witnesses.push_back({cls, e.rows.first(), e.translations});
        }
    }
    r.coincident = !r.witnesses.empty();
    return r;
}

// ---- pair coincidence graph --------------------------------------------------

struct PairGraph {
    std::vector<ColorSet> vertices;  // pairs {i,j} and coincidence vertices {i}
    std::vector<GraphEdge> edges;
    std::vector<IntVec> digits;
    std::vector<char> reaches_coincidence;
    bool verdict = false;  // every pair reaches a coincidence vertex
};

inline PairGraph pair_coincidence_graph(const CosetProfile& profile, const DigitTable& table) {
    PairGraph g;
    g.digits = table.digits;
    std::map<ColorSet, int> id;
    for (auto& [label, set] : profile.psi0) {
        auto members = set.members();
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a; b < members.size(); ++b) {
                ColorSet s = ColorSet::single(members[a]);
                s.insert(members[b]);
                if (id.emplace(s, static_cast<int>(g.vertices.size())).second) g.vertices.push_back(s);
            }
    }
    std::vector<std::vector<int>> reverse(g.vertices.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        for (std::size_t z = 0; z < table.size(); ++z) {
            int w = id.at(children(g.vertices[v], z, table));
            g.edges.push_back({static_cast<int>(v), w, z});
            reverse[w].push_back(static_cast<int>(v));
        }
    g.reaches_coincidence.assign(g.vertices.size(), 0);
    std::vector<int> stack;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (g.vertices[v].singleton()) {
            g.reaches_coincidence[v] = 1;
            stack.push_back(static_cast<int>(v));
        }
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        for (int v : reverse[w])
            if (!g.reaches_coincidence[v]) {
                g.reaches_coincidence[v] = 1;
                stack.push_back(v);
            }
    }
    g.verdict = std::all_of(g.reaches_coincidence.begin(), g.reaches_coincidence.end(), [](char c) { return c; });
    return g;
}

// ---- substitution graph ----------------------------------------------------------

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

// MODCO_MAX_STATES overrides the vertex budget.
inline std::size_t substitution_state_budget(std::size_t fallback = kDefaultMaxStates) {
    if (const char* env = std::getenv("MODCO_MAX_STATES")) {
        try {
            long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return fallback;
}

struct SubstitutionGraph {
    std::vector<std::vector<Color>> vertices;  // tuples (Phi^k(1)_z, ..., Phi^k(m)_z)
    std::vector<GraphEdge> edges;
    std::vector<IntVec> digits;
    std::vector<int> parent;
    std::vector<std::size_t> parent_digit;
    std::vector<int> distance;
    bool constant_reached = false;
    int constant_vertex = -1;  // closest constant tuple

    // digit indices leading from the identity to the closest constant tuple
    std::vector<std::size_t> path_to_constant() const {
        std::vector<std::size_t> p;
        for (int v = constant_vertex; v > 0; v = parent[v]) p.push_back(parent_digit[v]);
        std::reverse(p.begin(), p.end());
        return p;
    }
};

inline SubstitutionGraph substitution_graph(const DigitTable& table, int m, std::size_t budget = substitution_state_budget()) {
    SubstitutionGraph g;
    g.digits = table.digits;
    std::unordered_map<std::string, int> id;
    auto key = [](const std::vector<Color>& t) { return std::string(t.begin(), t.end()); };
    std::vector<Color> identity(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) identity[i] = i;
    std::deque<int> queue;
    auto visit = [&](std::vector<Color> t, int parent, std::size_t digit, int dist) {
        auto [it, fresh] = id.emplace(key(t), static_cast<int>(g.vertices.size()));
        if (fresh) {
            if (g.vertices.size() >= budget)
                throw Error(ErrorKind::StateBudgetExceeded, "substitution graph exceeds " + std::to_string(budget) +
                                                                " vertices (set MODCO_MAX_STATES to raise)");
            bool constant = std::all_of(t.begin(), t.end(), [&](Color c) { return c == t[0]; });
            if (constant && !g.constant_reached) {
                g.constant_reached = true;
                g.constant_vertex = it->second;
            }
            g.vertices.push_back(std::move(t));
            g.parent.push_back(parent);
            g.parent_digit.push_back(digit);
            g.distance.push_back(dist);
            queue.push_back(it->second);
        }
        return it->second;
    };
    visit(identity, -1, 0, 0);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (std::size_t z = 0; z < table.size(); ++z) {
            std::vector<Color> t(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) t[i] = table(g.vertices[v][i], z);
            int w = visit(std::move(t), v, z, g.distance[v] + 1);
            g.edges.push_back({v, w, z});
        }
    }
    return g;
}

// ---- fast paths --------------------------------------------------------------------

inline std::vector<FastPathFinding> fast_path_verdicts(const Mfs& phi, const CosetProfile& profile,
                                                       const DigitTable& table) {
    std::vector<FastPathFinding> out;
    const int m = phi.colors();
    bool any_singleton = false, all_singleton = true;
    for (auto& [label, set] : profile.psi0) {
        any_singleton = any_singleton || set.singleton();
        all_singleton = all_singleton && set.singleton();
    }
    if (any_singleton)
        out.push_back({FastPath::SingletonClass, Status::Coincident, "a class of Psi_0 is a singleton"});

    // a pairwise coincidence: some digit sends two colors of one class to one color
    bool pairwise = false;
    for (auto& [label, set] : profile.psi0) {
        auto mem = set.members();
        for (std::size_t z = 0; z < table.size() && !pairwise; ++z)
            for (std::size_t a = 0; a < mem.size() && !pairwise; ++a)
                for (std::size_t b = a + 1; b < mem.size() && !pairwise; ++b)
                    pairwise = table(mem[a], z) == table(mem[b], z);
    }
    if (!any_singleton && !pairwise)
        out.push_back({FastPath::NoPairwise, Status::NotCoincident, "no pairwise coincidence inside any class of Psi_0"});

    bool bijective = true;
    for (auto& col : table.image) {
        ColorSet seen;
        for (Color c : col) seen.insert(c);
        bijective = bijective && seen.size() == m;
    }
    if (bijective) {
        if (all_singleton && profile.index() == m)
            out.push_back({FastPath::Bijective, Status::Coincident, "bijective and periodic (lattice " + profile.lprime.to_string() + ")"});
        else if (any_singleton)
            out.push_back({FastPath::Bijective, Status::Coincident, "bijective with a singleton class, hence periodic"});
        else
            out.push_back({FastPath::Bijective, Status::NotCoincident, "bijective; not pure point unless periodic"});
    }

    if (m % 2 == 0 && profile.index() == m / 2) {
        const int h = m / 2;
        bool r1 = true;
        for (auto& [label, set] : profile.psi0) {
            auto mem = set.members();
            r1 = r1 && mem.size() == 2 && mem[0] < h && mem[1] == mem[0] + h;
        }
        bool r2 = true;
        for (Color j = 0; j < m && r1 && r2; ++j)
            for (Color i = 0; i < h && r2; ++i)
                for (auto& a : phi.at(j, i))
                    if (std::binary_search(phi.at(j, i + h).begin(), phi.at(j, i + h).end(), a)) {
                        r2 = false;
                        break;
                    }
        if (r1 && r2)
            out.push_back({FastPath::PairedClasses, Status::NotCoincident, "classes {i, i+m} with disjoint paired columns"});
    }
    return out;
}

}  // namespace modco
