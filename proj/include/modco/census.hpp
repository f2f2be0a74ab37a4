#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "modco/coincidence.hpp"
#include "modco/io/builtins.hpp"

namespace modco {

inline Mfs worst_case_family(int m) { return to_mfs(worst_case_document(m)); }

// Minimal k for an admissible primitive system, or nullopt when no
// modular coincidence exists.
inline std::optional<int> minimal_coincidence_depth(const Mfs& phi, const CosetOptions& opt = {}) {
    Admissibility adm = is_admissible(phi);
    if (!adm.admissible) throw Error(ErrorKind::NotAdmissible, adm.diagnostic);
    LssSpec spec = find_seed(phi);
    CosetProfile prof = color_lattices(spec, opt);
    CoincidenceGraph g = coincidence_graph(prof, adm.table);
    return modular_coincidence(g, prof, phi.expansion()).min_k;
}

struct CensusEntry {
    std::vector<std::vector<Color>> words;  // canonical representative
    std::optional<int> min_k;
};

struct CensusResult {
    int m = 0;
    int q = 0;
    std::size_t enumerated = 0;   // systems of the family before renaming
    std::size_t distinct = 0;     // classes up to renaming letters
    std::size_t primitive = 0;    // distinct and primitive (these are analyzed)
    std::size_t not_coincident = 0;
    std::map<int, std::size_t> histogram;  // min k -> count
    int max_k = -1;
    std::vector<std::vector<std::vector<Color>>> maximizers;
    std::optional<int> worst_member_k;  // the worst-case family member with this m (q = 2 only)
    std::vector<CensusEntry> entries;
};

inline std::string format_words(const std::vector<std::vector<Color>>& words) {
    std::string s;
    for (std::size_t j = 0; j < words.size(); ++j) {
        if (j) s += ", ";
        s += std::to_string(j + 1) + "->";
        for (Color c : words[j]) s += std::to_string(c + 1);
    }
    return s;
}

namespace detail {

// All maps {0..m-1} -> {0..m-1} with exactly one pair of colliding letters.
inline std::vector<std::vector<Color>> single_collision_maps(int m) {
    std::vector<std::vector<Color>> out;
    std::vector<Color> f(static_cast<std::size_t>(m), 0);
    while (true) {
        std::vector<int> hits(static_cast<std::size_t>(m), 0);
        for (Color c : f) ++hits[c];
        if (std::count(hits.begin(), hits.end(), 0) == 1) out.push_back(f);
        int i = m - 1;
        while (i >= 0 && f[i] == m - 1) f[i--] = 0;
        if (i < 0) break;
        ++f[i];
    }
    return out;
}

inline std::vector<std::vector<Color>> all_permutations(int m) {
    std::vector<std::vector<Color>> out;
    std::vector<Color> p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), 0);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Lexicographically least relabeling: letter j becomes perm[j].
inline std::vector<std::vector<Color>> canonical_words(const std::vector<std::vector<Color>>& words,
                                                       const std::vector<std::vector<Color>>& perms) {
    std::vector<std::vector<Color>> best;
    for (auto& p : perms) {
        std::vector<std::vector<Color>> w(words.size());
        for (std::size_t j = 0; j < words.size(); ++j) {
            auto& img = w[static_cast<std::size_t>(p[j])];
            for (Color c : words[j]) img.push_back(p[c]);
        }
        if (best.empty() || w < best) best = std::move(w);
    }
    return best;
}

}  // namespace detail

inline constexpr std::size_t kDefaultCensusBudget = 5'000'000;

// Every length-q substitution on m letters whose q digit maps are q-1
// permutations plus one map with exactly one pairwise coincidence.
inline CensusResult census(int m, int q, std::size_t budget = kDefaultCensusBudget) {
    if (m < 2 || m > 6) throw Error(ErrorKind::InvalidInput, "census needs 2 <= m <= 6");
    if (q < 2) throw Error(ErrorKind::InvalidInput, "census needs q >= 2");
    CensusResult res;
    res.m = m;
    res.q = q;
    auto perms = detail::all_permutations(m);
    auto collide = detail::single_collision_maps(m);

    std::size_t work = 0;
    auto charge = [&](std::size_t n) {
        work += n;
        if (work > budget)
            throw Error(ErrorKind::BudgetExceeded, "census needs more than " + std::to_string(budget) + " steps");
    };

    std::map<std::vector<std::vector<Color>>, char> seen;
    // digit maps: position `special` holds the colliding map, others permutations
    std::vector<std::size_t> choice(static_cast<std::size_t>(q), 0);
    for (int special = 0; special < q; ++special) {
        std::fill(choice.begin(), choice.end(), 0);
        while (true) {
            charge(1);
            ++res.enumerated;
            std::vector<std::vector<Color>> words(static_cast<std::size_t>(m), std::vector<Color>(static_cast<std::size_t>(q)));
            for (int z = 0; z < q; ++z) {
                const auto& f = z == special ? collide[choice[z]] : perms[choice[z]];
                for (int j = 0; j < m; ++j) words[j][z] = f[j];
            }
            charge(perms.size());
            seen.emplace(detail::canonical_words(words, perms), 0);

            int z = q - 1;
            for (; z >= 0; --z) {
                std::size_t limit = z == special ? collide.size() : perms.size();
                if (++choice[z] < limit) break;
                choice[z] = 0;
            }
            if (z < 0) break;
        }
    }
    res.distinct = seen.size();

    for (auto& [words, unused] : seen) {
        Mfs phi = from_words(words);
        if (!is_primitive(phi)) continue;
        ++res.primitive;
        charge(std::size_t{1} << m);
        CensusEntry e{words, minimal_coincidence_depth(phi)};
        if (!e.min_k) {
            ++res.not_coincident;
        } else {
            ++res.histogram[*e.min_k];
            if (*e.min_k > res.max_k) {
                res.max_k = *e.min_k;
                res.maximizers.clear();
            }
            if (*e.min_k == res.max_k) res.maximizers.push_back(words);
        }
        res.entries.push_back(std::move(e));
    }
    if (q == 2) res.worst_member_k = minimal_coincidence_depth(worst_case_family(m));
    return res;
}

}  // namespace modco
