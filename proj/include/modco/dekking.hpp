#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modco/coincidence.hpp"

namespace modco {

struct ConstantLengthSub {
    std::vector<std::string> names;
    std::vector<std::vector<Color>> words;  // words[j] = image of letter j
    int q = 0;
    std::vector<std::string> blocks;  // set by pure_base: the block each letter stands for

    int letters() const { return static_cast<int>(words.size()); }
    Mfs mfs() const { return from_words(words); }
    std::string word_string(Color j) const {
        std::string s;
        for (Color c : words[j]) s += names[c];
        return s;
    }
};

// A one-dimensional system whose translations are exactly 0, ..., q-1.
inline ConstantLengthSub as_constant_length(const Mfs& phi, std::vector<std::string> names = {}) {
    if (phi.dim() != 1) throw Error(ErrorKind::InvalidInput, "constant-length analysis needs a one-dimensional system");
    Int q = phi.expansion().matrix()(0, 0);
    if (q < 2) throw Error(ErrorKind::InvalidInput, "constant-length analysis needs an expansion q >= 2");
    Admissibility adm = is_admissible(phi);
    if (!adm.admissible) throw Error(ErrorKind::NotAdmissible, adm.diagnostic);
    ConstantLengthSub s;
    s.q = static_cast<int>(q);
    s.names = names.empty() ? default_color_names(phi.colors()) : std::move(names);
    s.words.assign(static_cast<std::size_t>(phi.colors()), std::vector<Color>(static_cast<std::size_t>(q), -1));
    for (std::size_t z = 0; z < adm.table.size(); ++z) {
        Int t = adm.table.digits[z][0];
        if (t < 0 || t >= q)
            throw Error(ErrorKind::InvalidInput, "translation " + std::to_string(t) + " is outside 0.." +
                                                     std::to_string(q - 1) + "; not a constant-length substitution");
        for (Color j = 0; j < phi.colors(); ++j) s.words[j][t] = adm.table(j, z);
    }
    return s;
}

struct HeightData {
    std::vector<Int> g;  // L_i = g[i] Z
    Int r = 1;           // L' = r Z
    Int h = 1;
};

inline std::vector<Int> prime_factors(Int n) {
    std::vector<Int> out;
    for (Int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

inline HeightData height(const CosetProfile& profile, int q) {
    HeightData d;
    for (auto& l : profile.color_lattices) d.g.push_back(l.det());
    d.r = profile.lprime.det();
    d.h = d.r;
    for (Int p : prime_factors(q))
        while (d.h % p == 0) d.h /= p;
    return d;
}

inline HeightData height(const ConstantLengthSub& sub) {
    return height(color_lattices(find_seed(sub.mfs(), sub.names)), sub.q);
}

namespace detail {

inline std::vector<Color> apply_sub(const ConstantLengthSub& s, const std::vector<Color>& w) {
    std::vector<Color> out;
    out.reserve(w.size() * static_cast<std::size_t>(s.q));
    for (Color c : w) out.insert(out.end(), s.words[c].begin(), s.words[c].end());
    return out;
}

inline std::string block_string(const ConstantLengthSub& s, const std::vector<Color>& b) {
    std::string out;
    for (Color c : b) out += s.names[c];
    return out;
}

}  // namespace detail

inline constexpr std::size_t kMaxFixedPointLength = 4'000'000;

// Recodes the sequence by its aligned h-blocks.  Letters of the result are
// named a, b, c, ... in order of first appearance in the one-sided fixed
// point; `blocks` keeps the original spelling.
inline ConstantLengthSub pure_base(const ConstantLengthSub& sub, Int h) {
    if (h <= 1) return sub;
    const std::size_t hb = static_cast<std::size_t>(h);
    // one-sided fixed point of sigma^p: a letter whose p-th image starts with it
    std::optional<Color> start;
    int period = 0;
    for (int p = 1; p <= sub.letters() && !start; ++p)
        for (Color i = 0; i < sub.letters() && !start; ++i) {
            Color c = i;
            for (int k = 0; k < p; ++k) c = sub.words[c][0];
            if (c == i) {
                start = i;
                period = p;
            }
        }
    if (!start) throw Error(ErrorKind::NoSeedFound, "no letter starts its own image");

    std::map<std::vector<Color>, std::size_t> index;
    std::vector<std::vector<Color>> order;
    std::vector<Color> u{*start};
    while (u.size() < hb) {
        for (int k = 0; k < period; ++k) u = detail::apply_sub(sub, u);
    }
    for (std::size_t n = 0; n + hb <= u.size(); n += hb) {
        std::vector<Color> b(u.begin() + static_cast<long>(n), u.begin() + static_cast<long>(n + hb));
        if (index.emplace(b, order.size()).second) order.push_back(b);
    }
    // closure under sigma followed by chopping into h-blocks
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::vector<Color> img = detail::apply_sub(sub, order[k]);
        for (std::size_t n = 0; n < img.size(); n += hb) {
            std::vector<Color> b(img.begin() + static_cast<long>(n), img.begin() + static_cast<long>(n + hb));
            if (index.emplace(b, order.size()).second) {
                if (order.size() >= kMaxColors) throw Error(ErrorKind::BudgetExceeded, "too many h-blocks");
                order.push_back(b);
            }
        }
    }
    // rename by first appearance in the fixed point
    std::vector<std::size_t> first(order.size(), SIZE_MAX);
    std::size_t found = 0;
    for (std::size_t n = 0;; n += hb) {
        if (n + hb > u.size()) {
            if (found == order.size()) break;
            if (u.size() * static_cast<std::size_t>(sub.q) > kMaxFixedPointLength)
                throw Error(ErrorKind::Diverged, "some h-blocks do not appear in the fixed point prefix of length " +
                                                     std::to_string(u.size()));
            for (int k = 0; k < period; ++k) u = detail::apply_sub(sub, u);
        }
        std::vector<Color> b(u.begin() + static_cast<long>(n), u.begin() + static_cast<long>(n + hb));
        std::size_t k = index.at(b);
        if (first[k] == SIZE_MAX) {
            first[k] = n;
            if (++found == order.size()) break;
        }
    }
    std::vector<std::size_t> rank(order.size());
    {
        std::vector<std::size_t> by(order.size());
        for (std::size_t k = 0; k < by.size(); ++k) by[k] = k;
        std::sort(by.begin(), by.end(), [&](std::size_t a, std::size_t b) { return first[a] < first[b]; });
        for (std::size_t k = 0; k < by.size(); ++k) rank[by[k]] = k;
    }
    ConstantLengthSub out;
    out.q = sub.q;
    out.names.resize(order.size());
    out.blocks.resize(order.size());
    out.words.resize(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::size_t r = rank[k];
        out.names[r] = order.size() <= 26 ? std::string(1, static_cast<char>('a' + r)) : "b" + std::to_string(r);
        out.blocks[r] = detail::block_string(sub, order[k]);
        std::vector<Color> img = detail::apply_sub(sub, order[k]);
        for (std::size_t n = 0; n < img.size(); n += hb) {
            std::vector<Color> b(img.begin() + static_cast<long>(n), img.begin() + static_cast<long>(n + hb));
            out.words[r].push_back(static_cast<Color>(rank[index.at(b)]));
        }
    }
    return out;
}

struct DekkingResult {
    bool coincident = false;
    std::optional<int> k;
    std::optional<Int> j;                  // the symbol position inside sigma^k
    std::vector<std::size_t> digits;       // j written in base q, most significant first
    std::optional<Color> letter;           // the common letter
    std::size_t substitution_graph_size = 0;
    ConstantLengthSub pure;
    HeightData height_data;
};

inline DekkingResult dekking_coincidence(const ConstantLengthSub& sub, std::size_t max_states = substitution_state_budget()) {
    DekkingResult res;
    res.height_data = height(sub);
    res.pure = pure_base(sub, res.height_data.h);
    Admissibility adm = is_admissible(res.pure.mfs());
    SubstitutionGraph g = substitution_graph(adm.table, res.pure.letters(), max_states);
    res.substitution_graph_size = g.vertices.size();
    if (!g.constant_reached) return res;
    res.coincident = true;
    res.digits = g.path_to_constant();
    res.k = static_cast<int>(res.digits.size());
    Int j = 0;
    for (std::size_t z : res.digits) j = add_checked(mul_checked(j, res.pure.q), adm.table.digits[z][0]);
    res.j = j;
    res.letter = g.vertices[static_cast<std::size_t>(g.constant_vertex)][0];
    return res;
}

struct InternalSpaceDescriptor {
    std::vector<Int> q_primes;
    Int cyclic_order = 1;
    std::string note;

    std::string to_string() const {
        std::string s;
        for (std::size_t k = 0; k < q_primes.size(); ++k) s += (k ? " x Z_" : "Z_") + std::to_string(q_primes[k]);
        return s + " x C_" + std::to_string(cyclic_order);
    }
};

inline InternalSpaceDescriptor internal_space_descriptor(const CosetProfile& profile, int q) {
    InternalSpaceDescriptor d;
    d.q_primes = prime_factors(q);
    d.cyclic_order = height(profile, q).h;
    bool all_single = std::all_of(profile.psi0.begin(), profile.psi0.end(), [](auto& p) { return p.second.singleton(); });
    if (all_single && profile.index() == profile.colors())
        d.note = "periodic; C_" + std::to_string(profile.index()) + " suffices";
    return d;
}

inline InternalSpaceDescriptor internal_space_descriptor(const ConstantLengthSub& sub) {
    return internal_space_descriptor(color_lattices(find_seed(sub.mfs(), sub.names)), sub.q);
}

}  // namespace modco
