#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "modco/mfs.hpp"

namespace modco {

// Subset of the (at most kMaxColors) colors.
class ColorSet {
public:
    static constexpr std::size_t kWords = kMaxColors / 64;

    ColorSet() = default;

    static ColorSet single(Color c) {
        ColorSet s;
        s.insert(c);
        return s;
    }

    void insert(Color c) { w_[static_cast<std::size_t>(c) / 64] |= std::uint64_t{1} << (c % 64); }
    bool contains(Color c) const { return (w_[static_cast<std::size_t>(c) / 64] >> (c % 64)) & 1u; }
    int size() const {
        int n = 0;
        for (auto w : w_) n += std::popcount(w);
        return n;
    }
    bool empty() const { return size() == 0; }
    bool singleton() const { return size() == 1; }

    Color first() const {
        for (std::size_t k = 0; k < kWords; ++k)
            if (w_[k]) return static_cast<Color>(64 * k + static_cast<std::size_t>(std::countr_zero(w_[k])));
        return -1;
    }

    std::vector<Color> members() const {
        std::vector<Color> out;
        for (std::size_t k = 0; k < kWords; ++k)
            for (std::uint64_t b = w_[k]; b; b &= b - 1)
                out.push_back(static_cast<Color>(64 * k + static_cast<std::size_t>(std::countr_zero(b))));
        return out;
    }

    std::size_t hash() const {
        std::size_t h = 0;
        for (auto w : w_) h = h * 0x9e3779b97f4a7c15ull ^ (w + (h >> 7));
        return h;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        std::string s = "{";
        bool first_member = true;
        for (Color c : members()) {
            if (!first_member) s += ",";
            s += names[static_cast<std::size_t>(c)];
            first_member = false;
        }
        return s + "}";
    }

    auto operator<=>(const ColorSet&) const = default;

private:
    std::array<std::uint64_t, kWords> w_{};
};

struct ColorSetHash {
    std::size_t operator()(const ColorSet& s) const { return s.hash(); }
};

struct CosetProfile {
    std::vector<Sublattice> color_lattices;  // L_i
    Sublattice lprime;                       // L' = L_1 + ... + L_m
    std::vector<CosetLabel> class_of;        // c(i) in Z^d / L'
    std::vector<std::pair<CosetLabel, ColorSet>> psi0;
    std::vector<IntVec> sample_points;  // one point of each V_i (source coordinates)
    int depth = 0;                      // patch depth at which the lattices were certified

    int colors() const { return static_cast<int>(color_lattices.size()); }
    Int index() const { return lprime.det(); }

    // position of color c's class in psi0
    std::size_t class_index(Color c) const {
        for (std::size_t k = 0; k < psi0.size(); ++k)
            if (psi0[k].second.contains(c)) return k;
        return psi0.size();
    }
};

struct CosetOptions {
    int max_depth = 32;
    std::size_t max_points = kDefaultMaxPatchPoints;
};

inline bool verify_coset_consistency(const Mfs& phi, const Sublattice& lambda, const std::vector<CosetLabel>& c) {
    const ExpansionMap& q = phi.expansion();
    for (Color i = 0; i < phi.colors(); ++i)
        for (Color j = 0; j < phi.colors(); ++j) {
            IntVec qc = q.apply(c[j].representative);
            for (auto& a : phi.at(i, j))
                if (!lambda.contains(sub(add(qc, a), c[i].representative))) return false;
        }
    return true;
}

// Per-color certificate: if Q L_j lies in L_i whenever Phi_ij is nonempty and
// Q y_j + a - y_i lies in L_i for every rule, then by induction over the
// patches every point of color i stays in y_i + L_i.
inline bool verify_color_lattices(const Mfs& phi, const std::vector<Sublattice>& lat, const std::vector<IntVec>& y) {
    const ExpansionMap& q = phi.expansion();
    for (Color i = 0; i < phi.colors(); ++i)
        for (Color j = 0; j < phi.colors(); ++j) {
            if (phi.at(i, j).empty()) continue;
            for (auto& col : lat[j].columns())
                if (!lat[i].contains(q.apply(col))) return false;
            IntVec qy = q.apply(y[j]);
            for (auto& a : phi.at(i, j))
                if (!lat[i].contains(sub(add(qy, a), y[i]))) return false;
        }
    return true;
}

inline CosetProfile color_lattices(const LssSpec& spec, const CosetOptions& opt = {}) {
    const int m = spec.colors();
    const int d = spec.dim();
    PatchGrower grower(spec, opt.max_points);
    std::vector<LatticeBuilder> builders(static_cast<std::size_t>(m), LatticeBuilder(d));
    std::vector<std::optional<IntVec>> base(static_cast<std::size_t>(m));
    int quiet = 0;
    auto diverged = [&](const std::string& why) {
        std::string ranks;
        for (Color c = 0; c < m; ++c)
            ranks += (c ? ", " : "") + spec.name(c) + ": rank " + std::to_string(builders[c].rank());
        return Error(ErrorKind::Diverged, "color lattices did not stabilize by depth " +
                                              std::to_string(grower.depth()) + " (" + why + "; " + ranks + ")");
    };
    for (int depth = 0; depth <= opt.max_depth; ++depth) {
        if (depth > 0) {
            try {
                grower.grow();
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::BudgetExceeded) throw;
                throw diverged("patch size cap reached");
            }
        }
        bool changed = false;
        for (auto& [x, c] : grower.patch().points) {
            if (!base[c]) {
                base[c] = x;
                changed = true;
            } else if (builders[c].add(sub(x, *base[c]))) {
                changed = true;
            }
        }
        quiet = changed ? 0 : quiet + 1;
        if (quiet < 2) continue;
        bool ready = true;
        for (Color c = 0; c < m; ++c) ready = ready && base[c] && builders[c].full_rank();
        if (!ready) continue;

        std::vector<Sublattice> lat;
        std::vector<IntVec> y;
        for (Color c = 0; c < m; ++c) {
            lat.push_back(builders[c].lattice());
            y.push_back(*base[c]);
        }
        if (!verify_color_lattices(spec.mfs, lat, y)) continue;

        CosetProfile prof;
        prof.color_lattices = lat;
        prof.depth = grower.depth();
        LatticeBuilder sum(d);
        for (auto& l : lat)
            for (auto& col : l.columns()) sum.add(col);
        prof.lprime = sum.lattice();
        // back to the user's coordinates; use the smallest point of each
        // color in the patch as its sample
        std::vector<std::optional<IntVec>> smallest(static_cast<std::size_t>(m));
        for (auto& [x, c] : grower.patch().points)
            if (!smallest[c] || x < *smallest[c]) smallest[c] = x;
        for (Color c = 0; c < m; ++c) {
            IntVec p = add(*smallest[c], spec.shift);
            prof.sample_points.push_back(p);
            prof.class_of.push_back(coset_reduce(p, prof.lprime));
        }
        if (!verify_coset_consistency(spec.source, prof.lprime, prof.class_of))
            throw Error(ErrorKind::InvalidInput, "coset classes are inconsistent with the rules");
        for (auto& rep : coset_representatives(Sublattice::standard(d), prof.lprime)) {
            ColorSet s;
            for (Color c = 0; c < m; ++c)
                if (prof.class_of[c].representative == rep.representative) s.insert(c);
            if (s.empty())
                throw Error(ErrorKind::InvalidInput,
                            "no point lies in the coset " + format_vec(rep.representative) + " + " +
                                prof.lprime.to_string() +
                                "; the support is a proper sublattice, rewrite the input in a basis of it");
            prof.psi0.push_back({rep, s});
        }
        return prof;
    }
    throw diverged("depth cap reached");
}

}  // namespace modco
