#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "modco/lattice.hpp"

namespace modco {

using Color = int;

// Translation sets of an m x m matrix function system: entry (i, j) holds
// the a with x -> Qx + a mapping color j points to color i points.
using RuleTable = std::vector<std::vector<std::vector<IntVec>>>;

inline constexpr std::size_t kMaxColors = 256;

class Mfs {
public:
    Mfs() = default;

    Mfs(ExpansionMap q, RuleTable rules) : q_(std::move(q)), rules_(std::move(rules)) {
        const std::size_t m = rules_.size();
        if (m == 0) throw Error(ErrorKind::InvalidInput, "a system needs at least one color");
        if (m > kMaxColors)
            throw Error(ErrorKind::InvalidInput, "at most " + std::to_string(kMaxColors) + " colors are supported");
        for (auto& row : rules_) {
            if (row.size() != m) throw Error(ErrorKind::DimensionMismatch, "rule table is not square");
            for (auto& cell : row) {
                for (auto& a : cell)
                    if (static_cast<int>(a.size()) != q_.dim())
                        throw Error(ErrorKind::DimensionMismatch,
                                    "translation " + format_vec(a) + " does not have dimension " +
                                        std::to_string(q_.dim()));
                std::sort(cell.begin(), cell.end());
                cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
            }
        }
    }

    static RuleTable empty_rules(int m) {
        return RuleTable(static_cast<std::size_t>(m), std::vector<std::vector<IntVec>>(static_cast<std::size_t>(m)));
    }

    int colors() const { return static_cast<int>(rules_.size()); }
    int dim() const { return q_.dim(); }
    const ExpansionMap& expansion() const { return q_; }
    const RuleTable& rules() const { return rules_; }
    const std::vector<IntVec>& at(Color i, Color j) const { return rules_[i][j]; }

    std::size_t total_maps() const {
        std::size_t n = 0;
        for (auto& row : rules_)
            for (auto& cell : row) n += cell.size();
        return n;
    }

    // The system for V - t: every translation a becomes a + Qt - t.
    Mfs translated(const IntVec& t) const {
        IntVec shift = sub(q_.apply(t), t);
        RuleTable r = rules_;
        for (auto& row : r)
            for (auto& cell : row)
                for (auto& a : cell) a = add(a, shift);
        return Mfs(q_, std::move(r));
    }

    bool operator==(const Mfs& o) const { return q_ == o.q_ && rules_ == o.rules_; }

private:
    ExpansionMap q_;
    RuleTable rules_;
};

using IntMatrixRows = std::vector<std::vector<Int>>;

inline IntMatrixRows substitution_matrix(const Mfs& phi) {
    const int m = phi.colors();
    IntMatrixRows s(static_cast<std::size_t>(m), std::vector<Int>(static_cast<std::size_t>(m), 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s[i][j] = static_cast<Int>(phi.at(i, j).size());
    return s;
}

// Boolean powers by repeated squaring; primitive iff the
// ((m-1)^2 + 1)-th power of the incidence matrix is positive.
inline bool is_primitive(const Mfs& phi) {
    const std::size_t m = static_cast<std::size_t>(phi.colors());
    const std::size_t words = (m + 63) / 64;
    using Rows = std::vector<std::vector<std::uint64_t>>;
    Rows a(m, std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (!phi.at(static_cast<Color>(i), static_cast<Color>(j)).empty()) a[i][j / 64] |= std::uint64_t{1} << (j % 64);
    auto mul = [&](const Rows& x, const Rows& y) {
        Rows out(m, std::vector<std::uint64_t>(words, 0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t l = 0; l < m; ++l)
                if ((x[i][l / 64] >> (l % 64)) & 1u)
                    for (std::size_t w = 0; w < words; ++w) out[i][w] |= y[l][w];
        return out;
    };
    std::size_t n = (m - 1) * (m - 1) + 1;
    Rows result, base = a;
    bool have = false;
    while (n) {
        if (n & 1u) {
            result = have ? mul(result, base) : base;
            have = true;
        }
        n >>= 1;
        if (n) base = mul(base, base);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (!((result[i][j / 64] >> (j % 64)) & 1u)) return false;
    return true;
}

inline constexpr std::size_t kDefaultComposeBudget = 20'000'000;

// (outer o inner)_ij = { g o f : g in outer_il, f in inner_lj }, where
// g o f has translation Q_outer a_f + a_g.
inline Mfs compose(const Mfs& outer, const Mfs& inner, std::size_t budget = kDefaultComposeBudget) {
    if (outer.dim() != inner.dim() || outer.colors() != inner.colors())
        throw Error(ErrorKind::DimensionMismatch, "cannot compose systems of different shape");
    const int m = outer.colors();
    std::size_t work = 0;
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l)
            for (int j = 0; j < m; ++j) work += outer.at(i, l).size() * inner.at(l, j).size();
    if (work > budget)
        throw Error(ErrorKind::BudgetExceeded, "composition would produce " + std::to_string(work) +
                                                   " maps (budget " + std::to_string(budget) + ")");
    RuleTable r = Mfs::empty_rules(m);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l) {
            if (outer.at(i, l).empty()) continue;
            for (int j = 0; j < m; ++j)
                for (const auto& f : inner.at(l, j)) {
                    IntVec qf = outer.expansion().apply(f);
                    for (const auto& g : outer.at(i, l)) r[i][j].push_back(add(qf, g));
                }
        }
    return Mfs(outer.expansion().then(inner.expansion()), std::move(r));
}

// Memoized powers by repeated squaring.
class PowerCache {
public:
    explicit PowerCache(Mfs base, std::size_t budget = kDefaultComposeBudget)
        : budget_(budget) {
        squares_.push_back(std::move(base));
    }

    const Mfs& base() const { return squares_.front(); }

    const Mfs& power(int k) {
        if (k < 1) throw Error(ErrorKind::InvalidInput, "power exponent must be positive");
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        std::optional<Mfs> acc;
        int bit = 0;
        for (int e = k; e > 0; e >>= 1, ++bit) {
            while (static_cast<int>(squares_.size()) <= bit)
                squares_.push_back(compose(squares_.back(), squares_.back(), budget_));
            if (e & 1) acc = acc ? compose(*acc, squares_[bit], budget_) : squares_[bit];
        }
        return memo_.emplace(k, std::move(*acc)).first->second;
    }

private:
    std::size_t budget_;
    std::vector<Mfs> squares_;  // base^(2^i)
    std::map<int, Mfs> memo_;
};

inline Mfs power(const Mfs& phi, int k, std::size_t budget = kDefaultComposeBudget) {
    PowerCache cache(phi, budget);
    return cache.power(k);
}

// ---- admissibility -----------------------------------------------------------

// Phi(j)_z for every digit z, digits in canonical order (by reduced
// representative mod QZ^d).
struct DigitTable {
    std::vector<IntVec> digits;
    std::vector<std::vector<Color>> image;  // image[z][j]

    std::size_t size() const { return digits.size(); }
    Color operator()(Color j, std::size_t z) const { return image[z][static_cast<std::size_t>(j)]; }
};

struct Admissibility {
    bool admissible = false;
    std::string diagnostic;
    DigitTable table;
};

inline Admissibility is_admissible(const Mfs& phi) {
    Admissibility res;
    const int m = phi.colors();
    std::vector<IntVec> all;
    for (auto& row : phi.rules())
        for (auto& cell : row) all.insert(all.end(), cell.begin(), cell.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    const Int n = phi.expansion().abs_det();
    if (static_cast<Int>(all.size()) != n) {
        res.diagnostic = "the system uses " + std::to_string(all.size()) + " distinct translations but |det Q| = " +
                         std::to_string(n);
        return res;
    }
    Sublattice ql = Sublattice::standard(phi.dim()).image(phi.expansion().matrix());
    std::vector<std::pair<IntVec, IntVec>> keyed;
    for (auto& a : all) keyed.push_back({ql.reduce(a), a});
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 1; i < keyed.size(); ++i)
        if (keyed[i].first == keyed[i - 1].first) {
            res.diagnostic = "translations " + format_vec(keyed[i - 1].second) + " and " +
                             format_vec(keyed[i].second) + " are congruent mod QZ^d";
            return res;
        }
    std::map<IntVec, std::size_t> pos;
    for (std::size_t z = 0; z < keyed.size(); ++z) {
        res.table.digits.push_back(keyed[z].second);
        pos[keyed[z].second] = z;
    }
    res.table.image.assign(keyed.size(), std::vector<Color>(static_cast<std::size_t>(m), -1));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            for (auto& a : phi.at(i, j)) {
                Color& slot = res.table.image[pos[a]][j];
                if (slot != -1) {
                    res.diagnostic = "translation " + format_vec(a) + " occurs more than once in column " +
                                     std::to_string(j);
                    return res;
                }
                slot = i;
            }
    for (std::size_t z = 0; z < keyed.size(); ++z)
        for (int j = 0; j < m; ++j)
            if (res.table.image[z][j] == -1) {
                res.diagnostic = "translation " + format_vec(res.table.digits[z]) + " is missing from column " +
                                 std::to_string(j);
                return res;
            }
    res.admissible = true;
    return res;
}

inline bool is_bijective(const Mfs& phi) {
    Admissibility adm = is_admissible(phi);
    if (!adm.admissible) throw Error(ErrorKind::NotAdmissible, "bijectivity needs an admissible system: " + adm.diagnostic);
    for (auto& col : adm.table.image) {
        std::vector<char> hit(col.size(), 0);
        for (Color c : col) {
            if (hit[c]) return false;
            hit[c] = 1;
        }
    }
    return true;
}

// One-dimensional constant-length substitution: words[j][z] is the letter
// placed at offset z inside the image of letter j.
inline Mfs from_words(const std::vector<std::vector<Color>>& words) {
    const int m = static_cast<int>(words.size());
    if (m == 0) throw Error(ErrorKind::InvalidInput, "empty alphabet");
    const std::size_t q = words[0].size();
    if (q < 2) throw Error(ErrorKind::InvalidInput, "constant-length words need length >= 2");
    RuleTable rules = Mfs::empty_rules(m);
    for (int j = 0; j < m; ++j) {
        if (words[j].size() != q) throw Error(ErrorKind::InvalidInput, "words of different lengths");
        for (std::size_t z = 0; z < q; ++z) {
            Color i = words[j][z];
            if (i < 0 || i >= m) throw Error(ErrorKind::InvalidInput, "letter out of range");
            rules[i][j].push_back({static_cast<Int>(z)});
        }
    }
    return Mfs(ExpansionMap(IntMatrix::scalar(1, static_cast<Int>(q))), std::move(rules));
}

// ---- lattice substitution systems --------------------------------------------

// A system normalized so that its seed point sits at the origin.  The seed is
// reproduced by Phi^seed_period, and the set it generates is only invariant
// under that power, so `mfs` and `source` hold Phi^seed_period; `shift`
// records the translation applied to the user's coordinates
// (normalized = original - shift).  Patches live in
// normalized coordinates; everything reported to users is in the
// coordinates of `source`.
struct LssSpec {
    Mfs mfs;
    Mfs source;
    std::vector<std::string> color_names;
    Color seed_color = 0;
    int seed_period = 1;
    IntVec shift;

    int colors() const { return mfs.colors(); }
    int dim() const { return mfs.dim(); }
    const std::string& name(Color c) const { return color_names[static_cast<std::size_t>(c)]; }
};

inline std::vector<std::string> default_color_names(int m) {
    std::vector<std::string> names;
    for (int i = 0; i < m; ++i) names.push_back(m <= 26 ? std::string(1, static_cast<char>('a' + i)) : "c" + std::to_string(i));
    return names;
}

namespace detail {

inline LssSpec normalized(const Mfs& phi, std::vector<std::string> names, Color c, int period, const IntVec& p,
                          std::size_t budget) {
    if (names.empty()) names = default_color_names(phi.colors());
    if (static_cast<int>(names.size()) != phi.colors())
        throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(phi.colors()) + " color names");
    Mfs sys = period > 1 ? power(phi, period, budget) : phi;
    return LssSpec{sys.translated(p), sys, std::move(names), c, period, p};
}

inline void require_primitive(const Mfs& phi) {
    if (!is_primitive(phi))
        throw Error(ErrorKind::NotPrimitive, "the substitution matrix is not primitive");
}

}  // namespace detail

inline LssSpec find_seed(const Mfs& phi, std::vector<std::string> names = {},
                         std::size_t budget = kDefaultComposeBudget) {
    detail::require_primitive(phi);
    const int m = phi.colors();
    Mfs pk = phi;
    for (int k = 1; k <= m; ++k) {
        if (k > 1) pk = compose(pk, phi, budget);
        IntMatrix fix = pk.expansion().matrix() - IntMatrix::identity(phi.dim());
        Int det = determinant(fix);
        IntMatrix adj = adjugate(fix);
        for (Color i = 0; i < m; ++i)
            for (auto& a : pk.at(i, i)) {
                IntVec y = adj * scale(-1, a);
                bool integral = std::all_of(y.begin(), y.end(), [&](Int v) { return v % det == 0; });
                if (!integral) continue;
                for (auto& v : y) v /= det;
                return detail::normalized(phi, std::move(names), i, k, y, budget);
            }
    }
    throw Error(ErrorKind::NoSeedFound,
                "no integral fixed point of any map in Phi^k, k <= " + std::to_string(m) +
                    "; supply a seed explicitly");
}

// Use a user-chosen seed; it must be fixed by some map of Phi^k_cc, k <= m.
inline LssSpec with_seed(const Mfs& phi, std::vector<std::string> names, Color c, const IntVec& position,
                         std::size_t budget = kDefaultComposeBudget) {
    detail::require_primitive(phi);
    if (static_cast<int>(position.size()) != phi.dim())
        throw Error(ErrorKind::DimensionMismatch, "seed position has the wrong dimension");
    Mfs pk = phi;
    for (int k = 1; k <= phi.colors(); ++k) {
        if (k > 1) pk = compose(pk, phi, budget);
        IntVec qx = pk.expansion().apply(position);
        for (auto& a : pk.at(c, c))
            if (add(qx, a) == position) return detail::normalized(phi, std::move(names), c, k, position, budget);
    }
    throw Error(ErrorKind::NoSeedFound, "the seed point is not reproduced by Phi^k for any k <= " +
                                            std::to_string(phi.colors()));
}

// ---- patches -------------------------------------------------------------------

struct Patch {
    std::unordered_map<IntVec, Color, VecHash> points;
    int depth = 0;

    std::size_t size() const { return points.size(); }

    std::optional<Color> at(const IntVec& x) const {
        auto it = points.find(x);
        if (it == points.end()) return std::nullopt;
        return it->second;
    }
};

inline constexpr std::size_t kDefaultMaxPatchPoints = 3'000'000;

// Iterates the system on the seed, checking that every image point is
// produced exactly once.
class PatchGrower {
public:
    explicit PatchGrower(const LssSpec& spec, std::size_t max_points = kDefaultMaxPatchPoints)
        : spec_(&spec), max_points_(max_points), images_(static_cast<std::size_t>(spec.colors())) {
        const Mfs& phi = spec.mfs;
        for (Color j = 0; j < phi.colors(); ++j)
            for (Color i = 0; i < phi.colors(); ++i)
                for (auto& a : phi.at(i, j)) images_[j].push_back({i, a});
        patch_.points.emplace(zero_vec(spec.dim()), spec.seed_color);
    }

    const Patch& patch() const { return patch_; }
    int depth() const { return patch_.depth; }

    void grow() {
        step();
        ++patch_.depth;
    }

    void grow_to(int depth) {
        while (patch_.depth < depth) grow();
    }

private:
    void step() {
        const ExpansionMap& q = spec_->mfs.expansion();
        std::size_t expected = 0;
        for (auto& [x, j] : patch_.points) expected += images_[j].size();
        if (expected > max_points_)
            throw Error(ErrorKind::BudgetExceeded, "patch would grow to " + std::to_string(expected) +
                                                       " points (cap " + std::to_string(max_points_) + ")");
        std::unordered_map<IntVec, Color, VecHash> next;
        next.reserve(expected);
        for (auto& [x, j] : patch_.points) {
            IntVec qx = q.apply(x);
            for (auto& [i, a] : images_[j]) {
                IntVec y = add(qx, a);
                auto [it, fresh] = next.emplace(y, i);
                if (!fresh)
                    throw Error(ErrorKind::NotAnLSS, "not a lattice substitution system: position " + format_vec(y) +
                                                         " receives colors " + spec_->name(it->second) + " and " +
                                                         spec_->name(i));
            }
        }
        patch_.points = std::move(next);
    }

    const LssSpec* spec_;
    std::size_t max_points_;
    std::vector<std::vector<std::pair<Color, IntVec>>> images_;
    Patch patch_;
};

inline Patch generate_patch(const LssSpec& spec, int depth, std::size_t max_points = kDefaultMaxPatchPoints) {
    PatchGrower g(spec, max_points);
    g.grow_to(depth);
    return g.patch();
}

}  // namespace modco
