#pragma once

#include <map>
#include <set>
#include <tuple>
#include <optional>
#include <string>
#include <vector>

#include "modco/coincidence.hpp"

namespace modco {

// Lattice points v with |v|^2 <= R^2, in lexicographic order.
inline std::vector<IntVec> ball_points(int d, Int radius) {
    std::vector<IntVec> out;
    IntVec v(static_cast<std::size_t>(d), -radius);
    while (true) {
        Int n2 = 0;
        for (Int c : v) n2 += c * c;
        if (n2 <= radius * radius) out.push_back(v);
        int i = d - 1;
        while (i >= 0 && v[i] == radius) v[i--] = -radius;
        if (i < 0) break;
        ++v[i];
    }
    return out;
}

// Q F ∩ Z^d for the half-open unit box F: the points Q lambda, 0 <= lambda_i < 1.
inline std::vector<IntVec> fundamental_digits(const ExpansionMap& q) {
    const int d = q.dim();
    const IntMatrix& m = q.matrix();
    IntMatrix adj = adjugate(m);
    const Int det = q.det();
    IntVec lo(static_cast<std::size_t>(d), 0), hi(static_cast<std::size_t>(d), 0);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) (m(r, c) < 0 ? lo : hi)[r] += m(r, c);
    std::vector<IntVec> out;
    IntVec v = lo;
    while (true) {
        IntVec w = adj * v;  // det * Q^{-1} v
        bool inside = true;
        for (Int x : w) {
            // 0 <= x / det < 1
            if (det > 0 ? (x < 0 || x >= det) : (x > 0 || x <= det)) inside = false;
        }
        if (inside) out.push_back(v);
        int i = d - 1;
        while (i >= 0 && v[i] == hi[i]) {
            v[i] = lo[i];
            --i;
        }
        if (i < 0) break;
        ++v[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct ClusterClass {
    int id = 0;
    Color center = 0;
    std::vector<Color> colors;  // color at each ball offset, in ball_points order
    IntVec representative;      // a center position (normalized coordinates)
    std::vector<int> image;     // class at Q x + f for each fundamental digit f
};

struct ClusterCensus {
    Int radius = 0;
    std::vector<IntVec> offsets;
    std::vector<IntVec> digits;  // fundamental digits, sorted
    std::vector<ClusterClass> classes;
    int depth = 0;
};

struct CollarOptions {
    int max_depth = 24;
    std::size_t max_points = kDefaultMaxPatchPoints;
    std::size_t max_classes = 100'000;
};

namespace detail {

inline std::optional<std::vector<Color>> cluster_at(const Patch& p, const IntVec& x, const std::vector<IntVec>& offsets) {
    std::vector<Color> out;
    out.reserve(offsets.size());
    for (auto& o : offsets) {
        auto c = p.at(add(x, o));
        if (!c) return std::nullopt;
        out.push_back(*c);
    }
    return out;
}

}  // namespace detail

// Translation classes of R-clusters, each with the classes its substituted
// image carries.  Clusters are read from complete balls of the seed patch;
// the class list must stay unchanged over two consecutive depths and every
// representative of a class must substitute the same way.
inline ClusterCensus enumerate_clusters(const LssSpec& spec, Int radius, const CollarOptions& opt = {}) {
    if (radius < 0) throw Error(ErrorKind::InvalidInput, "radius must be >= 0");
    ClusterCensus cc;
    cc.radius = radius;
    cc.offsets = ball_points(spec.dim(), radius);
    cc.digits = fundamental_digits(spec.mfs.expansion());
    const ExpansionMap& q = spec.mfs.expansion();
    // patches live in normalized coordinates; Q x + F is taken in the user's
    const IntVec anchor = sub(q.apply(spec.shift), spec.shift);
    PatchGrower grower(spec, opt.max_points);
    std::size_t previous = 0;
    int quiet = 0;
    for (int depth = 1; depth <= opt.max_depth; ++depth) {
        try {
            grower.grow();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BudgetExceeded) throw;
            throw Error(ErrorKind::Diverged, "R=" + std::to_string(radius) + " clusters did not stabilize (" + e.what() + ")");
        }
        const Patch& p = grower.patch();
        std::map<std::vector<Color>, int> ids;
        std::vector<ClusterClass> classes;
        std::vector<IntVec> centers;
        for (auto& [x, c] : p.points) centers.push_back(x);
        std::sort(centers.begin(), centers.end());
        for (auto& x : centers) {
            auto key = detail::cluster_at(p, x, cc.offsets);
            if (!key) continue;
            auto [it, fresh] = ids.emplace(*key, 0);
            if (fresh) {
                if (ids.size() > opt.max_classes)
                    throw Error(ErrorKind::BudgetExceeded, "more than " + std::to_string(opt.max_classes) +
                                                               " cluster classes at R=" + std::to_string(radius));
                ClusterClass k;
                k.center = p.points.at(x);
                k.colors = *key;
                k.representative = x;
                classes.push_back(std::move(k));
            }
        }
        // order classes by center color, then by configuration
        std::sort(classes.begin(), classes.end(),
                  [](const ClusterClass& a, const ClusterClass& b) {
                      return std::tie(a.center, a.colors) < std::tie(b.center, b.colors);
                  });
        for (std::size_t k = 0; k < classes.size(); ++k) {
            classes[k].id = static_cast<int>(k);
            ids[classes[k].colors] = static_cast<int>(k);
        }
        // images, checked on every representative whose image is visible
        std::vector<char> known(classes.size(), 0);
        for (auto& x : centers) {
            auto key = detail::cluster_at(p, x, cc.offsets);
            if (!key) continue;
            ClusterClass& k = classes[static_cast<std::size_t>(ids.at(*key))];
            IntVec qx = add(q.apply(x), anchor);
            std::vector<int> image;
            for (auto& f : cc.digits) {
                auto child = detail::cluster_at(p, add(qx, f), cc.offsets);
                if (!child) break;
                image.push_back(ids.at(*child));
            }
            if (image.size() != cc.digits.size()) continue;
            if (!known[k.id]) {
                k.image = image;
                known[k.id] = 1;
            } else if (k.image != image) {
                throw Error(ErrorKind::NotWellDefined,
                            "R=" + std::to_string(radius) + ": cluster class " + std::to_string(k.id) + " at " +
                                format_vec(k.representative) + " and " + format_vec(x) + " substitutes differently");
            }
        }
        bool complete = std::all_of(known.begin(), known.end(), [](char c) { return c; });
        quiet = (!classes.empty() && classes.size() == previous) ? quiet + 1 : 0;
        previous = classes.size();
        if (complete && quiet >= 2) {
            cc.classes = std::move(classes);
            cc.depth = grower.depth();
            return cc;
        }
    }
    throw Error(ErrorKind::Diverged, "R=" + std::to_string(radius) + " clusters did not stabilize by depth " +
                                         std::to_string(opt.max_depth));
}

// The growth condition, checked per class: every lattice point within R of
// Q F must be hit by the image of the centered cluster.  Q F + R B is
// approximated by the lattice points within R of Q F ∩ Z^d.
inline bool is_nicely_growing(const LssSpec& spec, const ClusterCensus& cc) {
    const Mfs& phi = spec.source;
    const ExpansionMap& q = phi.expansion();
    std::set<IntVec> region;
    for (auto& f : cc.digits)
        for (auto& b : cc.offsets) region.insert(add(f, b));
    for (auto& k : cc.classes) {
        std::set<IntVec> hit;
        for (std::size_t s = 0; s < cc.offsets.size(); ++s) {
            IntVec qo = q.apply(cc.offsets[s]);
            for (Color i = 0; i < phi.colors(); ++i)
                for (auto& a : phi.at(i, k.colors[s])) hit.insert(add(qo, a));
        }
        for (auto& y : region)
            if (!hit.count(y)) return false;
    }
    return true;
}

// Two representatives of one class that substitute differently already
// rule out the growth condition.
inline bool is_nicely_growing(const LssSpec& spec, Int radius, const CollarOptions& opt = {}) {
    try {
        return is_nicely_growing(spec, enumerate_clusters(spec, radius, opt));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotWellDefined) return false;
        throw;
    }
}

struct CollaredSystem {
    LssSpec spec;                 // colors are the cluster classes
    std::vector<Color> color_map;  // class -> original color
    ClusterCensus clusters;
};

inline CollaredSystem admissibilize(const LssSpec& spec, const ClusterCensus& cc) {
    if (!is_nicely_growing(spec, cc))
        throw Error(ErrorKind::NotNicelyGrowing, "the growth condition fails at R=" + std::to_string(cc.radius));
    const int n = static_cast<int>(cc.classes.size());
    if (static_cast<std::size_t>(n) > kMaxColors)
        throw Error(ErrorKind::BudgetExceeded, "the collared system would have " + std::to_string(n) +
                                                   " colors; at most " + std::to_string(kMaxColors) + " are supported");
    RuleTable rules = Mfs::empty_rules(n);
    for (auto& k : cc.classes)
        for (std::size_t z = 0; z < cc.digits.size(); ++z) rules[k.image[z]][k.id].push_back(cc.digits[z]);
    Mfs phi(spec.mfs.expansion(), std::move(rules));

    CollaredSystem out;
    out.clusters = cc;
    std::vector<std::string> names;
    std::vector<int> seen(static_cast<std::size_t>(spec.colors()), 0);
    for (auto& k : cc.classes) {
        out.color_map.push_back(k.center);
        names.push_back(spec.name(k.center) + "_" + std::to_string(++seen[k.center]));
    }
    Admissibility adm = is_admissible(phi);
    if (!adm.admissible)
        throw Error(ErrorKind::AdmissibilityPostcheckFailed, "collared system is not admissible: " + adm.diagnostic);
    if (!is_primitive(phi))
        throw Error(ErrorKind::AdmissibilityPostcheckFailed, "collared system is not primitive");
    out.spec = find_seed(phi, std::move(names));
    return out;
}
inline CollaredSystem admissibilize(const LssSpec& spec, Int radius, const CollarOptions& opt = {}) {
    return admissibilize(spec, enumerate_clusters(spec, radius, opt));
}

struct CollarSearch {
    std::optional<CollaredSystem> system;
    std::vector<std::pair<Int, std::string>> attempts;  // radius, outcome
};

inline constexpr Int kDefaultCollarCap = 32;

// Tries R = 1, 2, 4, ... up to the cap and keeps the first radius that is
// nicely growing and well defined.
inline CollarSearch search_collar(const LssSpec& spec, Int cap = kDefaultCollarCap, const CollarOptions& opt = {}) {
    CollarSearch s;
    for (Int r = 1; r <= cap; r *= 2) {
        try {
            ClusterCensus cc = enumerate_clusters(spec, r, opt);
            if (!is_nicely_growing(spec, cc)) {
                s.attempts.push_back({r, "not nicely growing"});
                continue;
            }
            s.system = admissibilize(spec, cc);
            s.attempts.push_back({r, "ok, " + std::to_string(cc.classes.size()) + " classes"});
            return s;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotWellDefined && !e.is_budget()) throw;
            s.attempts.push_back({r, e.what()});
        }
    }
    return s;
}

// Patch-scale check of mutual local derivability: grow the collared system
// from its own seed, map every color back, and compare the R-ball around
// each interior point with the cluster its class stands for.  Returns the
// number of points checked, 0 if any disagrees.
inline std::size_t check_refinement(const CollaredSystem& collared, int depth) {
    Patch mine = generate_patch(collared.spec, depth);
    const ClusterCensus& cc = collared.clusters;
    std::size_t checked = 0;
    for (auto& [x, c] : mine.points) {
        auto ball = detail::cluster_at(mine, x, cc.offsets);
        if (!ball) continue;
        for (std::size_t s = 0; s < ball->size(); ++s)
            if (collared.color_map[(*ball)[s]] != cc.classes[static_cast<std::size_t>(c)].colors[s]) return 0;
        ++checked;
    }
    return checked;
}

enum class Transfer { ModelSets, Inconclusive };

struct TransferFinding {
    Transfer result;
    std::string message;
};

inline TransferFinding transfer_verdict(const Verdict& collared) {
    if (collared.status == Status::Coincident)
        return {Transfer::ModelSets, "collared system has a modular coincidence, so the original consists of model sets"};
    return {Transfer::Inconclusive, "no coincidence found for the collared system; the original is undecided"};
}

}  // namespace modco
