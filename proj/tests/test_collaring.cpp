#include <map>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace modco;

namespace {

LssSpec fixture(const std::string& name) { return to_lss(builtin(name)); }

Status verdict_of(const LssSpec& spec) { return analyze_coincidence(spec, {}).verdict.status; }

std::map<IntVec, Color> source_patch(const LssSpec& spec, int depth) {
    std::map<IntVec, Color> out;
    for (auto& [x, c] : generate_patch(spec, depth).points) out[add(x, spec.shift)] = c;
    return out;
}

// The growth condition checked at every center of a large patch rather than
// per class: the image of the R-ball around t must cover Q t + Q F + R B.
bool nicely_growing_oracle(const LssSpec& spec, Int radius, int depth) {
    const Mfs& phi = spec.source;
    const ExpansionMap& q = phi.expansion();
    auto patch = source_patch(spec, depth);
    auto ball = ball_points(spec.dim(), radius);
    auto digits = fundamental_digits(q);
    std::size_t centers = 0;
    for (auto& [t, c] : patch) {
        std::set<IntVec> hit;
        bool full = true;
        for (auto& b : ball) {
            auto it = patch.find(add(t, b));
            if (it == patch.end()) {
                full = false;
                break;
            }
            for (Color i = 0; i < phi.colors(); ++i)
                for (auto& a : phi.at(i, it->second)) hit.insert(add(q.apply(it->first), a));
        }
        if (!full) continue;
        ++centers;
        IntVec qt = q.apply(t);
        for (auto& f : digits)
            for (auto& b : ball)
                if (!hit.count(add(add(qt, f), b))) return false;
    }
    EXPECT_GT(centers, 0u);
    return true;
}

}  // namespace

TEST(Ball, PointsAndOrder) {
    EXPECT_EQ(ball_points(1, 2), (std::vector<IntVec>{{-2}, {-1}, {0}, {1}, {2}}));
    auto b = ball_points(2, 1);
    EXPECT_EQ(b, (std::vector<IntVec>{{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}}));
    EXPECT_EQ(ball_points(2, 2).size(), 13u);
    EXPECT_EQ(ball_points(3, 0), (std::vector<IntVec>{{0, 0, 0}}));
}

TEST(Ball, FundamentalDigitsCountDet) {
    for (auto name : {"thue-morse", "kolakoski24", "chair", "table", "house", "nonadmissible2"}) {
        LssSpec spec = fixture(name);
        const ExpansionMap& q = spec.mfs.expansion();
        auto f = fundamental_digits(q);
        EXPECT_EQ(static_cast<Int>(f.size()), q.abs_det()) << name;
        // pairwise incongruent mod Q Z^d
        EXPECT_NO_THROW(Transversal(q, f)) << name;
    }
    EXPECT_EQ(fundamental_digits(ExpansionMap(IntMatrix::scalar(1, 3))), (std::vector<IntVec>{{0}, {1}, {2}}));
}

TEST(Collar, FirstNonAdmissibleExample) {
    LssSpec spec = fixture("nonadmissible1");
    EXPECT_FALSE(is_nicely_growing(spec, 1));
    EXPECT_TRUE(is_nicely_growing(spec, 2));
    CollaredSystem c = admissibilize(spec, 2);
    EXPECT_EQ(c.clusters.classes.size(), 8u);
    EXPECT_EQ(c.spec.colors(), 8);
    Verdict v = analyze_coincidence(c.spec, {}).verdict;
    EXPECT_EQ(v.status, verdict_of(fixture("nonadmissible1-equivalent")));
    EXPECT_EQ(v.status, Status::Coincident);
    EXPECT_EQ(v.min_k, 2);
    EXPECT_EQ(transfer_verdict(v).result, Transfer::ModelSets);
}

TEST(Collar, FirstExampleFiveLetterWords) {
    // R = 2 clusters are five-letter words of the fixed point
    ClusterCensus cc = enumerate_clusters(fixture("nonadmissible1"), 2);
    std::set<std::vector<Color>> words;
    for (auto& k : cc.classes) {
        EXPECT_EQ(k.colors.size(), 5u);
        EXPECT_EQ(k.colors[2], k.center);
        words.insert(k.colors);
    }
    EXPECT_EQ(words.size(), 8u);
    // every window of a long patch is one of them
    auto patch = source_patch(fixture("nonadmissible1"), 7);
    for (auto& [x, c] : patch) {
        std::vector<Color> w;
        for (Int o = -2; o <= 2; ++o) {
            auto it = patch.find({x[0] + o});
            if (it == patch.end()) break;
            w.push_back(it->second);
        }
        if (w.size() == 5) EXPECT_TRUE(words.count(w)) << x[0];
    }
}

TEST(Collar, SecondNonAdmissibleExample) {
    LssSpec spec = fixture("nonadmissible2");
    CollarSearch s = search_collar(spec);
    ASSERT_TRUE(s.system.has_value());
    EXPECT_EQ(s.system->clusters.radius, 4);
    EXPECT_EQ(s.system->clusters.classes.size(), 72u);
    ASSERT_EQ(s.attempts.size(), 3u);
    EXPECT_NE(s.attempts[0].second.find("substitutes differently"), std::string::npos);
    EXPECT_EQ(transfer_verdict(analyze_coincidence(s.system->spec, {}).verdict).result, Transfer::ModelSets);

    CollaredSystem r8 = admissibilize(spec, 8);
    EXPECT_EQ(r8.clusters.classes.size(), 130u);
    Verdict v = analyze_coincidence(r8.spec, {}).verdict;
    EXPECT_EQ(v.status, Status::Coincident);
    EXPECT_EQ(v.min_k, 2);

    Verdict eq = analyze_coincidence(fixture("nonadmissible2-equivalent"), {}).verdict;
    EXPECT_EQ(eq.status, Status::Coincident);
    EXPECT_EQ(eq.min_k, 2);
}

TEST(Collar, GrowthAgreesWithPatchOracle) {
    struct Case {
        const char* name;
        Int radius;
        int depth;
    };
    for (auto c : {Case{"nonadmissible1", 1, 7}, Case{"nonadmissible1", 2, 7}, Case{"nonadmissible2", 4, 6},
                   Case{"nonadmissible2", 8, 6}, Case{"thue-morse", 0, 9}, Case{"kolakoski24", 1, 7},
                   Case{"chair", 1, 5}, Case{"table", 1, 5}}) {
        LssSpec spec = fixture(c.name);
        EXPECT_EQ(is_nicely_growing(spec, c.radius), nicely_growing_oracle(spec, c.radius, c.depth))
            << c.name << " R=" << c.radius;
    }
}

TEST(Collar, OutputIsAdmissibleAndPrimitive) {
    for (auto [name, radius] : std::vector<std::pair<std::string, Int>>{
             {"nonadmissible1", 2}, {"nonadmissible2", 4}, {"chair", 1}, {"kolakoski24", 1}}) {
        CollaredSystem c = admissibilize(fixture(name), radius);
        EXPECT_TRUE(is_admissible(c.spec.source).admissible) << name;
        EXPECT_TRUE(is_primitive(c.spec.source)) << name;
        EXPECT_EQ(c.color_map.size(), c.clusters.classes.size());
        EXPECT_EQ(c.spec.source.expansion().matrix(), fixture(name).source.expansion().matrix());
    }
}

TEST(Collar, RefinementAtPatchScale) {
    for (auto [name, radius] : std::vector<std::pair<std::string, Int>>{
             {"nonadmissible1", 2}, {"nonadmissible2", 4}, {"chair", 1}, {"thue-morse", 1}}) {
        CollaredSystem c = admissibilize(fixture(name), radius);
        EXPECT_GT(check_refinement(c, 4), 0u) << name;
    }
}

// Forgetting the collar commutes with substitution: on a whole collared
// patch, mapping back and substituting with the original rules colors every
// shared point like substituting first and mapping afterwards.  The collared
// rules place children by the fundamental digits, so a point may come from a
// different parent in the two images.
TEST(Collar, ForgetfulMapCommutesWithSubstitution) {
    for (auto [name, radius] : std::vector<std::pair<std::string, Int>>{
             {"nonadmissible1", 2}, {"nonadmissible2", 4}, {"chair", 1}}) {
        LssSpec orig = fixture(name);
        CollaredSystem c = admissibilize(orig, radius);
        const ExpansionMap& q = orig.source.expansion();
        auto patch = source_patch(c.spec, 3);
        std::map<IntVec, Color> collared_image, original_image;
        for (auto& [x, k] : patch) {
            IntVec qx = q.apply(x);
            for (Color i = 0; i < c.spec.colors(); ++i)
                for (auto& a : c.spec.source.at(i, k)) {
                    auto [it, fresh] = collared_image.emplace(add(qx, a), c.color_map[i]);
                    ASSERT_TRUE(fresh) << name;
                }
            for (Color i = 0; i < orig.colors(); ++i)
                for (auto& a : orig.source.at(i, c.color_map[k])) {
                    auto [it, fresh] = original_image.emplace(add(qx, a), i);
                    ASSERT_EQ(it->second, i) << name << " overlap at " << format_vec(it->first);
                }
        }
        std::size_t shared = 0;
        for (auto& [y, i] : collared_image) {
            auto it = original_image.find(y);
            if (it == original_image.end()) continue;
            ++shared;
            EXPECT_EQ(it->second, i) << name << " " << format_vec(y);
        }
        EXPECT_GT(shared, collared_image.size() / 2) << name;
    }
}

TEST(Collar, AdmissibleInputsKeepTheirVerdict) {
    struct Case {
        const char* name;
        Int radius;
        std::size_t classes;
    };
    for (auto c : {Case{"chair", 1, 24}, Case{"table", 1, 60}, Case{"thue-morse", 0, 2}, Case{"thue-morse", 1, 6},
                   Case{"kolakoski24", 1, 7}}) {
        LssSpec spec = fixture(c.name);
        CollaredSystem col = admissibilize(spec, c.radius);
        EXPECT_EQ(col.clusters.classes.size(), c.classes) << c.name;
        EXPECT_EQ(verdict_of(col.spec), verdict_of(spec)) << c.name;
    }
}

TEST(Collar, TransferIsOneDirectional) {
    Verdict yes;
    yes.status = Status::Coincident;
    yes.min_k = 1;
    Verdict no;
    no.status = Status::NotCoincident;
    EXPECT_EQ(transfer_verdict(yes).result, Transfer::ModelSets);
    TransferFinding f = transfer_verdict(no);
    EXPECT_EQ(f.result, Transfer::Inconclusive);
    EXPECT_NE(f.message.find("undecided"), std::string::npos);
}

TEST(Collar, Errors) {
    LssSpec spec = fixture("nonadmissible1");
    EXPECT_THROW(enumerate_clusters(spec, -1), Error);
    try {
        admissibilize(spec, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotNicelyGrowing);
    }
    CollarOptions tiny;
    tiny.max_classes = 3;
    try {
        enumerate_clusters(fixture("table"), 1, tiny);
        FAIL();
    } catch (const Error& e) {
        EXPECT_TRUE(e.is_budget());
    }
    // more classes than colors are supported
    try {
        admissibilize(fixture("table"), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    }
}
