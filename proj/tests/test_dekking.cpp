#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace modco;

namespace {

ConstantLengthSub sub_of(const std::string& name) {
    SpecDocument d = builtin(name);
    return as_constant_length(to_mfs(d), d.colors);
}

bool modular_verdict(const Mfs& phi) {
    LssSpec spec = find_seed(phi);
    return analyze_coincidence(spec, {}).verdict.status == Status::Coincident;
}

const std::vector<std::string> kOneDimensional{"periodic1", "abab", "thue-morse", "kolakoski24", "paperfolding",
                                               "height2", "nonadmissible1-equivalent", "nonadmissible2-equivalent",
                                               "worst:2", "worst:3", "worst:4", "worst:5", "worst:6"};

}  // namespace

TEST(ConstantLength, Conversion) {
    ConstantLengthSub k = sub_of("kolakoski24");
    EXPECT_EQ(k.q, 3);
    EXPECT_EQ(k.word_string(0), "aba");
    EXPECT_EQ(k.word_string(1), "bcc");
    EXPECT_EQ(k.word_string(2), "abc");
    EXPECT_THROW(sub_of("chair"), Error);
    EXPECT_THROW(sub_of("nonadmissible1"), Error);
    // translations 1 and 2 with q = 2 are not 0..q-1
    RuleTable r = Mfs::empty_rules(2);
    r[0][0] = {{1}};
    r[1][0] = {{2}};
    r[0][1] = {{2}};
    r[1][1] = {{1}};
    EXPECT_THROW(as_constant_length(Mfs(ExpansionMap(IntMatrix::scalar(1, 2)), r)), Error);
}

TEST(Height, PrimeFactors) {
    EXPECT_EQ(prime_factors(12), (std::vector<Int>{2, 3}));
    EXPECT_EQ(prime_factors(7), (std::vector<Int>{7}));
    EXPECT_TRUE(prime_factors(1).empty());
}

TEST(Height, Paperfolding) {
    HeightData h = height(sub_of("paperfolding"));
    EXPECT_EQ(h.g, (std::vector<Int>{4, 2, 4, 2}));
    EXPECT_EQ(h.r, 2);
    EXPECT_EQ(h.h, 1);
}

TEST(Height, HeightTwo) {
    HeightData h = height(sub_of("height2"));
    EXPECT_EQ(h.r, 2);
    EXPECT_EQ(h.h, 2);
}

TEST(PureBase, HeightTwoExample) {
    ConstantLengthSub s = sub_of("height2");
    ConstantLengthSub p = pure_base(s, 2);
    ASSERT_EQ(p.letters(), 2);
    EXPECT_EQ(p.names, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(p.word_string(0), "aab");
    EXPECT_EQ(p.word_string(1), "aba");
    EXPECT_EQ(p.blocks, (std::vector<std::string>{"01", "02"}));
    EXPECT_EQ(height(p).h, 1);
}

TEST(PureBase, HeightOneIsIdentity) {
    ConstantLengthSub s = sub_of("thue-morse");
    ConstantLengthSub p = pure_base(s, 1);
    EXPECT_EQ(p.words, s.words);
}

TEST(Dekking, Paperfolding) {
    DekkingResult r = dekking_coincidence(sub_of("paperfolding"));
    EXPECT_TRUE(r.coincident);
    EXPECT_EQ(r.k, 2);
    ASSERT_TRUE(r.j.has_value());
    // sigma^2 maps every letter to a word with the same symbol at position j
    ConstantLengthSub s = sub_of("paperfolding");
    Mfs p2 = power(s.mfs(), 2);
    ConstantLengthSub s2 = as_constant_length(p2);
    for (Color c = 1; c < s2.letters(); ++c) EXPECT_EQ(s2.words[c][*r.j], s2.words[0][*r.j]);
}

TEST(Dekking, ThueMorseHasNone) {
    DekkingResult r = dekking_coincidence(sub_of("thue-morse"));
    EXPECT_FALSE(r.coincident);
    EXPECT_EQ(r.substitution_graph_size, 2u);
}

TEST(Dekking, KolakoskiPosition) {
    DekkingResult r = dekking_coincidence(sub_of("kolakoski24"));
    EXPECT_TRUE(r.coincident);
    EXPECT_EQ(r.k, 2);
    EXPECT_EQ(r.j, 5);
    EXPECT_EQ(r.digits, (std::vector<std::size_t>{1, 2}));
}

TEST(Dekking, AgreesWithModularVerdictOnFixtures) {
    for (auto& name : kOneDimensional) {
        SpecDocument d = builtin(name);
        Mfs phi = to_mfs(d);
        EXPECT_EQ(dekking_coincidence(as_constant_length(phi, d.colors)).coincident, modular_verdict(phi)) << name;
    }
}

TEST(Dekking, HeightInvariantsOnFixtures) {
    for (auto& name : kOneDimensional) {
        ConstantLengthSub s = sub_of(name);
        HeightData h = height(s);
        EXPECT_EQ(std::gcd(h.h, static_cast<Int>(s.q)), 1) << name;
        EXPECT_EQ(h.r % h.h, 0) << name;
        EXPECT_EQ(height(pure_base(s, h.h)).h, 1) << name;
    }
}

// Checks one random system; false when it is skipped.
static bool random_case(const std::vector<std::vector<Color>>& words, int& tall) {
    Mfs phi = from_words(words);
    if (!is_primitive(phi)) return false;
    ConstantLengthSub s = as_constant_length(phi);
    DekkingResult r;
    bool modular = false;
    try {
        r = dekking_coincidence(s);
        modular = modular_verdict(phi);
    } catch (const Error& e) {
        return false;
    }
    if (r.height_data.h > 1) ++tall;
    EXPECT_EQ(r.coincident, modular) << format_words(words);
    EXPECT_EQ(std::gcd(r.height_data.h, static_cast<Int>(s.q)), 1);
    EXPECT_EQ(r.height_data.r % r.height_data.h, 0);
    EXPECT_EQ(height(r.pure).h, 1) << format_words(words);
    return true;
}

// Random primitive constant-length substitutions on up to 4 letters.
TEST(Dekking, RandomAgreement) {
    std::mt19937_64 rng(3);
    int done = 0, tall = 0;
    for (int tries = 0; tries < 5000 && done < 150; ++tries) {
        int m = std::uniform_int_distribution<int>(2, 4)(rng);
        int q = std::uniform_int_distribution<int>(2, 4)(rng);
        std::uniform_int_distribution<Color> letter(0, m - 1);
        std::vector<std::vector<Color>> words(m, std::vector<Color>(q));
        for (auto& w : words)
            for (auto& c : w) c = letter(rng);
        done += random_case(words, tall);
    }
    EXPECT_GE(done, 150);
}

// Odd length and two letter classes that alternate along every word, so the
// fixed point alternates too and the height is even.
TEST(Dekking, RandomAlternatingAgreement) {
    std::mt19937_64 rng(4);
    int done = 0, tall = 0;
    for (int tries = 0; tries < 5000 && done < 60; ++tries) {
        int m = std::uniform_int_distribution<int>(3, 4)(rng);
        int q = std::uniform_int_distribution<int>(1, 2)(rng) * 2 + 1;
        int split = std::uniform_int_distribution<int>(1, m - 1)(rng);  // class A is [0, split)
        std::vector<std::vector<Color>> words(m, std::vector<Color>(q));
        for (int j = 0; j < m; ++j)
            for (int z = 0; z < q; ++z) {
                bool in_a = (j < split) == (z % 2 == 0);
                words[j][z] = in_a ? std::uniform_int_distribution<Color>(0, split - 1)(rng)
                                   : std::uniform_int_distribution<Color>(split, m - 1)(rng);
            }
        done += random_case(words, tall);
    }
    EXPECT_GE(done, 60);
    EXPECT_EQ(tall, done);
}

TEST(Descriptor, Forms) {
    SpecDocument tm = builtin("thue-morse");
    EXPECT_EQ(internal_space_descriptor(sub_of("thue-morse")).to_string(), "Z_2 x C_1");
    EXPECT_EQ(internal_space_descriptor(sub_of("height2")).to_string(), "Z_3 x C_2");
    InternalSpaceDescriptor abab = internal_space_descriptor(sub_of("abab"));
    EXPECT_EQ(abab.note, "periodic; C_2 suffices");
    EXPECT_EQ(internal_space_descriptor(sub_of("kolakoski24")).note, "");
}
