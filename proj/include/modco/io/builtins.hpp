#pragma once

#include <string>
#include <utility>
#include <vector>

#include "modco/io/spec_format.hpp"

namespace modco {

namespace detail {

struct BuiltinEntry {
    const char* name;
    const char* summary;
    const char* text;
};

inline const std::vector<BuiltinEntry>& builtin_table() {
    static const std::vector<BuiltinEntry> table{
        {"periodic1", "periodic sequence a,b,c -> abcacb",
         R"(name "periodic1"
sub { a -> "abcacb"  b -> "abcacb"  c -> "abcacb" }
)"},
        {"abab", "periodic sequence a,b -> ab",
         R"(name "abab"
sub { a -> "ab"  b -> "ab" }
)"},
        {"thue-morse", "Thue-Morse a->ab, b->ba",
         R"(name "thue-morse"
sub { a -> "ab"  b -> "ba" }
)"},
        {"kolakoski24", "Kolakoski-(2,4) as a 3-letter substitution",
         R"(name "kolakoski24"
sub { a -> "aba"  b -> "bcc"  c -> "abc" }
)"},
        {"nonadmissible1", "non-admissible system with maps 3x+i, including a gap",
         R"(name "nonadmissible1"
expansion 3
colors a b c
rule a <- a @ 0
rule a <- b @ 1
rule a <- c @ 2
rule b <- a @ 1 5
rule b <- b @ 0
rule b <- c @ 1 5
rule c <- a @ 2
rule c <- c @ 0
)"},
        {"nonadmissible1-equivalent", "admissible a->abc, b->bab, c->cba",
         R"(name "nonadmissible1-equivalent"
sub { a -> "abc"  b -> "bab"  c -> "cba" }
)"},
        {"nonadmissible2", "non-admissible system with maps 4x+i and large shifts",
         R"(name "nonadmissible2"
expansion 4
colors a b c d
rule a <- a @ 15
rule a <- b @ 15
rule a <- d @ 15
rule b <- a @ 14
rule b <- b @ 13
rule b <- c @ 12
rule b <- d @ 13 14
rule c <- a @ 13
rule c <- b @ 14
rule c <- c @ 13 14 15
rule d <- a @ 0 12
rule d <- b @ 12
)"},
        {"nonadmissible2-equivalent", "admissible a->dcba, b->dbca, c->cccb, d->dbba",
         R"(name "nonadmissible2-equivalent"
sub { a -> "dcba"  b -> "dbca"  c -> "cccb"  d -> "dbba" }
)"},
        {"chair", "chair tiling as a 4-color block substitution",
         R"(name "chair"
block(2) {
  p -> [s p / p q]
  q -> [q r / p q]
  r -> [s r / r q]
  s -> [s r / p s]
}
)"},
        {"table", "table tiling as a 4-color block substitution",
         R"(name "table"
block(2) {
  p -> [s p / q p]
  q -> [q q / p r]
  r -> [r s / r q]
  s -> [p r / s s]
}
)"},
        {"paperfolding", "paperfolding sequence a->ab, b->cb, c->ad, d->cd",
         R"(name "paperfolding"
sub { a -> "ab"  b -> "cb"  c -> "ad"  d -> "cd" }
)"},
        {"height2", "height 2 substitution 0->010, 1->102, 2->201",
         R"(name "height2"
sub { 0 -> "010"  1 -> "102"  2 -> "201" }
)"},
        {"house", "20-class induced substitution of the house tiling",
         R"(name "house"
colors a b c d e f g h i k a' b' c' d' e' f' g' h' i' k'
block(2) {
  a -> [i' e / a a']     a' -> [e' i / a a']
  b -> [i' b / f b']     b' -> [f' b / k b']
  c -> [c' g / c k']     c' -> [c' i / c g']
  d -> [d' d / h k']     d' -> [d' d / k h']
  e -> [i' e / e a']     e' -> [e' i / a e']
  f -> [i' f / f b']     f' -> [f' b / k f']
  g -> [c' g / g k']     g' -> [g' i / c g']
  h -> [d' h / h k']     h' -> [h' d / k h']
  i -> [c' i / i a']     i' -> [i' b / a i']
  k -> [d' k / k b']     k' -> [k' d / c k']
}
)"},
    };
    return table;
}

}  // namespace detail

// 1 -> 1 2, 2 -> 2 3, ..., m -> 1 1 on letters named 1..m.
inline SpecDocument worst_case_document(int m) {
    if (m < 2) throw Error(ErrorKind::InvalidInput, "the worst-case family needs m >= 2");
    std::string text = "name \"worst(" + std::to_string(m) + ")\"\nsub {\n";
    for (int i = 1; i < m; ++i)
        text += "  " + std::to_string(i) + " -> [" + std::to_string(i) + " " + std::to_string(i + 1) + "]\n";
    text += "  " + std::to_string(m) + " -> [1 1]\n}\n";
    return parse_spec(text);
}

inline std::vector<std::pair<std::string, std::string>> list_builtins() {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto& e : detail::builtin_table()) out.push_back({e.name, e.summary});
    out.push_back({"worst:M", "worst-case family 1->12, 2->23, ..., M->11 (M >= 2)"});
    return out;
}

// "chair", "worst:5", ...
inline SpecDocument builtin(const std::string& name) {
    if (name.rfind("worst", 0) == 0) {
        std::string rest = name.substr(5);
        if (rest.empty()) return worst_case_document(3);
        if (rest[0] == ':' || rest[0] == '(') {
            std::string digits;
            for (char c : rest.substr(1))
                if (c != ')') digits += c;
            try {
                std::size_t used = 0;
                int m = std::stoi(digits, &used);
                if (used == digits.size()) return worst_case_document(m);
            } catch (const std::exception&) {
            }
        }
        throw Error(ErrorKind::UnknownName, "unknown builtin '" + name + "' (use worst:M)");
    }
    for (auto& e : detail::builtin_table())
        if (name == e.name) return parse_spec(e.text);
    throw Error(ErrorKind::UnknownName, "unknown builtin '" + name + "'");
}

}  // namespace modco
