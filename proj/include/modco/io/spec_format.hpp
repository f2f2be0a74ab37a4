#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modco/mfs.hpp"

namespace modco {

// Parsed input file.  Shorthand forms (sub, block) are expanded into the
// general rule table while parsing, so a document always holds explicit
// translation sets and render() writes the general form.
struct SpecDocument {
    std::string name;
    int dim = 0;
    IntMatrix expansion;
    std::vector<std::string> colors;
    RuleTable rules;
    std::optional<std::pair<Color, IntVec>> seed;
    std::map<std::string, std::string> options;

    bool operator==(const SpecDocument& o) const {
        return name == o.name && dim == o.dim && expansion == o.expansion && colors == o.colors &&
               rules == o.rules && seed == o.seed && options == o.options;
    }

    Color color_index(const std::string& c) const {
        for (std::size_t i = 0; i < colors.size(); ++i)
            if (colors[i] == c) return static_cast<Color>(i);
        return -1;
    }
};

inline const std::set<std::string>& spec_keywords() {
    static const std::set<std::string> k{"name", "dim", "expansion", "colors", "rule", "sub", "block", "seed", "option"};
    return k;
}

inline const std::set<std::string>& known_options() {
    static const std::set<std::string> k{"max_depth", "collar", "direct_check", "max_states"};
    return k;
}

namespace detail {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    Int value = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : s_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t{Tok::End, "", 0, line_, col_};
            if (i_ >= s_.size()) {
                out.push_back(t);
                return out;
            }
            char c = s_[i_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t b = i_;
                while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
                    advance();
                t.kind = Tok::Ident;
                t.text = s_.substr(b, i_ - b);
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
                std::size_t b = i_;
                advance();
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) advance();
                t.kind = Tok::Int;
                t.text = s_.substr(b, i_ - b);
                try {
                    t.value = std::stoll(t.text);
                } catch (const std::exception&) {
                    throw ParseError(ErrorKind::SyntaxError, t.line, t.col, "integer literal out of range");
                }
            } else if (c == '"') {
                advance();
                std::size_t b = i_;
                while (i_ < s_.size() && s_[i_] != '"' && s_[i_] != '\n') advance();
                if (i_ >= s_.size() || s_[i_] != '"')
                    throw ParseError(ErrorKind::SyntaxError, t.line, t.col, "unterminated string");
                t.kind = Tok::String;
                t.text = s_.substr(b, i_ - b);
                advance();
            } else if ((c == '<' && peek(1) == '-') || (c == '-' && peek(1) == '>')) {
                t.kind = Tok::Punct;
                t.text = s_.substr(i_, 2);
                advance();
                advance();
            } else if (std::string("()[]{},/@;").find(c) != std::string::npos) {
                t.kind = Tok::Punct;
                t.text = std::string(1, c);
                advance();
            } else {
                throw ParseError(ErrorKind::SyntaxError, t.line, t.col, std::string("unexpected character '") + c + "'");
            }
            out.push_back(t);
        }
    }

private:
    char peek(std::size_t k) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }

    void advance() {
        if (s_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skip_space() {
        while (i_ < s_.size()) {
            if (s_[i_] == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

    SpecDocument run() {
        while (cur().kind != Tok::End) statement();
        finish();
        return doc_;
    }

private:
    struct PendingRule {
        std::string target, source;
        IntVec translation;
        Token at;
    };

    const Token& cur() const { return toks_[pos_]; }

    [[noreturn]] void syntax(const Token& t, const std::string& msg) const {
        throw ParseError(ErrorKind::SyntaxError, t.line, t.col, msg);
    }

    [[noreturn]] void semantic(const Token& t, const std::string& msg) const {
        throw ParseError(ErrorKind::SemanticError, t.line, t.col, msg);
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::String: return "string \"" + t.text + "\"";
        default: return "'" + t.text + "'";
        }
    }

    Token take() { return toks_[pos_++]; }

    bool at_punct(const char* p) const { return cur().kind == Tok::Punct && cur().text == p; }

    Token expect_punct(const char* p) {
        if (!at_punct(p)) syntax(cur(), std::string("expected '") + p + "' but found " + describe(cur()));
        return take();
    }

    Int expect_int() {
        if (cur().kind != Tok::Int) syntax(cur(), "expected an integer but found " + describe(cur()));
        return take().value;
    }

    // Color names are identifiers or unsigned integers ("0", "1", ...).
    Token expect_name() {
        if (cur().kind == Tok::Int && cur().text[0] != '-') return take();
        if (cur().kind != Tok::Ident) syntax(cur(), "expected a color name but found " + describe(cur()));
        if (spec_keywords().count(cur().text)) syntax(cur(), "keyword '" + cur().text + "' cannot be a color name");
        return take();
    }

    bool at_name() const {
        if (cur().kind == Tok::Int) return cur().text[0] != '-';
        return cur().kind == Tok::Ident && !spec_keywords().count(cur().text);
    }

    // integer, or parenthesized tuple
    IntVec vector_literal() {
        if (cur().kind == Tok::Int) return {take().value};
        expect_punct("(");
        IntVec v{expect_int()};
        while (at_punct(",")) {
            take();
            v.push_back(expect_int());
        }
        expect_punct(")");
        return v;
    }

    bool at_vector() const { return cur().kind == Tok::Int || at_punct("("); }

    IntMatrix matrix_literal() {
        std::vector<IntVec> rows;
        expect_punct("[");
        do {
            if (at_punct(",")) take();
            expect_punct("[");
            IntVec r{expect_int()};
            while (at_punct(",")) {
                take();
                r.push_back(expect_int());
            }
            expect_punct("]");
            rows.push_back(r);
        } while (at_punct(","));
        expect_punct("]");
        for (auto& r : rows)
            if (r.size() != rows.size()) semantic(last_, "expansion matrix must be square");
        return IntMatrix::from_rows(rows);
    }

    void statement() {
        Token kw = cur();
        if (kw.kind != Tok::Ident || !spec_keywords().count(kw.text))
            syntax(kw, "expected a statement keyword but found " + describe(kw));
        take();
        last_ = kw;
        if (kw.text == "name") {
            if (cur().kind != Tok::String && cur().kind != Tok::Ident) syntax(cur(), "expected a name");
            doc_.name = take().text;
        } else if (kw.text == "dim") {
            Int d = expect_int();
            if (d < 1 || d > 8) semantic(kw, "dimension must be between 1 and 8");
            if (doc_.dim && doc_.dim != d) semantic(kw, "dimension given twice");
            doc_.dim = static_cast<int>(d);
        } else if (kw.text == "expansion") {
            if (has_q_) semantic(kw, "expansion given twice");
            if (cur().kind == Tok::Int) {
                scalar_q_ = take().value;
            } else {
                doc_.expansion = matrix_literal();
            }
            has_q_ = true;
            q_at_ = kw;
        } else if (kw.text == "colors") {
            if (!doc_.colors.empty()) semantic(kw, "colors declared twice");
            while (at_name()) {
                Token t = take();
                if (doc_.color_index(t.text) >= 0) semantic(t, "duplicate color '" + t.text + "'");
                doc_.colors.push_back(t.text);
            }
            if (doc_.colors.empty()) syntax(cur(), "expected at least one color name");
            declared_colors_ = true;
        } else if (kw.text == "rule") {
            if (shorthand_) semantic(kw, "rule statements cannot be mixed with a sub or block section");
            general_ = true;
            Token target = expect_name();
            expect_punct("<-");
            Token source = expect_name();
            expect_punct("@");
            if (!at_vector()) syntax(cur(), "expected a translation");
            do {
                if (at_punct(",")) take();
                Token at = cur();
                pending_.push_back({target.text, source.text, vector_literal(), at});
            } while (at_vector() || at_punct(","));
        } else if (kw.text == "sub") {
            shorthand(kw, 0);
        } else if (kw.text == "block") {
            expect_punct("(");
            Int n = expect_int();
            if (n < 2) semantic(kw, "block size must be at least 2");
            expect_punct(")");
            shorthand(kw, n);
        } else if (kw.text == "seed") {
            Token c = expect_name();
            expect_punct("@");
            Token at = cur();
            seed_ = {c, vector_literal()};
            seed_at_ = at;
        } else if (kw.text == "option") {
            if (cur().kind != Tok::Ident) syntax(cur(), "expected an option name");
            Token n = take();
            if (!known_options().count(n.text)) semantic(n, "unknown option '" + n.text + "'");
            if (cur().kind != Tok::Int && cur().kind != Tok::Ident && cur().kind != Tok::String)
                syntax(cur(), "expected an option value");
            doc_.options[n.text] = take().text;
        }
    }

    // sub { a -> "aba" ... } or block(n) { p -> [s p / p q] ... }
    void shorthand(const Token& kw, Int block) {
        if (general_) semantic(kw, "a sub or block section cannot be mixed with rule statements");
        if (shorthand_) semantic(kw, "only one sub or block section is allowed");
        shorthand_ = true;
        const int d = block ? 2 : 1;
        if (doc_.dim && doc_.dim != d) semantic(kw, "this section requires dimension " + std::to_string(d));
        doc_.dim = d;
        expect_punct("{");
        std::size_t length = 0;
        std::vector<std::string> heads;
        while (!at_punct("}")) {
            Token head = expect_name();
            for (auto& h : heads)
                if (h == head.text) semantic(head, "letter '" + head.text + "' has two rules");
            heads.push_back(head.text);
            expect_punct("->");
            if (block) {
                Token open = expect_punct("[");
                std::vector<std::vector<Token>> rows(1);
                while (!at_punct("]")) {
                    if (at_punct("/")) {
                        take();
                        rows.emplace_back();
                    } else {
                        rows.back().push_back(expect_name());
                    }
                }
                take();
                if (static_cast<Int>(rows.size()) != block) semantic(open, "block needs " + std::to_string(block) + " rows");
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (static_cast<Int>(rows[r].size()) != block)
                        semantic(open, "block row " + std::to_string(r + 1) + " needs " + std::to_string(block) + " cells");
                    Int y = block - 1 - static_cast<Int>(r);  // first row is the top
                    for (std::size_t x = 0; x < rows[r].size(); ++x)
                        pending_.push_back({rows[r][x].text, head.text, {static_cast<Int>(x), y}, rows[r][x]});
                }
            } else {
                std::vector<Token> word;
                Token start = cur();
                if (cur().kind == Tok::String) {
                    Token s = take();
                    for (std::size_t k = 0; k < s.text.size(); ++k) {
                        Token t = s;
                        t.text = std::string(1, s.text[k]);
                        t.col = s.col + 1 + static_cast<int>(k);
                        word.push_back(t);
                    }
                } else {
                    expect_punct("[");
                    while (!at_punct("]")) word.push_back(expect_name());
                    take();
                }
                if (word.empty()) semantic(start, "empty word");
                if (length && word.size() != length)
                    semantic(start, "word length " + std::to_string(word.size()) + " differs from " + std::to_string(length));
                length = word.size();
                for (std::size_t p = 0; p < word.size(); ++p)
                    pending_.push_back({word[p].text, head.text, {static_cast<Int>(p)}, word[p]});
            }
        }
        take();
        if (heads.empty()) semantic(kw, "empty section");
        if (!declared_colors_) implicit_colors_ = heads;
        Int q = block ? block : static_cast<Int>(length);
        IntMatrix implied = IntMatrix::scalar(d, q);
        if (has_q_ && !scalar_q_ && !(doc_.expansion == implied))
            semantic(kw, "expansion does not match the section's scale " + std::to_string(q));
        if (has_q_ && scalar_q_ && *scalar_q_ != q)
            semantic(kw, "expansion does not match the section's scale " + std::to_string(q));
        doc_.expansion = implied;
        scalar_q_.reset();
        has_q_ = true;
    }

    void finish() {
        Token end = cur();
        if (!doc_.dim) {
            if (has_q_ && !scalar_q_) doc_.dim = doc_.expansion.rows();
            else doc_.dim = 1;
        }
        if (!has_q_) semantic(end, "missing expansion");
        if (scalar_q_) doc_.expansion = IntMatrix::scalar(doc_.dim, *scalar_q_);
        if (doc_.expansion.rows() != doc_.dim) semantic(q_at_, "expansion matrix does not match the dimension");
        if (!declared_colors_) {
            doc_.colors = implicit_colors_;
            // letters that only occur inside words come after the rule heads
            for (auto& r : pending_)
                if (doc_.color_index(r.target) < 0) doc_.colors.push_back(r.target);
        }
        if (doc_.colors.empty()) semantic(end, "no colors declared");
        const int m = static_cast<int>(doc_.colors.size());
        doc_.rules = Mfs::empty_rules(m);
        for (auto& r : pending_) {
            Color i = doc_.color_index(r.target), j = doc_.color_index(r.source);
            if (i < 0) semantic(r.at, "unknown color '" + r.target + "'");
            if (j < 0) semantic(r.at, "unknown color '" + r.source + "'");
            if (static_cast<int>(r.translation.size()) != doc_.dim)
                semantic(r.at, "translation " + format_vec(r.translation) + " does not have dimension " + std::to_string(doc_.dim));
            auto& cell = doc_.rules[i][j];
            if (std::find(cell.begin(), cell.end(), r.translation) != cell.end())
                semantic(r.at, "duplicate translation " + format_vec(r.translation) + " in rule " + r.target + " <- " + r.source);
            cell.push_back(r.translation);
        }
        for (auto& row : doc_.rules)
            for (auto& cell : row) std::sort(cell.begin(), cell.end());
        if (seed_) {
            Color c = doc_.color_index(seed_->first.text);
            if (c < 0) semantic(seed_->first, "unknown color '" + seed_->first.text + "'");
            if (static_cast<int>(seed_->second.size()) != doc_.dim) semantic(seed_at_, "seed position has the wrong dimension");
            doc_.seed = std::make_pair(c, seed_->second);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Token last_{Tok::End, "", 0, 1, 1};
    SpecDocument doc_;
    bool has_q_ = false;
    std::optional<Int> scalar_q_;
    Token q_at_{Tok::End, "", 0, 1, 1};
    bool declared_colors_ = false;
    bool general_ = false;
    bool shorthand_ = false;
    std::vector<std::string> implicit_colors_;
    std::vector<PendingRule> pending_;
    std::optional<std::pair<Token, IntVec>> seed_;
    Token seed_at_{Tok::End, "", 0, 1, 1};
};

inline bool plain_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    return !spec_keywords().count(s);
}

}  // namespace detail

inline SpecDocument parse_spec(const std::string& text) { return detail::Parser(text).run(); }

inline std::string render_vector(const IntVec& v) {
    if (v.size() == 1) return std::to_string(v[0]);
    return format_vec(v);
}

inline std::string render_spec(const SpecDocument& doc) {
    std::ostringstream out;
    if (!doc.name.empty()) out << "name \"" << doc.name << "\"\n";
    out << "dim " << doc.dim << "\n";
    out << "expansion " << doc.expansion.to_string() << "\n";
    out << "colors";
    for (auto& c : doc.colors) out << " " << c;
    out << "\n";
    for (std::size_t i = 0; i < doc.rules.size(); ++i)
        for (std::size_t j = 0; j < doc.rules[i].size(); ++j) {
            if (doc.rules[i][j].empty()) continue;
            out << "rule " << doc.colors[i] << " <- " << doc.colors[j] << " @";
            for (auto& a : doc.rules[i][j]) out << " " << render_vector(a);
            out << "\n";
        }
    if (doc.seed) out << "seed " << doc.colors[doc.seed->first] << " @ " << render_vector(doc.seed->second) << "\n";
    for (auto& [k, v] : doc.options) {
        out << "option " << k << " ";
        if (detail::plain_identifier(v) || (!v.empty() && (std::isdigit(static_cast<unsigned char>(v[0])) || v[0] == '-')))
            out << v << "\n";
        else
            out << "\"" << v << "\"\n";
    }
    return out.str();
}

inline Mfs to_mfs(const SpecDocument& doc) {
    return Mfs(ExpansionMap(doc.expansion), doc.rules);
}

// Normalized system with a legal seed at the origin.
inline LssSpec to_lss(const SpecDocument& doc, std::size_t budget = kDefaultComposeBudget) {
    Mfs phi = to_mfs(doc);
    if (doc.seed) return with_seed(phi, doc.colors, doc.seed->first, doc.seed->second, budget);
    return find_seed(phi, doc.colors, budget);
}

}  // namespace modco
