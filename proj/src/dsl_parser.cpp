#include "causal/dsl.hpp"

#include "causal/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace causal {

namespace {

enum class Tok { Id, Number, String, Arrow, Tilde, LParen, RParen, LBracket, RBracket, LBrace, RBrace, Equals, Comma, End };

std::string_view describe(Tok t) {
    switch (t) {
        case Tok::Id: return "identifier";
        case Tok::Number: return "number";
        case Tok::String: return "string";
        case Tok::Arrow: return "'->'";
        case Tok::Tilde: return "'~>'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Equals: return "'='";
        case Tok::Comma: return "','";
        case Tok::End: return "end of input";
    }
    return "token";
}

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    SourceLocation where;
};

[[noreturn]] void syntax_error(SourceLocation where, const std::string& message) {
    throw ParseError(ErrorCode::SyntaxError, where, message);
}

[[noreturn]] void semantic_error(SourceLocation where, const std::string& message) {
    throw ParseError(ErrorCode::SemanticError, where, message);
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_blank();
        Token tok;
        tok.where = here();
        if (pos_ >= text_.size()) {
            tok.kind = Tok::End;
            tok.where = end_location();
            return tok;
        }
        char c = text_[pos_];
        auto single = [&](Tok kind) {
            tok.kind = kind;
            tok.text = std::string(1, c);
            advance();
            return tok;
        };
        switch (c) {
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case '[': return single(Tok::LBracket);
            case ']': return single(Tok::RBracket);
            case '{': return single(Tok::LBrace);
            case '}': return single(Tok::RBrace);
            case '=': return single(Tok::Equals);
            case ',': return single(Tok::Comma);
            default: break;
        }
        if (c == '~') {
            if (peek(1) != '>') syntax_error(tok.where, "expected '~>'");
            advance();
            advance();
            tok.kind = Tok::Tilde;
            tok.text = "~>";
            return tok;
        }
        if (c == '-' && peek(1) == '>') {
            advance();
            advance();
            tok.kind = Tok::Arrow;
            tok.text = "->";
            return tok;
        }
        if (c == '"') return string_literal(tok);
        if (is_digit(c) || c == '.' || c == '+' || c == '-') return number(tok);
        if (is_id_start(c)) {
            std::size_t begin = pos_;
            while (pos_ < text_.size() && (is_id_start(text_[pos_]) || is_digit(text_[pos_]))) advance();
            tok.kind = Tok::Id;
            tok.text = std::string(text_.substr(begin, pos_ - begin));
            return tok;
        }
        syntax_error(tok.where, std::string("unexpected character '") + c + "'");
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_id_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }

    char peek(std::size_t ahead) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

    SourceLocation here() const { return {line_, column_}; }

    // Points at the last character of the input so that every error location
    // lies inside the text.
    SourceLocation end_location() const {
        if (text_.empty()) return {1, 1};
        std::size_t line = 1;
        std::size_t column = 0;
        for (std::size_t i = 0; i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                if (i + 1 == text_.size()) break;
                ++line;
                column = 0;
            } else {
                ++column;
            }
        }
        return {line, std::max<std::size_t>(column, 1)};
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    Token string_literal(Token tok) {
        advance();
        std::string value;
        while (true) {
            if (pos_ >= text_.size()) syntax_error(tok.where, "unterminated string");
            char c = text_[pos_];
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                auto at = here();
                advance();
                if (pos_ >= text_.size()) syntax_error(tok.where, "unterminated string");
                char e = text_[pos_];
                if (e == 'n') value += '\n';
                else if (e == '"' || e == '\\') value += e;
                else syntax_error(at, std::string("unknown escape '\\") + e + "'");
                advance();
                continue;
            }
            value += c;
            advance();
        }
        tok.kind = Tok::String;
        tok.text = std::move(value);
        return tok;
    }

    Token number(Token tok) {
        std::size_t begin = pos_;
        if (text_[pos_] == '+' || text_[pos_] == '-') advance();
        std::size_t digits = 0;
        while (pos_ < text_.size() && is_digit(text_[pos_])) {
            advance();
            ++digits;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            advance();
            while (pos_ < text_.size() && is_digit(text_[pos_])) {
                advance();
                ++digits;
            }
        }
        if (digits == 0) syntax_error(tok.where, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            advance();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
            std::size_t exp_digits = 0;
            while (pos_ < text_.size() && is_digit(text_[pos_])) {
                advance();
                ++exp_digits;
            }
            if (exp_digits == 0) syntax_error(tok.where, "malformed exponent");
        }
        std::string_view raw = text_.substr(begin, pos_ - begin);
        tok.text = std::string(raw);
        if (!raw.empty() && raw.front() == '+') raw.remove_prefix(1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (ec != std::errc() || ptr != raw.data() + raw.size() || !std::isfinite(value)) {
            syntax_error(tok.where, "number out of range: " + tok.text);
        }
        tok.kind = Tok::Number;
        tok.number = value;
        return tok;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

struct Attrs {
    std::optional<std::string> label;
    std::optional<double> coef;
    SourceLocation coef_at;
};

struct NodeStmt {
    std::string name;
    std::optional<std::string> label;
    SourceLocation where;
};

struct EdgeStmt {
    Edge edge;
    Attrs attrs;
    SourceLocation where;
};

struct ModStmt {
    Moderation mod;
    Attrs attrs;
    SourceLocation where;
};

struct MarkerStmt {
    std::string kind;
    std::string name;
    SourceLocation where;
};

struct NoiseStmt {
    std::string name;
    double value;
    SourceLocation where;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { tok_ = lexer_.next(); }

    DagDocument run() {
        expect_keyword("dag");
        name_ = expect_id("document name");
        expect(Tok::LBrace);
        while (tok_.kind != Tok::RBrace) {
            if (tok_.kind == Tok::End) syntax_error(tok_.where, "expected '}' before end of input");
            statement();
        }
        shift();
        if (tok_.kind != Tok::End) syntax_error(tok_.where, "unexpected " + std::string(describe(tok_.kind)) + " after '}'");
        return resolve();
    }

private:
    Token shift() {
        Token t = std::move(tok_);
        tok_ = lexer_.next();
        return t;
    }

    Token expect(Tok kind) {
        if (tok_.kind != kind) {
            syntax_error(tok_.where, "expected " + std::string(describe(kind)) + ", found " + found());
        }
        return shift();
    }

    std::string found() const {
        if (tok_.kind == Tok::Id || tok_.kind == Tok::Number) return "'" + tok_.text + "'";
        return std::string(describe(tok_.kind));
    }

    void expect_keyword(std::string_view word) {
        if (tok_.kind != Tok::Id || tok_.text != word) {
            syntax_error(tok_.where, "expected '" + std::string(word) + "', found " + found());
        }
        shift();
    }

    std::string expect_id(std::string_view what) {
        if (tok_.kind != Tok::Id) {
            syntax_error(tok_.where, "expected " + std::string(what) + ", found " + found());
        }
        return shift().text;
    }

    // A node name that is not a reserved word.
    std::string node_name() {
        auto where = tok_.where;
        auto name = expect_id("node name");
        if (is_reserved_word(name)) syntax_error(where, "'" + name + "' is a reserved word");
        return name;
    }

    Attrs attrs(std::string_view owner, bool allow_coef) {
        Attrs out;
        if (tok_.kind != Tok::LBracket) return out;
        shift();
        std::set<std::string> seen;
        while (true) {
            auto key_at = tok_.where;
            auto key = expect_id("attribute key");
            if (!seen.insert(key).second) semantic_error(key_at, "attribute '" + key + "' given twice");
            expect(Tok::Equals);
            if (key == "label") {
                if (tok_.kind != Tok::String && tok_.kind != Tok::Id) {
                    syntax_error(tok_.where, "expected string for label, found " + found());
                }
                out.label = shift().text;
            } else if (key == "coef" && allow_coef) {
                out.coef_at = tok_.where;
                out.coef = expect(Tok::Number).number;
            } else {
                semantic_error(key_at, "unknown attribute '" + key + "' for " + std::string(owner));
            }
            if (tok_.kind == Tok::Comma) {
                shift();
                continue;
            }
            expect(Tok::RBracket);
            break;
        }
        return out;
    }

    void statement() {
        auto where = tok_.where;
        auto head = expect_id("statement");
        if (head == "exposure" || head == "outcome" || head == "adjusted" || head == "latent") {
            markers_.push_back({head, node_name(), where});
            return;
        }
        if (head == "noise") {
            auto name = node_name();
            auto value_at = tok_.where;
            double value = expect(Tok::Number).number;
            noise_.push_back({name, value, value_at});
            return;
        }
        if (head == "dag") syntax_error(where, "'dag' is a reserved word");
        if (tok_.kind == Tok::Arrow) {
            shift();
            auto to = node_name();
            edges_.push_back({{head, to}, attrs("edge", true), where});
            return;
        }
        if (tok_.kind == Tok::Tilde) {
            shift();
            expect(Tok::LParen);
            auto from = node_name();
            expect(Tok::Arrow);
            auto to = node_name();
            expect(Tok::RParen);
            mods_.push_back({{head, from, to}, attrs("moderation", true), where});
            return;
        }
        auto a = attrs("node", false);
        nodes_.push_back({head, a.label, where});
    }

    DagDocument resolve() {
        // Declarations, in first-appearance order.
        std::vector<NodeSpec> specs;
        std::map<std::string, std::size_t> slot;
        std::map<std::string, bool> labelled;
        auto declare = [&](const std::string& name) {
            if (slot.emplace(name, specs.size()).second) specs.push_back({name, false, std::nullopt});
            return slot[name];
        };
        for (const auto& n : nodes_) {
            auto i = declare(n.name);
            if (n.label) {
                if (labelled[n.name]) semantic_error(n.where, "label for '" + n.name + "' given twice");
                labelled[n.name] = true;
                specs[i].label = n.label;
            }
        }
        std::set<Edge> seen_edges;
        for (const auto& e : edges_) {
            if (e.edge.from == e.edge.to) semantic_error(e.where, "self-loop on '" + e.edge.from + "'");
            if (!seen_edges.insert(e.edge).second) {
                semantic_error(e.where, "duplicate edge " + e.edge.from + " -> " + e.edge.to);
            }
            declare(e.edge.from);
            declare(e.edge.to);
        }

        auto require = [&](const std::string& name, SourceLocation where, std::string_view what) {
            if (!slot.count(name)) semantic_error(where, std::string(what) + " references undeclared node '" + name + "'");
            return slot[name];
        };

        std::set<Moderation> seen_mods;
        for (const auto& m : mods_) {
            require(m.mod.moderator, m.where, "moderation");
            if (!seen_edges.count(m.mod.target())) {
                semantic_error(m.where, "moderation targets missing edge " + m.mod.target_from + " -> " + m.mod.target_to);
            }
            if (m.mod.moderator == m.mod.target_from || m.mod.moderator == m.mod.target_to) {
                semantic_error(m.where, "moderator '" + m.mod.moderator + "' is an endpoint of the edge it moderates");
            }
            if (!seen_mods.insert(m.mod).second) semantic_error(m.where, "duplicate moderation");
        }

        DagDocument doc;
        doc.name = name_;
        std::optional<SourceLocation> outcome_at;
        std::vector<std::pair<std::string, SourceLocation>> adjusted;
        for (const auto& mk : markers_) {
            auto i = require(mk.name, mk.where, mk.kind);
            if (mk.kind == "latent") {
                specs[i].latent = true;
            } else if (mk.kind == "exposure") {
                if (doc.exposure) semantic_error(mk.where, "exposure given twice");
                doc.exposure = mk.name;
            } else if (mk.kind == "outcome") {
                if (doc.outcome) semantic_error(mk.where, "outcome given twice");
                doc.outcome = mk.name;
                outcome_at = mk.where;
            } else {
                adjusted.emplace_back(mk.name, mk.where);
            }
        }
        if (doc.exposure && doc.outcome && *doc.exposure == *doc.outcome) {
            semantic_error(*outcome_at, "exposure and outcome are both '" + *doc.outcome + "'");
        }
        std::set<std::string> adjusted_names;
        for (const auto& [name, where] : adjusted) {
            if (name == doc.exposure || name == doc.outcome) {
                semantic_error(where, "adjusted set contains query endpoint '" + name + "'");
            }
            if (specs[slot[name]].latent) semantic_error(where, "cannot adjust for latent node '" + name + "'");
            adjusted_names.insert(name);
        }

        for (const auto& n : noise_) {
            require(n.name, n.where, "noise");
            if (!(n.value > 0.0)) semantic_error(n.where, "noise variance must be positive");
            if (!doc.noise.emplace(n.name, n.value).second) semantic_error(n.where, "noise for '" + n.name + "' given twice");
        }

        std::vector<Edge> edges;
        for (const auto& e : edges_) {
            edges.push_back(e.edge);
            if (e.attrs.coef) doc.coefficients[e.edge] = *e.attrs.coef;
            if (e.attrs.label) doc.edge_labels[e.edge] = *e.attrs.label;
        }
        std::vector<Moderation> mods;
        for (const auto& m : mods_) {
            mods.push_back(m.mod);
            if (m.attrs.coef) doc.moderation_coefficients[m.mod] = *m.attrs.coef;
            if (m.attrs.label) doc.moderation_labels[m.mod] = *m.attrs.label;
        }

        try {
            doc.dag = Dag::build(std::move(specs), std::move(edges), std::move(mods));
        } catch (const CycleError& err) {
            const auto& w = err.witness();
            SourceLocation where;
            for (const auto& e : edges_) {
                if (w.size() >= 2 && e.edge.from == w[0] && e.edge.to == w[1]) where = e.where;
            }
            semantic_error(where, err.what());
        } catch (const Error& err) {
            semantic_error(SourceLocation{}, err.what());
        }
        doc.adjusted = canonical_sort(doc.dag, {adjusted_names.begin(), adjusted_names.end()});
        return doc;
    }

    Lexer lexer_;
    Token tok_;
    std::string name_;
    std::vector<NodeStmt> nodes_;
    std::vector<EdgeStmt> edges_;
    std::vector<ModStmt> mods_;
    std::vector<MarkerStmt> markers_;
    std::vector<NoiseStmt> noise_;
};

}  // namespace

bool is_reserved_word(std::string_view word) {
    return word == "dag" || word == "exposure" || word == "outcome" || word == "adjusted" || word == "latent" ||
           word == "noise";
}

DagDocument parse_document(std::string_view text) { return Parser(text).run(); }

}  // namespace causal
