#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "fibscope/mapspec/mapping_spec.hpp"

namespace fibscope {

SpecError::SpecError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error((kind == Kind::Syntax ? "syntax error" : "semantic error") + std::string(" at ") +
                         std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

constexpr std::size_t kMaxDepth = 200;
constexpr unsigned kMaxExponent = 64;
constexpr std::size_t kMaxTerms = 200000;
constexpr long kMaxDegree = 256;
constexpr std::size_t kMaxLiteralDigits = 4096;
constexpr std::size_t kMaxWork = 4000000;   // term-pair products per multiplication

/// One statement with a byte -> (line, column) mapping.
struct Statement {
    std::string text;
    std::size_t line = 0;
    std::vector<std::size_t> columns;  // column of each byte, plus one past the end

    std::size_t column_at(std::size_t offset) const {
        return columns.empty() ? 1 : columns[std::min(offset, columns.size() - 1)];
    }
};

bool is_continuation(unsigned char c) { return (c & 0xC0U) == 0x80U; }

std::vector<Statement> split_statements(std::string_view text) {
    std::vector<Statement> out;
    std::size_t line = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view raw = text.substr(pos, eol - pos);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

        std::size_t column = 1;
        Statement current;
        current.line = line;
        auto flush = [&] {
            current.columns.push_back(column);
            bool blank = std::all_of(current.text.begin(), current.text.end(),
                                     [](unsigned char c) { return std::isspace(c) != 0; });
            if (!blank) out.push_back(std::move(current));
            current = Statement{};
            current.line = line;
        };
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const unsigned char c = static_cast<unsigned char>(raw[i]);
            if (c == ';') {
                flush();
            } else {
                current.text.push_back(static_cast<char>(c));
                current.columns.push_back(column);
            }
            // column advances once per code point; continuation bytes share it
            if (i + 1 >= raw.size() || !is_continuation(static_cast<unsigned char>(raw[i + 1]))) ++column;
        }
        flush();
        if (eol == text.size()) break;
        pos = eol + 1;
        ++line;
    }
    return out;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

class ExprParser {
public:
    ExprParser(const Statement& st, std::size_t begin, std::size_t n, bool holomorphic_only)
        : st_(st), n_(n), holomorphic_only_(holomorphic_only) {
        tokenize(begin);
    }

    ChartExpr parse_single() {
        ChartExpr v = parse_sum(0);
        expect_end();
        return v;
    }

    std::vector<std::pair<ChartExpr, std::size_t>> parse_list() {
        std::vector<std::pair<ChartExpr, std::size_t>> items;
        while (true) {
            const std::size_t at = peek().offset;
            items.emplace_back(parse_sum(0), at);
            if (peek().kind == Tok::Comma) {
                ++pos_;
                continue;
            }
            break;
        }
        expect_end();
        return items;
    }

    [[noreturn]] void fail(SpecError::Kind kind, std::size_t offset, const std::string& msg) const {
        throw SpecError(kind, st_.line, st_.column_at(offset), msg);
    }

private:
    void tokenize(std::size_t begin) {
        const std::string& s = st_.text;
        std::size_t i = begin;
        while (i < s.size()) {
            const unsigned char c = static_cast<unsigned char>(s[i]);
            if (std::isspace(c)) {
                ++i;
                continue;
            }
            const std::size_t start = i;
            if (std::isdigit(c)) {
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i < s.size() && s[i] == '.')
                    fail(SpecError::Kind::Syntax, i, "decimal literals are not supported; write p/q");
                if (i - start > kMaxLiteralDigits) fail(SpecError::Kind::Syntax, start, "integer literal too long");
                tokens_.push_back({Tok::Number, s.substr(start, i - start), start});
                continue;
            }
            if (std::isalpha(c) || c == '_' || c >= 0x80) {
                while (i < s.size()) {
                    const unsigned char d = static_cast<unsigned char>(s[i]);
                    if (std::isalnum(d) || d == '_' || d >= 0x80) {
                        ++i;
                    } else {
                        break;
                    }
                }
                tokens_.push_back({Tok::Ident, s.substr(start, i - start), start});
                continue;
            }
            Tok kind;
            switch (c) {
                case '+': kind = Tok::Plus; break;
                case '-': kind = Tok::Minus; break;
                case '*': kind = Tok::Star; break;
                case '/': kind = Tok::Slash; break;
                case '^': kind = Tok::Caret; break;
                case '(': kind = Tok::LParen; break;
                case ')': kind = Tok::RParen; break;
                case ',': kind = Tok::Comma; break;
                default:
                    fail(SpecError::Kind::Syntax, start, std::string("unexpected character '") +
                                                             static_cast<char>(c) + "'");
            }
            tokens_.push_back({kind, std::string(1, static_cast<char>(c)), start});
            ++i;
        }
        tokens_.push_back({Tok::End, "", s.size()});
    }

    const Token& peek() const { return tokens_[pos_]; }

    void expect_end() const {
        if (peek().kind != Tok::End)
            fail(SpecError::Kind::Syntax, peek().offset, "unexpected token '" + peek().text + "'");
    }

    void guard(const ChartExpr& v, std::size_t offset) const {
        if (term_count(v) > kMaxTerms || v.polynomial_degree() > kMaxDegree)
            fail(SpecError::Kind::Semantic, offset, "expression too large");
    }

    static std::size_t term_count(const ChartExpr& v) {
        std::size_t terms = 0;
        for (const auto& [k, p] : v.parts()) terms += p.size();
        return terms;
    }

    ChartExpr multiply(const ChartExpr& a, const ChartExpr& b, std::size_t offset) const {
        const std::size_t ta = term_count(a), tb = term_count(b);
        if (ta != 0 && tb > kMaxWork / ta) fail(SpecError::Kind::Semantic, offset, "expression too large");
        if (a.polynomial_degree() + b.polynomial_degree() > kMaxDegree)
            fail(SpecError::Kind::Semantic, offset, "expression too large");
        ChartExpr v = a * b;
        guard(v, offset);
        return v;
    }

    void enter(std::size_t offset) {
        if (++depth_ > kMaxDepth) fail(SpecError::Kind::Syntax, offset, "expression nested too deeply");
    }

    ChartExpr parse_sum(std::size_t) {
        enter(peek().offset);
        ChartExpr acc = parse_product();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool minus = peek().kind == Tok::Minus;
            ++pos_;
            ChartExpr rhs = parse_product();
            acc = minus ? acc - rhs : acc + rhs;
        }
        --depth_;
        return acc;
    }

    ChartExpr parse_product() {
        ChartExpr acc = parse_unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const bool divide = peek().kind == Tok::Slash;
            const std::size_t at = peek().offset;
            ++pos_;
            const std::size_t rhs_at = peek().offset;
            ChartExpr rhs = parse_unary();
            if (divide) {
                if (!rhs.is_constant())
                    fail(SpecError::Kind::Semantic, rhs_at, "division is only allowed by a constant");
                if (rhs.is_zero()) fail(SpecError::Kind::Semantic, rhs_at, "division by zero");
                const ComplexRational d = rhs.parts().begin()->second.constant_term();
                acc = (ComplexRational(1) / d) * acc;
                guard(acc, at);
            } else {
                acc = multiply(acc, rhs, at);
            }
        }
        return acc;
    }

    ChartExpr parse_unary() {
        if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
            const bool minus = peek().kind == Tok::Minus;
            enter(peek().offset);
            ++pos_;
            ChartExpr v = parse_unary();
            --depth_;
            return minus ? -v : v;
        }
        return parse_power();
    }

    ChartExpr parse_power() {
        ChartExpr base = parse_primary();
        if (peek().kind != Tok::Caret) return base;
        const std::size_t at = peek().offset;
        ++pos_;
        const Token& e = peek();
        if (e.kind == Tok::Minus) fail(SpecError::Kind::Syntax, e.offset, "negative exponents are not allowed");
        if (e.kind != Tok::Number) fail(SpecError::Kind::Syntax, e.offset, "exponent must be a nonnegative integer");
        if (e.text.size() > 3 || std::stoul(e.text) > kMaxExponent)
            fail(SpecError::Kind::Semantic, e.offset, "exponent exceeds " + std::to_string(kMaxExponent));
        unsigned k = static_cast<unsigned>(std::stoul(e.text));
        ++pos_;
        if (peek().kind == Tok::Caret) fail(SpecError::Kind::Syntax, peek().offset, "chained exponents need parentheses");
        // cheap pre-check before expanding
        const long deg = base.polynomial_degree();
        if (deg > 0 && deg * static_cast<long>(k) > kMaxDegree)
            fail(SpecError::Kind::Semantic, at, "expression too large");
        ChartExpr v = ChartExpr::polynomial(MixedPoly::constant(n_, ComplexRational(1)));
        while (k > 0) {
            if (k & 1U) v = multiply(v, base, at);
            k >>= 1U;
            if (k > 0) base = multiply(base, base, at);
        }
        return v;
    }

    ChartExpr parse_primary() {
        const Token t = peek();
        switch (t.kind) {
            case Tok::Number: {
                ++pos_;
                return ChartExpr::polynomial(MixedPoly::constant(n_, ComplexRational(Rational(t.text))));
            }
            case Tok::LParen: {
                ++pos_;
                ChartExpr v = parse_sum(0);
                if (peek().kind != Tok::RParen) fail(SpecError::Kind::Syntax, peek().offset, "expected ')'");
                ++pos_;
                return v;
            }
            case Tok::Ident: return parse_identifier(t);
            case Tok::End: fail(SpecError::Kind::Syntax, t.offset, "unexpected end of expression");
            default: fail(SpecError::Kind::Syntax, t.offset, "unexpected token '" + t.text + "'");
        }
    }

    ChartExpr parse_identifier(const Token& t) {
        ++pos_;
        if (t.text == "conj") {
            if (holomorphic_only_)
                fail(SpecError::Kind::Semantic, t.offset, "conjugate token in holomorphic component");
            if (peek().kind != Tok::LParen) fail(SpecError::Kind::Syntax, peek().offset, "expected '(' after conj");
            ++pos_;
            ChartExpr v = parse_sum(0);
            if (peek().kind != Tok::RParen) fail(SpecError::Kind::Syntax, peek().offset, "expected ')'");
            ++pos_;
            return v.conj();
        }
        if (t.text == "phi") {
            if (holomorphic_only_)
                fail(SpecError::Kind::Semantic, t.offset, "phi is only allowed in chart expressions");
            return ChartExpr::phi(n_);
        }
        if (t.text == "i") return ChartExpr::polynomial(MixedPoly::constant(n_, ComplexRational::unit()));
        if (auto idx = variable_index(t.text)) return ChartExpr::polynomial(MixedPoly::z(n_, *idx));
        fail(SpecError::Kind::Semantic, t.offset, "unknown identifier '" + t.text + "'");
    }

    std::optional<std::size_t> variable_index(const std::string& name) const {
        if (name.size() >= 2 && name[0] == 'z' &&
            std::all_of(name.begin() + 1, name.end(), [](unsigned char c) { return std::isdigit(c) != 0; }) &&
            name[1] != '0' && name.size() <= 8) {
            const std::size_t k = std::stoul(name.substr(1));
            if (k >= 1 && k <= n_) return k - 1;
            return std::nullopt;
        }
        if (n_ <= 3) {
            if (name == "z") return 0;
            if (name == "w" && n_ >= 2) return 1;
            if ((name == "\xCE\xB6" || name == "zeta") && n_ == 3) return 2;
        }
        return std::nullopt;
    }

    const Statement& st_;
    std::size_t n_;
    bool holomorphic_only_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
};

struct Assignment {
    const Statement* st;
    std::string key;       // "n", "G", "rho", "chart", "decay"
    std::size_t index = 0; // for indexed keys
    std::size_t rhs_begin = 0;
    std::size_t key_offset = 0;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\v\f");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\v\f");
    return s.substr(b, e - b + 1);
}

Assignment classify(const Statement& st) {
    const auto eq = st.text.find('=');
    const auto key_begin = st.text.find_first_not_of(" \t\r\v\f");
    if (eq == std::string::npos)
        throw SpecError(SpecError::Kind::Syntax, st.line, st.column_at(key_begin), "expected '<name> = <value>'");
    const std::string key = trim(st.text.substr(0, eq));
    Assignment a{&st, {}, 0, eq + 1, key_begin};
    auto indexed = [&](const std::string& prefix) -> bool {
        if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0) return false;
        const std::string digits = key.substr(prefix.size());
        if (!std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c) != 0; }) ||
            digits.size() > 6 || digits[0] == '0')
            return false;
        a.key = prefix;
        a.index = std::stoul(digits);
        return true;
    };
    if (key == "n" || key == "rho") {
        a.key = key;
        return a;
    }
    if (indexed("G") || indexed("chart") || indexed("decay")) return a;
    throw SpecError(SpecError::Kind::Syntax, st.line, st.column_at(key_begin),
                    "unknown statement '" + key + "'");
}

unsigned parse_small_int(const Assignment& a, const char* what, unsigned long max_value) {
    const std::string& s = a.st->text;
    std::size_t b = s.find_first_not_of(" \t", a.rhs_begin);
    if (b == std::string::npos)
        throw SpecError(SpecError::Kind::Syntax, a.st->line, a.st->column_at(s.size()), std::string("missing ") + what);
    std::size_t e = b;
    while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) ++e;
    if (e == b || s.find_first_not_of(" \t", e) != std::string::npos)
        throw SpecError(SpecError::Kind::Syntax, a.st->line, a.st->column_at(b),
                        std::string(what) + " must be a nonnegative integer");
    if (e - b > 6 || std::stoul(s.substr(b, e - b)) > max_value)
        throw SpecError(SpecError::Kind::Semantic, a.st->line, a.st->column_at(b), std::string(what) + " is too large");
    return static_cast<unsigned>(std::stoul(s.substr(b, e - b)));
}

}  // namespace

MappingSpec parse_mapping(std::string_view text) {
    const std::vector<Statement> statements = split_statements(text);
    std::vector<Assignment> assignments;
    assignments.reserve(statements.size());
    for (const auto& st : statements) assignments.push_back(classify(st));

    auto semantic = [](const Assignment& a, const std::string& msg) {
        return SpecError(SpecError::Kind::Semantic, a.st->line, a.st->column_at(a.key_offset), msg);
    };

    const Assignment* n_stmt = nullptr;
    for (const auto& a : assignments) {
        if (a.key != "n") continue;
        if (n_stmt != nullptr) throw semantic(a, "duplicate declaration of n");
        n_stmt = &a;
    }
    if (n_stmt == nullptr) throw SpecError(SpecError::Kind::Semantic, 1, 1, "missing declaration 'n = <int>'");
    const unsigned n = parse_small_int(*n_stmt, "n", 64);
    if (n < 2) throw semantic(*n_stmt, "n must be at least 2");

    MappingSpec spec;
    spec.n = n;
    spec.map.n = n;
    std::map<std::size_t, MixedPoly> components;
    std::map<std::size_t, ChartExpr> charts;
    std::map<std::size_t, std::pair<unsigned, const Assignment*>> decays;
    const Assignment* rho_stmt = nullptr;

    for (const auto& a : assignments) {
        if (a.key == "G") {
            if (components.count(a.index)) throw semantic(a, "duplicate component G" + std::to_string(a.index));
            ExprParser p(*a.st, a.rhs_begin, n, true);
            ChartExpr v = p.parse_single();
            components.emplace(a.index, v.is_zero() ? MixedPoly(n) : v.parts().begin()->second);
        } else if (a.key == "chart") {
            if (charts.count(a.index)) throw semantic(a, "duplicate chart" + std::to_string(a.index));
            ExprParser p(*a.st, a.rhs_begin, n, false);
            ChartExpr v = p.parse_single();
            if (!v.is_real_valued()) throw semantic(a, "chart expression must be real-valued");
            charts.emplace(a.index, std::move(v));
        } else if (a.key == "decay") {
            if (decays.count(a.index)) throw semantic(a, "duplicate decay" + std::to_string(a.index));
            decays.emplace(a.index, std::make_pair(parse_small_int(a, "decay exponent", 64), &a));
        } else if (a.key == "rho") {
            if (rho_stmt != nullptr) throw semantic(a, "duplicate rho");
            rho_stmt = &a;
            ExprParser p(*a.st, a.rhs_begin, n, true);
            std::vector<Rational> weights;
            for (const auto& [value, offset] : p.parse_list()) {
                if (!value.is_constant() || !(value.is_zero() || value.parts().begin()->second.constant_term().is_real()))
                    p.fail(SpecError::Kind::Semantic, offset, "weights must be real rational constants");
                Rational w = value.is_zero() ? Rational(0) : value.parts().begin()->second.constant_term().re;
                if (sgn(w) < 0) p.fail(SpecError::Kind::Semantic, offset, "weights must be nonnegative");
                weights.push_back(w);
            }
            if (weights.size() != n)
                throw semantic(a, "rho needs " + std::to_string(n) + " weights, got " + std::to_string(weights.size()));
            if (std::all_of(weights.begin(), weights.end(), [](const Rational& w) { return sgn(w) == 0; }))
                throw semantic(a, "weights must not all be zero");
            spec.weights = WeightVector(std::move(weights));
        }
    }

    if (rho_stmt == nullptr) throw SpecError(SpecError::Kind::Semantic, 1, 1, "missing 'rho = a1,...,an'");
    for (const auto& [k, p] : components) {
        (void)p;
        if (k < 1 || k > n - 1) {
            for (const auto& a : assignments)
                if (a.key == "G" && a.index == k)
                    throw semantic(a, "dimension mismatch: components must be G1..G" + std::to_string(n - 1));
        }
    }
    if (components.size() != n - 1)
        throw SpecError(SpecError::Kind::Semantic, n_stmt->st->line, 1,
                        "dimension mismatch: expected " + std::to_string(n - 1) + " components, got " +
                            std::to_string(components.size()));
    for (auto& [k, p] : components) spec.map.components.push_back(std::move(p));

    std::size_t expected = 1;
    for (auto& [k, c] : charts) {
        if (k != expected) {
            for (const auto& a : assignments)
                if (a.key == "chart" && a.index == k) throw semantic(a, "charts must be numbered chart1..chartp");
        }
        ++expected;
        spec.charts.push_back(std::move(c));
    }
    spec.decay_exponents.assign(spec.charts.size(), std::nullopt);
    for (const auto& [k, d] : decays) {
        if (k < 1 || k > spec.charts.size()) throw semantic(*d.second, "decay" + std::to_string(k) + " has no chart");
        spec.decay_exponents[k - 1] = d.first;
    }
    return spec;
}

ChartExpr parse_expression(std::string_view text, std::size_t n) {
    Statement st;
    st.text = std::string(text);
    st.line = 1;
    for (std::size_t i = 0; i <= st.text.size(); ++i) st.columns.push_back(i + 1);
    ExprParser p(st, 0, n, false);
    return p.parse_single();
}

std::string format_spec(const MappingSpec& spec) {
    std::ostringstream out;
    out << "n = " << spec.n << "\n";
    for (std::size_t k = 0; k < spec.map.components.size(); ++k)
        out << "G" << (k + 1) << " = " << spec.map.components[k].to_string() << "\n";
    out << "rho = ";
    for (std::size_t j = 0; j < spec.weights.size(); ++j) out << (j ? ", " : "") << spec.weights[j].get_str();
    out << "\n";
    for (std::size_t k = 0; k < spec.charts.size(); ++k) {
        out << "chart" << (k + 1) << " = " << spec.charts[k].to_string() << "\n";
        if (spec.decay_exponents.at(k)) out << "decay" << (k + 1) << " = " << *spec.decay_exponents[k] << "\n";
    }
    return out.str();
}

}  // namespace fibscope
