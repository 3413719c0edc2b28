#include "su2flux/exterior/expression.hpp"

#include <cctype>

#include "su2flux/errors.hpp"

namespace su2flux {

namespace {

bool is_basis_name(std::string_view s) {
    if (s.size() < 2 || (s[0] != 'b' && s[0] != 'e')) return false;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    }
    return true;
}

bool is_function_name(std::string_view s) {
    return s == "conj" || s == "re" || s == "im" || s == "d";
}

struct Token {
    enum Kind { End, Number, Name, Symbol } kind;
    std::string text;
    int column;  // 0-based offset into the text
};

class Parser {
public:
    Parser(std::string_view text, int dim, const ExpressionScope& scope, int line, int column_base)
        : text_(text), dim_(dim), scope_(scope), line_(line), column_base_(column_base) {
        tokenize();
    }

    Form parse() {
        Form f = expr();
        if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'", peek().column);
        return f;
    }

private:
    std::string_view text_;
    int dim_;
    const ExpressionScope& scope_;
    int line_;
    int column_base_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, int column) const {
        throw ParseError(msg, line_, column + column_base_);
    }

    void tokenize() {
        std::size_t k = 0;
        while (k < text_.size()) {
            const char c = text_[k];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++k;
                continue;
            }
            const int col = static_cast<int>(k);
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = k;
                while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
                tokens_.push_back({Token::Number, std::string(text_.substr(k, j - k)), col});
                k = j;
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = k;
                while (j < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) {
                    ++j;
                }
                tokens_.push_back({Token::Name, std::string(text_.substr(k, j - k)), col});
                k = j;
            } else if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
                tokens_.push_back({Token::Symbol, std::string(1, c), col});
                ++k;
            } else {
                fail(std::string("unexpected character '") + c + "'", col);
            }
        }
        tokens_.push_back({Token::End, "end of input", static_cast<int>(text_.size())});
    }

    const Token& peek() const { return tokens_[pos_]; }
    Token next() { return tokens_[pos_++]; }
    bool accept(const char* sym) {
        if (peek().kind == Token::Symbol && peek().text == sym) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(const char* sym) {
        if (!accept(sym)) fail(std::string("expected '") + sym + "'", peek().column);
    }

    bool starts_primary() const {
        const Token& t = peek();
        return t.kind == Token::Number || t.kind == Token::Name || (t.kind == Token::Symbol && t.text == "(");
    }

    Form expr() {
        Form acc(dim_);
        bool negate = false;
        if (accept("-")) {
            negate = true;
        } else {
            accept("+");
        }
        acc = term();
        if (negate) acc = -acc;
        while (true) {
            if (accept("+")) {
                acc += term();
            } else if (accept("-")) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Form term() {
        Form acc = unary();
        while (true) {
            if (accept("*")) {
                acc = wedge(acc, unary());
            } else if (peek().kind == Token::Symbol && peek().text == "/") {
                const int col = next().column;
                Form divisor = unary();
                if (!divisor.is_scalar()) fail("division by a form of positive degree", col);
                const Scalar s = divisor.scalar_value();
                if (s.is_zero()) fail("division by zero", col);
                try {
                    acc *= s.inverse();
                } catch (const DomainError& e) {
                    fail(e.what(), col);
                }
            } else if (starts_primary()) {
                acc = wedge(acc, power());
            } else {
                return acc;
            }
        }
    }

    Form power() {
        Form base = primary();
        if (peek().kind == Token::Symbol && peek().text == "^") {
            const int col = next().column;
            bool negative = accept("-");
            if (peek().kind != Token::Number) fail("expected an integer exponent", peek().column);
            const long e = std::stol(next().text);
            if (negative) {
                if (!base.is_scalar()) fail("negative power of a form of positive degree", col);
                try {
                    return Form::constant(dim_, base.scalar_value().pow(-e));
                } catch (const DomainError& err) {
                    fail(err.what(), col);
                }
            }
            return wedge_power(base, static_cast<unsigned>(e));
        }
        return base;
    }

    Form unary() {
        if (accept("-")) return -unary();
        return power();
    }

    Form basis_word(const Token& t) {
        std::vector<int> idx;
        for (std::size_t k = 1; k < t.text.size(); ++k) {
            const int v = t.text[k] - '0';
            const int col = t.column + static_cast<int>(k);
            if (v < 1 || v > dim_) {
                fail("index " + std::to_string(v) + " out of range for dimension " + std::to_string(dim_), col);
            }
            for (int seen : idx) {
                if (seen == v) fail("repeated index " + std::to_string(v) + " in '" + t.text + "'", col);
            }
            idx.push_back(v);
        }
        Form f = Form::constant(dim_, Scalar(1));
        for (int v : idx) f = wedge(f, Form::coframe(dim_, v));
        return f;
    }

    Form primary() {
        const Token t = next();
        if (t.kind == Token::Number) return Form::constant(dim_, Scalar(mpq_class(t.text)));
        if (t.kind == Token::Symbol && t.text == "(") {
            Form f = expr();
            expect(")");
            return f;
        }
        if (t.kind != Token::Name) fail("expected a value, found '" + t.text + "'", t.column);
        if (is_basis_name(t.text)) return basis_word(t);
        if (t.text == "i") return Form::constant(dim_, Scalar::i());
        if (is_function_name(t.text) && peek().kind == Token::Symbol && peek().text == "(") {
            next();
            Form arg = expr();
            expect(")");
            if (t.text == "conj") return arg.conj();
            if (t.text == "re") return arg.re();
            if (t.text == "im") return arg.im();
            if (!scope_.differential) fail("d(...) requires an algebra", t.column);
            return scope_.differential(arg);
        }
        if (scope_.forms != nullptr) {
            auto it = scope_.forms->find(t.text);
            if (it != scope_.forms->end()) {
                if (it->second.dim() != dim_) fail("form '" + t.text + "' has a different dimension", t.column);
                return it->second;
            }
        }
        if (scope_.ctx && scope_.ctx->find(t.text) != nullptr) {
            return Form::constant(dim_, Scalar::parameter(scope_.ctx, t.text));
        }
        throw UndeclaredSymbolError(t.text, line_, t.column + column_base_);
    }
};

}  // namespace

bool is_reserved_name(std::string_view name) {
    return is_basis_name(name) || name == "i" || is_function_name(name) || name == "sqrt";
}

Form parse_form_expression(std::string_view text, int dim, const ExpressionScope& scope, int line,
                           int column_base) {
    if (dim < 0 || dim > kMaxDimension) throw ShapeError("form dimension out of range");
    return Parser(text, dim, scope, line, column_base).parse();
}

Scalar parse_scalar_expression(std::string_view text, const ExpressionScope& scope, int line, int column_base) {
    Form f = Parser(text, 0, scope, line, column_base).parse();
    return f.scalar_value();
}

}  // namespace su2flux
