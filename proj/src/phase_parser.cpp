#include "nasp/phase_parser.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace nasp {

namespace {

enum class Tok { number, variable, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    mpz_class number;
    long var_index = 0;
    int line = 1, col = 1;
};

[[noreturn]] void syntax_error(const Token& at, const std::string& msg) {
    std::ostringstream os;
    os << "line " << at.line << ", col " << at.col << ": " << msg;
    fail(errc::syntax_error, os.str());
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t k) {
        for (size_t t = 0; t < k; ++t) {
            if (src[i + t] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += k;
    };
    while (i < src.size()) {
        char c = src[i];
        Token tok;
        tok.line = line;
        tok.col = col;
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            tok.kind = Tok::number;
            tok.number = mpz_class(std::string(src.substr(i, j - i)), 10);
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        if (c == 'x') {
            size_t j = i + 1;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j == i + 1) syntax_error(tok, "expected variable index after 'x'");
            if (j - i - 1 > 6) syntax_error(tok, "variable index too large");
            tok.kind = Tok::variable;
            tok.var_index = std::stol(std::string(src.substr(i + 1, j - i - 1)));
            if (tok.var_index < 1) syntax_error(tok, "variable indices start at 1");
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        switch (c) {
            case '+': tok.kind = Tok::plus; break;
            case '-': tok.kind = Tok::minus; break;
            case '*': tok.kind = Tok::star; break;
            case '/': tok.kind = Tok::slash; break;
            case '^': tok.kind = Tok::caret; break;
            case '(': tok.kind = Tok::lparen; break;
            case ')': tok.kind = Tok::rparen; break;
            default: syntax_error(tok, std::string("unexpected character '") + c + "'");
        }
        advance(1);
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::end;
    end.line = line;
    end.col = col;
    out.push_back(std::move(end));
    return out;
}

struct Parser {
    const std::vector<Token>& toks;
    size_t pos = 0;
    int n;

    const Token& peek() const { return toks[pos]; }
    const Token& next() { return toks[pos++]; }
    bool eat(Tok k) {
        if (peek().kind == k) {
            ++pos;
            return true;
        }
        return false;
    }

    QPoly expr() {
        bool neg = false;
        while (true) {
            if (eat(Tok::minus)) { neg = !neg; continue; }
            if (eat(Tok::plus)) continue;
            break;
        }
        QPoly acc = term();
        if (neg) acc = -acc;
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            bool minus = next().kind == Tok::minus;
            QPoly t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    QPoly term() {
        QPoly acc = unary();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Token& op = next();
            QPoly rhs = unary();
            if (op.kind == Tok::star) {
                acc = acc * rhs;
            } else {
                if (rhs.degree() > 0) syntax_error_np(op);
                if (rhs.coeffs.empty()) syntax_error_div0(op);
                acc = acc * QPoly::constant(n, 1 / rhs.coeffs.begin()->second);
            }
        }
        return acc;
    }

    [[noreturn]] void syntax_error_np(const Token& at) {
        std::ostringstream os;
        os << "line " << at.line << ", col " << at.col << ": variable in denominator";
        fail(errc::non_polynomial, os.str());
    }
    [[noreturn]] void syntax_error_div0(const Token& at) {
        std::ostringstream os;
        os << "line " << at.line << ", col " << at.col << ": division by zero";
        fail(errc::syntax_error, os.str());
    }

    QPoly unary() {
        if (eat(Tok::minus)) return -unary();
        return power();
    }

    QPoly power() {
        QPoly base = atom();
        if (eat(Tok::caret)) {
            const Token& e = peek();
            if (e.kind != Tok::number) syntax_error(e, "expected a nonnegative integer exponent");
            next();
            if (e.number > 64) syntax_error(e, "exponent too large");
            return base.pow(e.number.get_si());
        }
        return base;
    }

    QPoly atom() {
        const Token& t = next();
        switch (t.kind) {
            case Tok::number: return QPoly::constant(n, mpq_class(t.number));
            case Tok::variable:
                if (t.var_index > n) syntax_error(t, "variable index exceeds the arity");
                return QPoly::variable(n, static_cast<int>(t.var_index - 1));
            case Tok::lparen: {
                QPoly inner = expr();
                if (!eat(Tok::rparen)) syntax_error(peek(), "expected ')'");
                return inner;
            }
            default: syntax_error(t, "expected a number, variable or '('");
        }
    }
};

} // namespace

QPoly parse_phase(std::string_view src, int nvars) {
    auto toks = tokenize(src);
    int n = nvars;
    if (n == 0) {
        long seen = 1;
        for (const auto& t : toks)
            if (t.kind == Tok::variable) seen = std::max(seen, t.var_index);
        n = static_cast<int>(seen);
    }
    Parser parser{toks, 0, n};
    QPoly q = parser.expr();
    if (parser.peek().kind != Tok::end) syntax_error(parser.peek(), "trailing input");
    return q;
}

} // namespace nasp
