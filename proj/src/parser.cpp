#include "odekit/parser.hpp"

#include <cctype>
#include <optional>

#include "odekit/error.hpp"

namespace odekit {

namespace {

// Grammar (explicit operators only; '^' binds tightest, exponents must be
// nonnegative integer literals):
//
//   expr     := term { ('+' | '-') term }
//   term     := unary { ('*' | '/') unary }
//   unary    := '-' unary | power
//   power    := atom [ '^' natural ]
//   atom     := natural | variable | '(' expr ')'
//   variable := 'x' | 'y' | coeff [ '[' natural ',' natural ']' ]
//   coeff    := 'P' | 'Q' | 'R' | 'S'
//   natural  := digit { digit }

enum class Tok {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
};

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& current() const { return current_; }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        current_.offset = pos_;
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            current_.text.clear();
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            current_.kind = Tok::Number;
            current_.text = std::string(text_.substr(start, pos_ - start));
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isalnum(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string word(text_.substr(start, pos_ - start));
            if (word.size() != 1 || std::string("xyPQRS").find(word[0]) == std::string::npos)
                throw SyntaxError("unknown identifier '" + word + "'", start);
            current_.kind = Tok::Ident;
            current_.text = std::move(word);
            return;
        }
        ++pos_;
        switch (c) {
            case '+': current_.kind = Tok::Plus; return;
            case '-': current_.kind = Tok::Minus; return;
            case '*': current_.kind = Tok::Star; return;
            case '/': current_.kind = Tok::Slash; return;
            case '^': current_.kind = Tok::Caret; return;
            case '(': current_.kind = Tok::LParen; return;
            case ')': current_.kind = Tok::RParen; return;
            case '[': current_.kind = Tok::LBracket; return;
            case ']': current_.kind = Tok::RBracket; return;
            case ',': current_.kind = Tok::Comma; return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'",
                          current_.offset);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    RationalExpression parse() {
        RationalExpression e = expr();
        if (lex_.current().kind != Tok::End)
            throw SyntaxError("unexpected trailing input", lex_.current().offset);
        return e;
    }

private:
    Lexer lex_;

    void expect(Tok kind, const char* what) {
        if (lex_.current().kind != kind)
            throw SyntaxError(std::string("expected ") + what, lex_.current().offset);
        lex_.advance();
    }

    std::uint64_t natural(const char* what, std::uint64_t limit) {
        const Token& t = lex_.current();
        if (t.kind != Tok::Number)
            throw SyntaxError(std::string("expected ") + what, t.offset);
        if (t.text.size() > 9)
            throw SyntaxError(std::string(what) + " too large", t.offset);
        std::uint64_t value = std::stoull(t.text);
        if (value > limit)
            throw SyntaxError(std::string(what) + " too large", t.offset);
        lex_.advance();
        return value;
    }

    RationalExpression expr() {
        RationalExpression left = term();
        while (true) {
            Tok k = lex_.current().kind;
            if (k == Tok::Plus) {
                lex_.advance();
                left = left + term();
            } else if (k == Tok::Minus) {
                lex_.advance();
                left = left - term();
            } else {
                return left;
            }
        }
    }

    RationalExpression term() {
        RationalExpression left = unary();
        while (true) {
            Tok k = lex_.current().kind;
            if (k == Tok::Star) {
                lex_.advance();
                left = left * unary();
            } else if (k == Tok::Slash) {
                std::size_t at = lex_.current().offset;
                lex_.advance();
                RationalExpression rhs = unary();
                if (rhs.is_zero())
                    throw DivisionByZeroError("divisor at offset " + std::to_string(at) +
                                              " is identically zero");
                left = left / rhs;
            } else {
                return left;
            }
        }
    }

    RationalExpression unary() {
        if (lex_.current().kind == Tok::Minus) {
            lex_.advance();
            return -unary();
        }
        return power();
    }

    RationalExpression power() {
        RationalExpression base = atom();
        if (lex_.current().kind != Tok::Caret) return base;
        lex_.advance();
        const Token& t = lex_.current();
        if (t.kind == Tok::Minus)
            throw UnsupportedExponentError("exponents must be nonnegative", t.offset);
        if (t.kind != Tok::Number)
            throw UnsupportedExponentError("exponent must be an integer literal",
                                           t.offset);
        if (t.text.size() > 4)
            throw UnsupportedExponentError("exponent too large", t.offset);
        std::uint64_t e = std::stoull(t.text);
        if (e > 9999)
            throw UnsupportedExponentError("exponent too large", t.offset);
        lex_.advance();
        return base.pow(static_cast<std::int64_t>(e));
    }

    RationalExpression atom() {
        const Token t = lex_.current();
        switch (t.kind) {
            case Tok::Number: {
                lex_.advance();
                return RationalExpression::constant(BigRational(BigInt(t.text)));
            }
            case Tok::LParen: {
                lex_.advance();
                RationalExpression inner = expr();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident:
                return variable();
            default:
                throw SyntaxError("expected a number, variable, or '('", t.offset);
        }
    }

    RationalExpression variable() {
        const Token t = lex_.current();
        lex_.advance();
        char c = t.text[0];
        if (c == 'x') return RationalExpression::variable(VariableId::base_x());
        if (c == 'y') return RationalExpression::variable(VariableId::base_y());
        CoeffLetter letter = c == 'P'   ? CoeffLetter::P
                             : c == 'Q' ? CoeffLetter::Q
                             : c == 'R' ? CoeffLetter::R
                                        : CoeffLetter::S;
        std::uint32_t p = 0, q = 0;
        if (lex_.current().kind == Tok::LBracket) {
            lex_.advance();
            p = static_cast<std::uint32_t>(natural("derivative order", 999));
            expect(Tok::Comma, "','");
            q = static_cast<std::uint32_t>(natural("derivative order", 999));
            expect(Tok::RBracket, "']'");
        }
        return RationalExpression::variable(VariableId::jet(letter, p, q));
    }
};

std::string monomial_string(const Monomial& m) {
    std::string out;
    for (const auto& [v, e] : m.factors()) {
        if (!out.empty()) out += "*";
        out += variable_name(v);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

}  // namespace

RationalExpression parse_expression(std::string_view text) {
    return Parser(text).parse();
}

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        bool negative = c < 0;
        BigRational mag = negative ? BigRational(-c) : c;
        if (first) {
            if (negative) out += "-";
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        std::string ms = monomial_string(m);
        if (ms.empty()) {
            out += rational_string(mag);
        } else {
            if (mag != 1) {
                out += rational_string(mag);
                out += "*";
            }
            out += ms;
        }
    }
    return out;
}

std::string to_string(const RationalExpression& r) {
    if (r.is_polynomial()) return to_string(r.numerator());
    return "(" + to_string(r.numerator()) + ")/(" + to_string(r.denominator()) + ")";
}

}  // namespace odekit
