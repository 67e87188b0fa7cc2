#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "forms4/errors.hpp"
#include "forms4/expr.hpp"

namespace forms4 {

/// Recursive-descent parser for the coefficient DSL:
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' integer)?
///   atom   := rational | ident | '(' expr ')' | 'exp(' expr ')'
///           | 'ln(' expr ')' | '-' atom
///   ident  := 'x1'..'x4' | parameter-name
///
/// Rationals are integer literals or p/q (the latter arrives as constant
/// division and folds exactly).  'exp' and 'ln' are reserved words.
class parser {
public:
    static expr parse(std::string_view text) {
        parser p(text);
        expr e = p.parse_sum();
        p.skip_space();
        if (p.pos_ < p.text_.size())
            throw parse_error("unexpected trailing input", p.line_, p.col_);
        return e;
    }

private:
    explicit parser(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw parse_error(what, line_, col_);
    }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance(1);
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() != c) return false;
        advance(1);
        return true;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    expr parse_sum() {
        expr e = parse_term();
        for (;;) {
            if (accept('+'))
                e = e + parse_term();
            else if (accept('-'))
                e = e - parse_term();
            else
                return e;
        }
    }

    expr parse_term() {
        expr e = parse_factor();
        for (;;) {
            if (accept('*'))
                e = e * parse_factor();
            else if (accept('/'))
                e = e / parse_factor();
            else
                return e;
        }
    }

    expr parse_factor() {
        expr e = parse_atom();
        if (accept('^')) return pow(e, parse_integer());
        return e;
    }

    expr parse_atom() {
        char c = peek();
        if (c == '-') {
            advance(1);
            return -parse_atom();
        }
        if (c == '(') {
            advance(1);
            expr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return expr::constant(rational::from_string(read_digits()));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id = read_ident();
            if (id == "exp" || id == "ln") {
                expect('(');
                expr arg = parse_sum();
                expect(')');
                return id == "exp" ? exp(arg) : ln(arg);
            }
            if (id[0] == 'x' && id.size() > 1 &&
                id.find_first_not_of("0123456789", 1) == std::string::npos) {
                if (id.size() == 2 && id[1] >= '1' && id[1] <= '4')
                    return expr::variable(id[1] - '0');
                fail("unknown identifier '" + id + "' (variables are x1..x4)");
            }
            return expr::parameter(id);
        }
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
    }

    long long parse_integer() {
        skip_space();
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            advance(1);
        }
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer exponent");
        std::string digits = read_digits();
        long long v = 0;
        for (char ch : digits) {
            v = v * 10 + (ch - '0');
            if (v > (1LL << 40)) fail("exponent too large");
        }
        return negative ? -v : v;
    }

    std::string read_digits() {
        std::string out;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            out += text_[pos_];
            advance(1);
        }
        return out;
    }

    std::string read_ident() {
        std::string out;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            out += text_[pos_];
            advance(1);
        }
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

inline expr parse_expression(std::string_view text) { return parser::parse(text); }

} // namespace forms4
