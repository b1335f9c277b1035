#pragma once

#include "monogap/function_expr.hpp"
#include "monogap/rational.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace monogap {

/// Syntax or semantic error in a function-expression string, with the byte
/// offset where it was detected.
struct ParseError : std::invalid_argument {
    ParseError(std::size_t off, const std::string& msg)
        : std::invalid_argument("parse error at byte " + std::to_string(off) + ": " + msg), offset(off) {}
    std::size_t offset;
};

namespace detail {

// expr := g(INT) | pow(INT) | mobius(RAT,RAT,RAT,RAT) | affine(RAT,RAT)
//       | compose(expr,expr) | bendat(expr,RAT) | poly(RAT{,RAT}) | prod(expr,expr)
// RAT  := INT | INT "/" POSINT
class FnParser {
public:
    explicit FnParser(std::string_view s) : s_(s) {}

    FunctionExpr parse() {
        FunctionExpr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    FunctionExpr expr() {
        skip_ws();
        const std::size_t at = pos_;
        std::string name = ident();
        if (name == "g") {
            long long n = integer_arg();
            if (n < 1) throw ParseError(at, "g(n) needs n >= 1");
            return FunctionExpr::gn(static_cast<int>(n));
        }
        if (name == "pow") {
            long long k = integer_arg();
            if (k < 0) throw ParseError(at, "pow(k) needs k >= 0");
            return FunctionExpr::power(static_cast<int>(k));
        }
        if (name == "mobius") {
            expect('(');
            Rational a = rational();
            expect(',');
            Rational b = rational();
            expect(',');
            Rational c = rational();
            expect(',');
            Rational d = rational();
            expect(')');
            if ((a * d - b * c).is_zero()) throw ParseError(at, "mobius needs ad - bc != 0");
            return FunctionExpr::mobius(a, b, c, d);
        }
        if (name == "affine") {
            expect('(');
            Rational c = rational();
            expect(',');
            Rational d = rational();
            expect(')');
            return FunctionExpr::affine(c, d);
        }
        if (name == "compose") {
            expect('(');
            FunctionExpr f = expr();
            expect(',');
            FunctionExpr g = expr();
            expect(')');
            return FunctionExpr::compose(f, g);
        }
        if (name == "prod") {
            expect('(');
            FunctionExpr f = expr();
            expect(',');
            FunctionExpr g = expr();
            expect(')');
            return FunctionExpr::product(f, g);
        }
        if (name == "bendat") {
            expect('(');
            FunctionExpr f = expr();
            expect(',');
            const std::size_t rat_at = pos_;
            Rational t0 = rational();
            expect(')');
            try {
                return FunctionExpr::diff_quotient(f, t0);
            } catch (const std::domain_error&) {
                throw ParseError(rat_at, "bendat anchor " + t0.str() + " is a pole of the inner expression");
            }
        }
        if (name == "poly") {
            expect('(');
            std::vector<Rational> cs;
            cs.push_back(rational());
            skip_ws();
            while (peek() == ',') {
                ++pos_;
                cs.push_back(rational());
                skip_ws();
            }
            expect(')');
            return FunctionExpr::poly(Poly(std::move(cs)));
        }
        if (name.empty()) fail("expected expression");
        throw ParseError(at, "unknown function '" + name + "'");
    }

    long long integer_arg() {
        expect('(');
        Rational r = rational();
        expect(')');
        if (!r.is_integer()) fail("expected an integer");
        return static_cast<long long>(r.numerator().convert_to<long long>());
    }

    Rational rational() {
        skip_ws();
        const std::size_t at = pos_;
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+') ++pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError(at, "expected a number");
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '/') {
            ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a denominator");
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        auto r = Rational::parse(s_.substr(start, pos_ - start));
        if (!r) throw ParseError(at, "bad rational literal");
        return *r;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline FunctionExpr parse_function(std::string_view spec) { return detail::FnParser(spec).parse(); }

}  // namespace monogap
