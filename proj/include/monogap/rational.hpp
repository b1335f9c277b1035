#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace monogap {

using Int = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision fraction. Always reduced to lowest terms with a
/// positive denominator; the canonical zero is 0/1. Backed by
/// boost::multiprecision::cpp_rational, which maintains exactly that normal form.
class Rational {
public:
    using Backend = boost::multiprecision::cpp_rational;

    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}  // NOLINT: implicit by design, scalars promote
    Rational(long long num, long long den) : Rational(Int(num), Int(den)) {}
    Rational(Int num, Int den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        // divide instead of the component constructor: that path canonicalizes
        // any sign/gcd combination
        v_ = Backend(std::move(num));
        v_ /= Backend(std::move(den));
    }
    explicit Rational(Int n) : v_(std::move(n)) {}
    explicit Rational(Backend v) : v_(std::move(v)) {}

    Int numerator() const { return boost::multiprecision::numerator(v_); }
    Int denominator() const { return boost::multiprecision::denominator(v_); }
    bool is_zero() const { return v_.is_zero(); }
    bool is_integer() const { return denominator() == 1; }
    int sign() const { return v_.sign(); }

    Rational operator-() const { return Rational(Backend(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    double to_double() const { return v_.convert_to<double>(); }

    /// "n" when integral, "n/d" otherwise.
    std::string str() const {
        if (is_integer()) return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }

    /// Correctly rounded decimal with `sig` significant digits, computed in
    /// integer arithmetic (no double round-trip).
    std::string decimal_string(int sig = 17) const;

    /// Accepts "123", "-4/5"; rejects anything else (including zero denominators).
    static std::optional<Rational> parse(std::string_view s);

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    Backend v_;
};

inline std::optional<Rational> Rational::parse(std::string_view s) {
    auto parse_int = [](std::string_view t) -> std::optional<Int> {
        if (t.empty()) return std::nullopt;
        bool neg = false;
        if (t[0] == '-' || t[0] == '+') {
            neg = t[0] == '-';
            t.remove_prefix(1);
        }
        if (t.empty()) return std::nullopt;
        for (char c : t)
            if (c < '0' || c > '9') return std::nullopt;
        Int v{std::string(t)};
        return neg ? -v : v;
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        auto n = parse_int(s);
        if (!n) return std::nullopt;
        return Rational(std::move(*n));
    }
    auto n = parse_int(s.substr(0, slash));
    auto d = parse_int(s.substr(slash + 1));
    if (!n || !d || *d <= 0) return std::nullopt;
    return Rational(std::move(*n), std::move(*d));
}

inline std::string Rational::decimal_string(int sig) const {
    if (sig < 1) sig = 1;
    if (is_zero()) return "0";
    const bool neg = sign() < 0;
    Int a = boost::multiprecision::abs(numerator());
    Int b = denominator();
    auto pow10 = [](int k) {
        Int p = 1;
        for (int i = 0; i < k; ++i) p *= 10;
        return p;
    };
    // Decimal exponent e with 10^e <= a/b < 10^(e+1).
    long da = static_cast<long>(a.str().size());
    long db = static_cast<long>(b.str().size());
    long e = da - db;
    auto cmp_pow = [&](long k) {
        // sign of a/b - 10^k
        if (k >= 0) return a.compare(b * pow10(static_cast<int>(k)));
        return (a * pow10(static_cast<int>(-k))).compare(b);
    };
    while (cmp_pow(e) < 0) --e;
    while (cmp_pow(e + 1) >= 0) ++e;
    // sig digits, rounded half away from zero.
    long shift = sig - 1 - e;
    Int num = a, den = b;
    if (shift >= 0) num *= pow10(static_cast<int>(shift));
    else den *= pow10(static_cast<int>(-shift));
    Int digits = (2 * num + den) / (2 * den);
    if (digits >= pow10(sig)) {  // rounding bumped into one more digit
        digits /= 10;
        ++e;
    }
    std::string ds = digits.str();
    std::string out;
    if (e >= 0 && e <= sig + 3) {
        // fixed notation, integer part of e+1 digits
        if (static_cast<long>(ds.size()) <= e) ds.append(static_cast<std::size_t>(e + 1 - ds.size()), '0');
        out = ds.substr(0, static_cast<std::size_t>(e + 1));
        if (ds.size() > static_cast<std::size_t>(e + 1)) out += "." + ds.substr(static_cast<std::size_t>(e + 1));
    } else if (e < 0 && e >= -4) {
        out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + ds;
    } else {
        out = ds.substr(0, 1);
        if (ds.size() > 1) out += "." + ds.substr(1);
        out += "e" + std::to_string(e);
    }
    return neg ? "-" + out : out;
}

}  // namespace monogap
