#pragma once

#include "monogap/rational.hpp"

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace monogap {

/// Dense univariate polynomial with exact rational coefficients, stored in
/// ascending degree order with no trailing zeros. The zero polynomial has an
/// empty coefficient vector and degree() == -1.
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }
    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly constant(Rational v) { return Poly{std::move(v)}; }
    static Poly x() { return Poly{Rational(0), Rational(1)}; }
    /// c * t^k
    static Poly monomial(Rational c, int k) {
        if (k < 0) throw std::invalid_argument("Poly::monomial: negative exponent");
        std::vector<Rational> v(static_cast<std::size_t>(k) + 1);
        v.back() = std::move(c);
        return Poly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    /// Coefficient of t^k; zero beyond the stored degree.
    const Rational& coeff(int k) const {
        static const Rational kZero;
        if (k < 0 || k >= static_cast<int>(c_.size())) return kZero;
        return c_[static_cast<std::size_t>(k)];
    }
    Rational leading() const {
        if (is_zero()) throw std::domain_error("Poly::leading: zero polynomial");
        return c_.back();
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly operator-() const {
        Poly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i < a.c_.size()) v[i] += a.c_[i];
            if (i < b.c_.size()) v[i] += b.c_[i];
        }
        return Poly(std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(v));
    }
    friend Poly operator*(const Rational& s, Poly p) {
        for (auto& c : p.c_) c *= s;
        p.trim();
        return p;
    }
    friend Poly operator*(Poly p, const Rational& s) { return s * std::move(p); }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    /// k-th derivative; k = 0 returns the polynomial itself.
    Poly derivative(int k = 1) const {
        if (k < 0) throw std::invalid_argument("Poly::derivative: negative order");
        Poly r = *this;
        while (k-- > 0) {
            if (r.c_.size() <= 1) return Poly();
            std::vector<Rational> v(r.c_.size() - 1);
            for (std::size_t i = 1; i < r.c_.size(); ++i) v[i - 1] = Rational(static_cast<long long>(i)) * r.c_[i];
            r = Poly(std::move(v));
        }
        return r;
    }

    Rational eval(const Rational& t) const {
        Rational acc;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
        return acc;
    }

    double eval_double(double t) const {
        double acc = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i].to_double();
        return acc;
    }

    Poly compose(const Poly& inner) const {
        Poly acc;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * inner + constant(c_[i]);
        return acc;
    }

    /// p(t) = q(t) * (t - a) + r with r = p(a); returns {q, r}.
    std::pair<Poly, Rational> divide_linear(const Rational& a) const {
        if (is_zero()) return {Poly(), Rational()};
        std::vector<Rational> q(c_.size() - 1);
        Rational carry = c_.back();
        for (std::size_t i = c_.size() - 1; i-- > 0;) {
            q[i] = carry;
            carry = c_[i] + carry * a;
        }
        return {Poly(std::move(q)), carry};
    }

    /// Quotient of exact division; throws if the remainder is nonzero.
    Poly exact_div(const Poly& d) const {
        Poly q, r = *this;
        if (d.is_zero()) throw std::domain_error("Poly::exact_div: division by zero polynomial");
        while (!r.is_zero() && r.degree() >= d.degree()) {
            Poly term = monomial(r.leading() / d.leading(), r.degree() - d.degree());
            q += term;
            r -= term * d;
        }
        if (!r.is_zero()) throw std::domain_error("Poly::exact_div: nonzero remainder");
        return q;
    }

    /// Human-readable form, e.g. "1/3 - 2*t + t^3".
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const Rational& c = c_[i];
            if (c.is_zero()) continue;
            Rational mag = c.abs();
            if (out.empty()) {
                if (c.sign() < 0) out += "-";
            } else {
                out += c.sign() < 0 ? " - " : " + ";
            }
            bool unit = (mag == Rational(1)) && i > 0;
            if (!unit) out += mag.str();
            if (i > 0) {
                if (!unit) out += "*";
                out += "t";
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

private:
    std::vector<Rational> c_;
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
};

/// Odd truncation t + t^3/3 + ... + t^(2n-1)/(2n-1); requires n >= 1.
inline Poly gn_poly(int n) {
    if (n < 1) throw std::invalid_argument("gn_poly: n must be >= 1");
    std::vector<Rational> c(2 * static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) c[static_cast<std::size_t>(2 * k - 1)] = Rational(1, 2 * k - 1);
    return Poly(std::move(c));
}

/// Exact Newton interpolation through (xs[i], vs[i]); the xs must be distinct.
/// Returns the unique polynomial of degree < xs.size().
inline Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& vs) {
    if (xs.size() != vs.size() || xs.empty()) throw std::invalid_argument("interpolate: bad point set");
    const std::size_t n = xs.size();
    std::vector<Rational> dd = vs;  // divided-difference table, computed in place
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
    // Horner on the Newton form: p = dd[n-1]; p = p*(t - xs[k]) + dd[k]
    Poly p = Poly::constant(dd[n - 1]);
    for (std::size_t k = n - 1; k-- > 0;) p = p * Poly{-xs[k], Rational(1)} + Poly::constant(dd[k]);
    return p;
}

}  // namespace monogap
