#pragma once

#include "monogap/errors.hpp"
#include "monogap/interval.hpp"
#include "monogap/poly.hpp"
#include "monogap/rational.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace monogap {

/// Isolating interval for one distinct real root: lo < hi and exactly one root
/// lies in (lo, hi). sign_change reports whether the queried polynomial itself
/// flips sign across the bracket (false for roots of even multiplicity).
struct RootBracket {
    Rational lo, hi;
    bool sign_change = false;
    Rational midpoint() const { return (lo + hi) * Rational(1, 2); }
    Rational width() const { return hi - lo; }
};

namespace iroots {

// Integer polynomial kernel: ascending coefficients, no trailing zeros, empty
// vector is the zero polynomial. All Sturm work happens here so that sign
// evaluations stay in integer arithmetic.
using IntPoly = std::vector<Int>;

inline void trim(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}
inline int degree(const IntPoly& p) { return static_cast<int>(p.size()) - 1; }

inline IntPoly from_poly(const Poly& p) {
    if (p.is_zero()) return {};
    Int l = 1;
    for (const auto& c : p.coeffs()) l = boost::multiprecision::lcm(l, c.denominator());
    IntPoly r(p.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const Rational& c = p.coeffs()[i];
        r[i] = c.numerator() * (l / c.denominator());
    }
    return r;
}

inline Poly to_poly(const IntPoly& p) {
    std::vector<Rational> c(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = Rational(p[i]);
    return Poly(std::move(c));
}

inline IntPoly primitive(IntPoly p) {
    trim(p);
    if (p.empty()) return p;
    Int g = 0;
    for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
    for (auto& c : p) c /= g;
    return p;
}

inline IntPoly derivative(const IntPoly& p) {
    if (p.size() <= 1) return {};
    IntPoly r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = Int(i) * p[i];
    return r;
}

/// Sign of p(a/b) for b > 0, via p(a/b) * b^deg expanded with Horner.
inline int sign_at(const IntPoly& p, const Rational& x) {
    if (p.empty()) return 0;
    const Int a = x.numerator(), b = x.denominator();
    Int acc = p.back(), powb = 1;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        powb *= b;
        acc = acc * a + p[i] * powb;
    }
    return acc.sign();
}

/// Pseudo-remainder of A by B whose sign at every point matches the true
/// rational remainder (the implicit multiplier is kept positive).
inline IntPoly prem_signed(const IntPoly& A, const IntPoly& B) {
    if (B.empty()) throw std::domain_error("prem_signed: zero divisor");
    IntPoly r = A;
    trim(r);
    const Int d = B.back();
    const int db = degree(B);
    int steps = 0;
    while (!r.empty() && degree(r) >= db) {
        const int k = degree(r) - db;
        const Int lr = r.back();
        IntPoly nr(r.size() - 1, Int(0));
        // d*r - lr * t^k * B; the top term cancels. After the loop r equals
        // d^steps * (A mod B) exactly, so the sign is off iff d^steps < 0.
        for (int i = 0; i < degree(r); ++i) nr[static_cast<std::size_t>(i)] = d * r[static_cast<std::size_t>(i)];
        for (int i = 0; i < db; ++i) nr[static_cast<std::size_t>(i + k)] -= lr * B[static_cast<std::size_t>(i)];
        trim(nr);
        r = std::move(nr);
        ++steps;
    }
    if (d < 0 && (steps % 2) != 0)
        for (auto& c : r) c = -c;
    return r;
}

inline IntPoly gcd(IntPoly a, IntPoly b) {
    a = primitive(std::move(a));
    b = primitive(std::move(b));
    if (degree(a) < degree(b)) std::swap(a, b);
    while (!b.empty()) {
        IntPoly r = primitive(prem_signed(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() < 0)
        for (auto& c : a) c = -c;
    return a;
}

/// p with repeated factors collapsed: p / gcd(p, p').
inline IntPoly square_free(const IntPoly& p) {
    if (degree(p) <= 1) return primitive(p);
    IntPoly g = gcd(p, derivative(p));
    if (degree(g) == 0) return primitive(p);
    return primitive(from_poly(to_poly(p).exact_div(to_poly(g))));
}

/// Divides out the exact root r (must be a root).
inline IntPoly deflate_root(const IntPoly& p, const Rational& r) {
    auto [q, rem] = to_poly(p).divide_linear(r);
    if (!rem.is_zero()) throw std::domain_error("deflate_root: not a root");
    return primitive(from_poly(q));
}

/// Standard Sturm chain p, p', then negated remainders down to a constant.
inline std::vector<IntPoly> sturm_chain(const IntPoly& p) {
    std::vector<IntPoly> chain;
    chain.push_back(primitive(p));
    IntPoly d = primitive(derivative(p));
    if (d.empty()) return chain;
    chain.push_back(std::move(d));
    while (true) {
        IntPoly r = prem_signed(chain[chain.size() - 2], chain.back());
        trim(r);
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(primitive(std::move(r)));
        if (degree(chain.back()) == 0) break;
    }
    return chain;
}

inline int variations(const std::vector<IntPoly>& chain, const Rational& x) {
    int v = 0, prev = 0;
    for (const auto& q : chain) {
        int s = sign_at(q, x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

/// Distinct roots of the chain's head in the open interval (a,b); both
/// endpoints must be non-roots.
inline int count_open(const std::vector<IntPoly>& chain, const Rational& a, const Rational& b) {
    return variations(chain, a) - variations(chain, b);
}

/// A point in (a,b) that is not a root of p; walks a dyadic fraction ladder.
inline Rational non_root_point(const IntPoly& p, const Rational& a, const Rational& b) {
    const Rational w = b - a;
    for (long long den = 2; den < (1LL << 40); den *= 2) {
        for (long long num = 1; num < den; num += 2) {
            Rational m = a + w * Rational(num, den);
            if (sign_at(p, m) != 0) return m;
        }
    }
    throw internal_error("non_root_point: exhausted candidates");
}

/// One bisection step on a bracket known to isolate a single simple root of
/// sf. When the midpoint lands exactly on the root, recenters around it
/// instead, so endpoints always stay non-roots and lo < hi is preserved.
inline std::pair<Rational, Rational> halve(const IntPoly& sf, const Rational& lo, const Rational& hi) {
    Rational m = (lo + hi) * Rational(1, 2);
    int sm = sign_at(sf, m);
    if (sm == 0) {
        Rational d = (hi - lo) * Rational(1, 4);
        return {m - d, m + d};
    }
    if (sm == sign_at(sf, lo)) return {m, hi};
    return {lo, m};
}

inline void isolate_rec(const std::vector<IntPoly>& chain, const IntPoly& sf, const Rational& a, const Rational& b,
                        std::vector<std::pair<Rational, Rational>>& out) {
    int c = count_open(chain, a, b);
    if (c == 0) return;
    if (c == 1) {
        out.emplace_back(a, b);
        return;
    }
    Rational m = non_root_point(sf, a, b);
    isolate_rec(chain, sf, a, m, out);
    isolate_rec(chain, sf, m, b, out);
}

}  // namespace iroots

inline int sign_at(const Poly& p, const Rational& x) { return iroots::sign_at(iroots::from_poly(p), x); }

/// Power of two strictly larger than the magnitude of every real root.
inline Rational cauchy_root_bound_pow2(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("cauchy_root_bound_pow2: zero polynomial");
    Rational lead = p.leading().abs();
    Rational m;
    for (int k = 0; k < p.degree(); ++k) m = std::max(m, p.coeff(k).abs());
    Rational bound = Rational(1) + m / lead;
    Rational b = 1;
    while (b <= bound) b *= Rational(2);
    return b;
}

/// Disjoint isolating brackets, one per distinct real root of p in the open
/// interval (lo,hi), sorted increasingly. Bracket endpoints lie strictly
/// inside (lo,hi) and are never roots themselves.
inline std::vector<RootBracket> isolate_roots_in(const Poly& p, const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw std::invalid_argument("isolate_roots_in: need lo < hi");
    if (p.is_zero()) throw std::invalid_argument("isolate_roots_in: zero polynomial");
    std::vector<RootBracket> out;
    iroots::IntPoly ip = iroots::from_poly(p);
    iroots::IntPoly sf = iroots::square_free(ip);
    if (iroots::sign_at(sf, lo) == 0) sf = iroots::deflate_root(sf, lo);
    if (iroots::sign_at(sf, hi) == 0) sf = iroots::deflate_root(sf, hi);
    if (iroots::degree(sf) < 1) return out;
    auto chain = iroots::sturm_chain(sf);
    std::vector<std::pair<Rational, Rational>> raw;
    iroots::isolate_rec(chain, sf, lo, hi, raw);
    for (auto& [a, b] : raw) {
        while (a == lo || b == hi) std::tie(a, b) = iroots::halve(sf, a, b);
        RootBracket br;
        br.lo = a;
        br.hi = b;
        br.sign_change = iroots::sign_at(ip, a) * iroots::sign_at(ip, b) < 0;
        out.push_back(std::move(br));
    }
    std::sort(out.begin(), out.end(), [](const RootBracket& x, const RootBracket& y) { return x.lo < y.lo; });
    return out;
}

/// Brackets for every distinct root in (0, +inf).
inline std::vector<RootBracket> isolate_positive_roots(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("isolate_positive_roots: zero polynomial");
    if (p.degree() == 0) return {};
    return isolate_roots_in(p, Rational(0), cauchy_root_bound_pow2(p));
}

/// Number of distinct roots in the open interval (a,b).
inline int count_roots_open(const Poly& p, const Rational& a, const Rational& b) {
    if (!(a < b)) throw std::invalid_argument("count_roots_open: need a < b");
    if (p.is_zero()) throw std::invalid_argument("count_roots_open: zero polynomial");
    iroots::IntPoly sf = iroots::square_free(iroots::from_poly(p));
    if (iroots::sign_at(sf, a) == 0) sf = iroots::deflate_root(sf, a);
    if (iroots::sign_at(sf, b) == 0) sf = iroots::deflate_root(sf, b);
    if (iroots::degree(sf) < 1) return 0;
    return iroots::count_open(iroots::sturm_chain(sf), a, b);
}

namespace iroots {

/// Square-free part set up for bisection on the bracket; throws internal_error
/// when the bracket carries no root at all.
inline IntPoly bisection_kernel(const Poly& p, const RootBracket& b) {
    IntPoly sf = square_free(from_poly(p));
    if (sign_at(sf, b.lo) == 0) sf = deflate_root(sf, b.lo);
    if (sign_at(sf, b.hi) == 0) sf = deflate_root(sf, b.hi);
    if (degree(sf) < 1 || sign_at(sf, b.lo) * sign_at(sf, b.hi) >= 0)
        throw internal_error("root bracket has no sign change and no root");
    return sf;
}

}  // namespace iroots

/// Bisects a bracket until its width is at most `width`.
inline RootBracket tighten_bracket(const Poly& p, RootBracket b, const Rational& width) {
    if (width <= Rational(0)) throw std::invalid_argument("tighten_bracket: width must be positive");
    iroots::IntPoly sf = iroots::bisection_kernel(p, b);
    Rational lo = b.lo, hi = b.hi;
    while (hi - lo > width) std::tie(lo, hi) = iroots::halve(sf, lo, hi);
    iroots::IntPoly ip = iroots::from_poly(p);
    return {lo, hi, iroots::sign_at(ip, lo) * iroots::sign_at(ip, hi) < 0};
}

/// Double approximation of the bracketed root, within tol of the exact value.
inline double refine_root(const Poly& p, const RootBracket& b, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("refine_root: tol must be positive");
    iroots::IntPoly sf = iroots::bisection_kernel(p, b);
    Rational lo = b.lo, hi = b.hi;
    while ((hi - lo).to_double() > tol * 0.5) std::tie(lo, hi) = iroots::halve(sf, lo, hi);
    return ((lo + hi) * Rational(1, 2)).to_double();
}

struct NonnegResult {
    bool nonneg = false;
    std::optional<Rational> witness;  // point of I with p(witness) < 0
};

/// Exact decision of p >= 0 everywhere on I, with a rational counterexample
/// point on failure. Works on the sign pattern between isolated roots, so no
/// floating point is involved.
inline NonnegResult poly_nonneg_on(const Poly& p, const Interval& I) {
    if (p.is_zero()) return {true, std::nullopt};
    const Rational ce = I.closed_endpoint();
    if (p.eval(ce).sign() < 0) return {false, ce};
    if (p.degree() == 0) return {true, std::nullopt};  // constant, checked above

    // Finite open window (a,b) covering all interior sign behaviour: beyond the
    // Cauchy bound the sign is frozen, so a sentinel endpoint out there stands
    // in for an unbounded side.
    const Rational B = cauchy_root_bound_pow2(p);
    Rational a, b;
    switch (I.kind()) {
        case Interval::Kind::ClosedOpen:
        case Interval::Kind::OpenClosed:
            a = I.lo();
            b = I.hi();
            break;
        case Interval::Kind::ClosedUnbounded:
            a = I.lo();
            b = std::max(B, a) + Rational(1);
            break;
        case Interval::Kind::UnboundedClosed:
            b = I.hi();
            a = std::min(-B, b) - Rational(1);
            break;
    }

    // One checkpoint per maximal root-free gap of (a,b); bracket endpoints are
    // non-roots strictly inside (a,b), so they serve directly.
    auto brs = isolate_roots_in(p, a, b);
    std::vector<Rational> checkpoints;
    if (brs.empty()) {
        checkpoints.push_back(iroots::non_root_point(iroots::from_poly(p), a, b));
    } else {
        checkpoints.push_back(brs.front().lo);
        for (std::size_t i = 0; i + 1 < brs.size(); ++i) checkpoints.push_back(brs[i].hi);
        checkpoints.push_back(brs.back().hi);
    }
    for (const auto& c : checkpoints) {
        if (p.eval(c).sign() < 0) return {false, c};
    }
    return {true, std::nullopt};
}

}  // namespace monogap
