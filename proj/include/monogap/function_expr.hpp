#pragma once

#include "monogap/errors.hpp"
#include "monogap/interval.hpp"
#include "monogap/poly.hpp"
#include "monogap/rational.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace monogap {

namespace jets {

// A jet of order m at x is the truncated Taylor expansion
// [f(x), f'(x), f''(x)/2!, ..., f^(m)(x)/m!]; all arithmetic exact.
using Jet = std::vector<Rational>;

inline Jet mul(const Jet& a, const Jet& b) {
    Jet c(a.size());
    for (std::size_t k = 0; k < c.size(); ++k)
        for (std::size_t i = 0; i <= k; ++i) c[k] += a[i] * b[k - i];
    return c;
}

inline Jet div(const Jet& a, const Jet& b) {
    if (b[0].is_zero()) throw std::domain_error("evaluation at a pole");
    Jet c(a.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        Rational s = a[k];
        for (std::size_t i = 1; i <= k; ++i) s -= b[i] * c[k - i];
        c[k] = s / b[0];
    }
    return c;
}

}  // namespace jets

/// Closed expression language for the functions the certificates handle:
/// polynomials, affine maps, Moebius maps, composition, products, and the
/// shifted difference quotient (f(t) - f(t0))/(t - t0). Every expression is
/// exactly evaluable and exactly differentiable (to any order) at rational
/// non-pole points via truncated Taylor jets. Immutable; cheap to copy.
class FunctionExpr {
public:
    enum class Kind { Polynomial, Affine, Mobius, Compose, DiffQuotient, Product };

    static FunctionExpr poly(Poly p) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Polynomial;
        n->p = std::move(p);
        return FunctionExpr(std::move(n));
    }
    /// c*t + d
    static FunctionExpr affine(Rational c, Rational d) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Affine;
        n->c = std::move(c);
        n->d = std::move(d);
        return FunctionExpr(std::move(n));
    }
    /// (a*t + b)/(c*t + d); stored in normalized integer form (common
    /// denominator cleared, content divided out, first nonzero of (c,d)
    /// positive) so that equal maps compare equal and print canonically.
    static FunctionExpr mobius(Rational a, Rational b, Rational c, Rational d) {
        if ((a * d - b * c).is_zero()) throw std::invalid_argument("mobius: ad - bc must be nonzero");
        Int l = boost::multiprecision::lcm(boost::multiprecision::lcm(a.denominator(), b.denominator()),
                                           boost::multiprecision::lcm(c.denominator(), d.denominator()));
        Int na = a.numerator() * (l / a.denominator());
        Int nb = b.numerator() * (l / b.denominator());
        Int nc = c.numerator() * (l / c.denominator());
        Int nd = d.numerator() * (l / d.denominator());
        Int g = boost::multiprecision::gcd(boost::multiprecision::gcd(na, nb), boost::multiprecision::gcd(nc, nd));
        na /= g; nb /= g; nc /= g; nd /= g;
        const bool flip = nc != 0 ? nc < 0 : nd < 0;
        if (flip) { na = -na; nb = -nb; nc = -nc; nd = -nd; }
        auto n = std::make_shared<Node>();
        n->kind = Kind::Mobius;
        n->a = Rational(std::move(na));
        n->b = Rational(std::move(nb));
        n->c = Rational(std::move(nc));
        n->d = Rational(std::move(nd));
        return FunctionExpr(std::move(n));
    }
    /// outer(inner(t))
    static FunctionExpr compose(FunctionExpr outer, FunctionExpr inner) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Compose;
        n->lhs = outer.node_;
        n->rhs = inner.node_;
        return FunctionExpr(std::move(n));
    }
    /// (f(t) - f(t0)) / (t - t0), with the removable singularity at t0 closed
    /// by f'(t0). Throws if t0 is a pole of f.
    static FunctionExpr diff_quotient(FunctionExpr f, Rational t0) {
        Rational at_t0 = f.eval(t0);  // validates t0 up front
        auto n = std::make_shared<Node>();
        n->kind = Kind::DiffQuotient;
        n->lhs = f.node_;
        n->t0 = std::move(t0);
        n->cached_at_t0 = std::move(at_t0);
        return FunctionExpr(std::move(n));
    }
    static FunctionExpr product(FunctionExpr l, FunctionExpr r) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Product;
        n->lhs = l.node_;
        n->rhs = r.node_;
        return FunctionExpr(std::move(n));
    }
    /// t^k (k = 0 gives the constant 1)
    static FunctionExpr power(int k) { return poly(Poly::monomial(Rational(1), k)); }
    static FunctionExpr identity() { return power(1); }
    static FunctionExpr gn(int n) { return poly(gn_poly(n)); }

    Kind kind() const { return node_->kind; }
    const Poly& poly_ref() const { expect(Kind::Polynomial); return node_->p; }
    const Rational& affine_c() const { expect(Kind::Affine); return node_->c; }
    const Rational& affine_d() const { expect(Kind::Affine); return node_->d; }
    const Rational& mobius_a() const { expect(Kind::Mobius); return node_->a; }
    const Rational& mobius_b() const { expect(Kind::Mobius); return node_->b; }
    const Rational& mobius_c() const { expect(Kind::Mobius); return node_->c; }
    const Rational& mobius_d() const { expect(Kind::Mobius); return node_->d; }
    FunctionExpr outer() const { expect2(Kind::Compose, Kind::Product); return FunctionExpr(node_->lhs); }
    FunctionExpr inner() const {
        if (node_->kind == Kind::DiffQuotient) return FunctionExpr(node_->lhs);
        expect2(Kind::Compose, Kind::Product);
        return FunctionExpr(node_->rhs);
    }
    const Rational& anchor() const { expect(Kind::DiffQuotient); return node_->t0; }

    /// Pole of a Moebius node, when it has one (c != 0).
    std::optional<Rational> mobius_pole() const {
        expect(Kind::Mobius);
        if (node_->c.is_zero()) return std::nullopt;
        return -(node_->d / node_->c);
    }

    Rational eval(const Rational& t) const { return eval_node(*node_, t); }

    double eval_double(double t) const { return eval_double_node(*node_, t); }

    /// Truncated Taylor expansion of order m at x (exact).
    jets::Jet taylor_jet(const Rational& x, int m) const {
        if (m < 0) throw std::invalid_argument("taylor_jet: negative order");
        return jet_node(*node_, x, m);
    }

    /// Exact k-th derivative value at x.
    Rational derivative_at(const Rational& x, int k) const {
        if (k < 0) throw std::invalid_argument("derivative_at: negative order");
        jets::Jet j = taylor_jet(x, k);
        Rational fact(1);
        for (int i = 2; i <= k; ++i) fact *= Rational(i);
        return j[static_cast<std::size_t>(k)] * fact;
    }

    /// Exact polynomial form when the whole tree reduces to one.
    std::optional<Poly> as_poly() const { return as_poly_node(*node_); }

    /// Canonical surface syntax; parseable back to a structurally equal tree.
    std::string print() const { return print_node(*node_); }

    bool same_as(const FunctionExpr& o) const { return same_node(*node_, *o.node_); }
    friend bool operator==(const FunctionExpr& x, const FunctionExpr& y) { return x.same_as(y); }

    /// Attaches a declared domain after checking no Moebius pole lies in it.
    FunctionExpr with_domain(Interval I) const {
        check_poles(*node_, I);
        FunctionExpr e(node_);
        e.domain_ = std::move(I);
        return e;
    }
    const std::optional<Interval>& domain() const { return domain_; }

private:
    struct Node {
        Kind kind;
        Poly p;                                  // Polynomial
        Rational a, b, c, d;                     // Mobius (a,b,c,d) / Affine (c,d)
        std::shared_ptr<const Node> lhs, rhs;    // Compose/Product children; DiffQuotient inner = lhs
        Rational t0, cached_at_t0;               // DiffQuotient
    };

    explicit FunctionExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    void expect(Kind k) const {
        if (node_->kind != k) throw std::logic_error("FunctionExpr: wrong node kind");
    }
    void expect2(Kind k1, Kind k2) const {
        if (node_->kind != k1 && node_->kind != k2) throw std::logic_error("FunctionExpr: wrong node kind");
    }

    static Rational eval_node(const Node& n, const Rational& t) {
        switch (n.kind) {
            case Kind::Polynomial: return n.p.eval(t);
            case Kind::Affine: return n.c * t + n.d;
            case Kind::Mobius: {
                Rational den = n.c * t + n.d;
                if (den.is_zero()) throw std::domain_error("evaluation at a pole");
                return (n.a * t + n.b) / den;
            }
            case Kind::Compose: return eval_node(*n.lhs, eval_node(*n.rhs, t));
            case Kind::DiffQuotient: {
                if (t == n.t0) return FunctionExpr(n.lhs).derivative_at(n.t0, 1);
                return (eval_node(*n.lhs, t) - n.cached_at_t0) / (t - n.t0);
            }
            case Kind::Product: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
        }
        throw internal_error("eval: bad node kind");
    }

    static double eval_double_node(const Node& n, double t) {
        switch (n.kind) {
            case Kind::Polynomial: return n.p.eval_double(t);
            case Kind::Affine: return n.c.to_double() * t + n.d.to_double();
            case Kind::Mobius:
                return (n.a.to_double() * t + n.b.to_double()) / (n.c.to_double() * t + n.d.to_double());
            case Kind::Compose: return eval_double_node(*n.lhs, eval_double_node(*n.rhs, t));
            case Kind::DiffQuotient: {
                double x0 = n.t0.to_double();
                if (t == x0) return FunctionExpr(n.lhs).derivative_at(n.t0, 1).to_double();
                return (eval_double_node(*n.lhs, t) - n.cached_at_t0.to_double()) / (t - x0);
            }
            case Kind::Product: return eval_double_node(*n.lhs, t) * eval_double_node(*n.rhs, t);
        }
        throw internal_error("eval_double: bad node kind");
    }

    static jets::Jet jet_node(const Node& n, const Rational& x, int m) {
        const std::size_t sz = static_cast<std::size_t>(m) + 1;
        switch (n.kind) {
            case Kind::Polynomial: {
                jets::Jet acc(sz);
                jets::Jet base(sz);  // jet of t at x: x + eps
                base[0] = x;
                if (sz > 1) base[1] = Rational(1);
                const auto& cs = n.p.coeffs();
                for (std::size_t i = cs.size(); i-- > 0;) {
                    acc = jets::mul(acc, base);
                    acc[0] += cs[i];
                }
                return acc;
            }
            case Kind::Affine: {
                jets::Jet j(sz);
                j[0] = n.c * x + n.d;
                if (sz > 1) j[1] = n.c;
                return j;
            }
            case Kind::Mobius: {
                jets::Jet num(sz), den(sz);
                num[0] = n.a * x + n.b;
                den[0] = n.c * x + n.d;
                if (sz > 1) {
                    num[1] = n.a;
                    den[1] = n.c;
                }
                return jets::div(num, den);
            }
            case Kind::Compose: {
                jets::Jet jg = jet_node(*n.rhs, x, m);
                jets::Jet jf = jet_node(*n.lhs, jg[0], m);
                jets::Jet u = jg;
                u[0] = Rational(0);
                jets::Jet acc(sz);
                for (std::size_t i = jf.size(); i-- > 0;) {
                    acc = jets::mul(acc, u);
                    acc[0] += jf[i];
                }
                return acc;
            }
            case Kind::DiffQuotient: {
                if (x == n.t0) {
                    jets::Jet jn = jet_node(*n.lhs, x, m + 1);
                    return jets::Jet(jn.begin() + 1, jn.end());
                }
                jets::Jet jn = jet_node(*n.lhs, x, m);
                jn[0] -= n.cached_at_t0;
                jets::Jet jd(sz);
                jd[0] = x - n.t0;
                if (sz > 1) jd[1] = Rational(1);
                return jets::div(jn, jd);
            }
            case Kind::Product:
                return jets::mul(jet_node(*n.lhs, x, m), jet_node(*n.rhs, x, m));
        }
        throw internal_error("taylor_jet: bad node kind");
    }

    static std::optional<Poly> as_poly_node(const Node& n) {
        switch (n.kind) {
            case Kind::Polynomial: return n.p;
            case Kind::Affine: return Poly{n.d, n.c};
            case Kind::Mobius:
                if (n.c.is_zero()) return Poly{n.b / n.d, n.a / n.d};
                return std::nullopt;
            case Kind::Compose: {
                auto f = as_poly_node(*n.lhs), g = as_poly_node(*n.rhs);
                if (f && g) return f->compose(*g);
                return std::nullopt;
            }
            case Kind::DiffQuotient: {
                auto f = as_poly_node(*n.lhs);
                if (!f) return std::nullopt;
                Poly shifted = *f - Poly::constant(f->eval(n.t0));
                return shifted.divide_linear(n.t0).first;
            }
            case Kind::Product: {
                auto f = as_poly_node(*n.lhs), g = as_poly_node(*n.rhs);
                if (f && g) return *f * *g;
                return std::nullopt;
            }
        }
        throw internal_error("as_poly: bad node kind");
    }

    static std::string print_poly(const Poly& p) {
        if (!p.is_zero() && p.degree() % 2 == 1) {
            int n = (p.degree() + 1) / 2;
            if (p == gn_poly(n)) return "g(" + std::to_string(n) + ")";
        }
        bool monomial_unit = !p.is_zero() && p.leading() == Rational(1);
        for (int k = 0; monomial_unit && k < p.degree(); ++k)
            if (!p.coeff(k).is_zero()) monomial_unit = false;
        if (monomial_unit) return "pow(" + std::to_string(p.degree()) + ")";
        std::string s = "poly(";
        if (p.is_zero()) s += "0";
        for (int k = 0; k <= p.degree(); ++k) {
            if (k > 0) s += ",";
            s += p.coeff(k).str();
        }
        return s + ")";
    }

    static std::string print_node(const Node& n) {
        switch (n.kind) {
            case Kind::Polynomial: return print_poly(n.p);
            case Kind::Affine: return "affine(" + n.c.str() + "," + n.d.str() + ")";
            case Kind::Mobius:
                return "mobius(" + n.a.str() + "," + n.b.str() + "," + n.c.str() + "," + n.d.str() + ")";
            case Kind::Compose: return "compose(" + print_node(*n.lhs) + "," + print_node(*n.rhs) + ")";
            case Kind::DiffQuotient: return "bendat(" + print_node(*n.lhs) + "," + n.t0.str() + ")";
            case Kind::Product: return "prod(" + print_node(*n.lhs) + "," + print_node(*n.rhs) + ")";
        }
        throw internal_error("print: bad node kind");
    }

    static bool same_node(const Node& x, const Node& y) {
        if (x.kind != y.kind) return false;
        switch (x.kind) {
            case Kind::Polynomial: return x.p == y.p;
            case Kind::Affine: return x.c == y.c && x.d == y.d;
            case Kind::Mobius: return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
            case Kind::Compose:
            case Kind::Product: return same_node(*x.lhs, *y.lhs) && same_node(*x.rhs, *y.rhs);
            case Kind::DiffQuotient: return x.t0 == y.t0 && same_node(*x.lhs, *y.lhs);
        }
        return false;
    }

    static void check_poles(const Node& n, const Interval& I) {
        switch (n.kind) {
            case Kind::Mobius: {
                if (!n.c.is_zero()) {
                    Rational pole = -(n.d / n.c);
                    if (I.contains(pole))
                        throw std::invalid_argument("mobius pole " + pole.str() + " lies inside declared domain " + I.str());
                }
                return;
            }
            case Kind::Compose:
                // Only the innermost factor sees the declared domain directly;
                // deeper pole locations depend on the image and are checked
                // dynamically at evaluation time.
                check_poles(*n.rhs, I);
                return;
            case Kind::Product:
                check_poles(*n.lhs, I);
                check_poles(*n.rhs, I);
                return;
            case Kind::DiffQuotient:
                check_poles(*n.lhs, I);
                return;
            default: return;
        }
    }

    std::shared_ptr<const Node> node_;
    std::optional<Interval> domain_;
};

/// (f(x) - f(y))/(x - y) for x != y, f'(x) on the diagonal; exact.
inline Rational divided_difference(const FunctionExpr& f, const Rational& x, const Rational& y) {
    if (x == y) return f.derivative_at(x, 1);
    return (f.eval(x) - f.eval(y)) / (x - y);
}

inline Rational divided_difference(const Poly& p, const Rational& x, const Rational& y) {
    return divided_difference(FunctionExpr::poly(p), x, y);
}

}  // namespace monogap
