#pragma once

#include "monogap/dobsch.hpp"
#include "monogap/errors.hpp"
#include "monogap/function_expr.hpp"
#include "monogap/interval.hpp"

#include <utility>

namespace monogap {

namespace tdetail {

// Moebius maps as 2x2 rational matrices: [[a,b],[c,d]] acts as (at+b)/(ct+d).
// Composition is matrix product, inversion is the adjugate; both keep the
// determinant sign, which is the monotonicity certificate.
struct Mat2 {
    Rational a, b, c, d;
    Rational det() const { return a * d - b * c; }
    Mat2 inverse() const { return Mat2{d, -b, -c, a}; }
    friend Mat2 operator*(const Mat2& m, const Mat2& n) {
        return Mat2{m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
};

inline bool left_closed_family(const Interval& I) {
    return I.kind() == Interval::Kind::ClosedOpen || I.kind() == Interval::Kind::ClosedUnbounded;
}

// Order-preserving map of I onto the unit interval of its family:
// [a,b) or [a,inf) onto [0,1);  (a,b] or (-inf,b] onto (0,1].
inline Mat2 to_unit(const Interval& I) {
    switch (I.kind()) {
        case Interval::Kind::ClosedOpen:
        case Interval::Kind::OpenClosed:
            return Mat2{Rational(1), -I.lo(), Rational(0), I.hi() - I.lo()};
        case Interval::Kind::ClosedUnbounded:
            // (t-a)/(t-a+1)
            return Mat2{Rational(1), -I.lo(), Rational(1), Rational(1) - I.lo()};
        case Interval::Kind::UnboundedClosed:
            // 1/(1+b-t)
            return Mat2{Rational(0), Rational(1), Rational(-1), Rational(1) + I.hi()};
    }
    throw internal_error("to_unit: unreachable");
}

inline FunctionExpr from_mat(const Mat2& m) {
    if (m.det().sign() <= 0) throw internal_error("from_mat: transport atom lost its orientation");
    if (m.c.is_zero()) return FunctionExpr::affine(m.a / m.d, m.b / m.d);
    return FunctionExpr::mobius(m.a, m.b, m.c, m.d);
}

}  // namespace tdetail

/// An order-preserving bijection src -> dst together with its exact inverse.
/// Both directions are single affine or Moebius maps with positive
/// determinant (so each is operator monotone on its interval), and the pair
/// is verified exactly at 20 probe points of each side on construction.
struct BijectionPair {
    FunctionExpr forward;
    FunctionExpr inverse;
    Interval src;
    Interval dst;
};

inline BijectionPair interval_bijection(const Interval& src, const Interval& dst) {
    using namespace tdetail;
    if (left_closed_family(src) != left_closed_family(dst))
        throw unsupported_interval_pair(
            "no monotone bijection with monotone inverse connects a left-closed interval with a right-closed one: "
            "such a map would have to swap which endpoint is attained");
    Mat2 fwd = to_unit(dst).inverse() * to_unit(src);
    Mat2 inv = to_unit(src).inverse() * to_unit(dst);
    BijectionPair out{from_mat(fwd).with_domain(src), from_mat(inv).with_domain(dst), src, dst};

    // construction-time proof: exact round trips and endpoint bookkeeping
    for (const Rational& p : src.probe_points(20)) {
        Rational q = out.forward.eval(p);
        if (!dst.contains(q) || out.inverse.eval(q) != p) throw internal_error("interval_bijection: forward round trip failed");
    }
    for (const Rational& q : dst.probe_points(20)) {
        Rational p = out.inverse.eval(q);
        if (!src.contains(p) || out.forward.eval(p) != q) throw internal_error("interval_bijection: inverse round trip failed");
    }
    if (out.forward.eval(src.closed_endpoint()) != dst.closed_endpoint())
        throw internal_error("interval_bijection: closed endpoints do not correspond");
    return out;
}

/// The order-n-but-not-(n+1) monotone function transported from [0, alpha)
/// onto I: g_n composed with the inverse transport map. alpha_rat must be a
/// certified rational radius, i.e. every leading minor of the derivative
/// matrix of g_n stays positive on [0, alpha_rat); this is re-checked exactly.
inline FunctionExpr gap_function(int n, const Interval& I, const Rational& alpha_rat) {
    if (!tdetail::left_closed_family(I))
        throw unsupported_interval_pair("gap_function: the construction transports [0, alpha), so the target must be left-closed");
    if (!alpha_rat_admissible(n, alpha_rat))
        throw std::invalid_argument("gap_function: alpha_rat is not a certified radius for this n");
    BijectionPair b = interval_bijection(Interval::closed_open(Rational(0), alpha_rat), I);
    FunctionExpr f = FunctionExpr::compose(FunctionExpr::gn(n), b.inverse);
    if (auto p = f.as_poly()) return FunctionExpr::poly(std::move(*p)).with_domain(I);
    return f.with_domain(I);
}

/// Difference-quotient transform F(t) = (f(t) - f(t0))/(t - t0) with the
/// removable singularity filled by f'(t0). Polynomials divide synthetically
/// into polynomials; anything else becomes an explicit quotient node.
inline FunctionExpr bendat_sherman(const FunctionExpr& f, const Rational& t0) {
    if (f.domain() && !f.domain()->contains(t0))
        throw std::domain_error("bendat_sherman: anchor outside the function domain");
    if (auto p = f.as_poly()) {
        auto [q, rem] = p->divide_linear(t0);
        (void)rem;  // the remainder is f(t0) by construction
        FunctionExpr out = FunctionExpr::poly(std::move(q));
        return f.domain() ? out.with_domain(*f.domain()) : out;
    }
    FunctionExpr out = FunctionExpr::diff_quotient(f, t0);
    return f.domain() ? out.with_domain(*f.domain()) : out;
}

/// The order-n-but-not-(n+1) matrix convex function on I: F(t)*(t - t0) with
/// F the transported gap function and t0 the closed left endpoint of I.
/// Collapses to an explicit polynomial when the transport map is affine.
inline FunctionExpr convex_gap_function(int n, const Interval& I, const Rational& alpha_rat) {
    FunctionExpr F = gap_function(n, I, alpha_rat);
    Rational t0 = I.lo();
    FunctionExpr prod = FunctionExpr::product(F, FunctionExpr::poly(Poly{-t0, Rational(1)}));
    if (auto p = prod.as_poly()) return FunctionExpr::poly(std::move(*p)).with_domain(I);
    return prod.with_domain(I);
}

}  // namespace monogap
