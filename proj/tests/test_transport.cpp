#include "monogap/transport.hpp"

#include "monogap/loewner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace monogap;

namespace {

// random rational strictly inside the interval (never on an open endpoint)
Rational rnd_point(std::mt19937_64& rng, const Interval& I) {
    std::uniform_int_distribution<int> num(1, 63);
    Rational frac(num(rng), 64);
    if (I.bounded()) return I.lo() + (I.hi() - I.lo()) * frac;
    if (I.bounded_below()) return I.lo() + frac * Rational(8);
    return I.hi() - frac * Rational(8);
}

std::vector<Interval> family_intervals(bool left_closed) {
    if (left_closed)
        return {Interval::closed_open(Rational(0), Rational(1)), Interval::closed_open(Rational(-3, 2), Rational(7, 3)),
                Interval::closed_unbounded(Rational(0)), Interval::closed_unbounded(Rational(-5, 4))};
    return {Interval::open_closed(Rational(0), Rational(1)), Interval::open_closed(Rational(-2), Rational(5, 7)),
            Interval::unbounded_closed(Rational(0)), Interval::unbounded_closed(Rational(13, 3))};
}

}  // namespace

TEST_CASE("interval_bijection: the three pinned transports") {
    auto b1 = interval_bijection(Interval::closed_unbounded(Rational(0)), Interval::closed_open(Rational(0), Rational(1)));
    CHECK(b1.forward.print() == "mobius(1,0,1,1)");  // t/(1+t)
    CHECK(b1.forward.eval(Rational(1)) == Rational(1, 2));
    CHECK(b1.inverse.eval(Rational(1, 2)) == Rational(1));  // t/(1-t)
    CHECK(b1.inverse.eval(Rational(3, 4)) == Rational(3));

    auto b2 = interval_bijection(Interval::closed_open(Rational(0), Rational(1)), Interval::closed_unbounded(Rational(2)));
    CHECK(b2.forward.eval(Rational(0)) == Rational(2));  // 2 + t/(1-t)
    CHECK(b2.forward.eval(Rational(1, 2)) == Rational(3));
    CHECK(b2.forward.eval(Rational(99, 100)) == Rational(101));

    auto b3 = interval_bijection(Interval::unbounded_closed(Rational(0)), Interval::open_closed(Rational(0), Rational(1)));
    CHECK(b3.forward.eval(Rational(0)) == Rational(1));  // 1/(1-t)
    CHECK(b3.forward.eval(Rational(-3)) == Rational(1, 4));
}

TEST_CASE("interval_bijection: exact round trips on 50 random points, all family pairs") {
    std::mt19937_64 rng(515);
    for (bool left : {true, false}) {
        auto ivals = family_intervals(left);
        for (const auto& src : ivals) {
            for (const auto& dst : ivals) {
                auto b = interval_bijection(src, dst);
                CHECK(b.forward.eval(src.closed_endpoint()) == dst.closed_endpoint());
                for (int k = 0; k < 50; ++k) {
                    Rational p = rnd_point(rng, src);
                    Rational q = b.forward.eval(p);
                    CHECK(dst.contains(q));
                    CHECK(b.inverse.eval(q) == p);
                }
            }
        }
    }
}

TEST_CASE("interval_bijection components are never falsified as matrix monotone") {
    std::mt19937_64 rng(878);
    auto check_monotone = [&](const FunctionExpr& f, const Interval& dom) {
        for (int count = 2; count <= 5; ++count) {
            std::vector<Rational> nodes(static_cast<std::size_t>(count));
            for (auto& t : nodes) t = rnd_point(rng, dom);
            CHECK(order_test(f, nodes).psd());
        }
    };
    for (bool left : {true, false}) {
        auto ivals = family_intervals(left);
        for (std::size_t i = 0; i < ivals.size(); ++i) {
            auto b = interval_bijection(ivals[i], ivals[(i + 1) % ivals.size()]);
            check_monotone(b.forward, b.src);
            check_monotone(b.inverse, b.dst);
        }
    }
}

TEST_CASE("interval_bijection rejects mixed endpoint families") {
    CHECK_THROWS_AS(
        interval_bijection(Interval::closed_open(Rational(0), Rational(1)), Interval::open_closed(Rational(0), Rational(1))),
        unsupported_interval_pair);
    CHECK_THROWS_AS(
        interval_bijection(Interval::unbounded_closed(Rational(0)), Interval::closed_unbounded(Rational(0))),
        unsupported_interval_pair);
}

TEST_CASE("gap_function: transported evaluations are exact") {
    auto f = gap_function(2, Interval::closed_unbounded(Rational(0)), Rational(7, 10));
    CHECK(f.eval(Rational(1)) == Rational(8743, 24000));
    CHECK(f.eval(Rational(0)) == Rational(0));
    CHECK(f.print() == "compose(g(2),mobius(7,0,10,10))");

    // bounded target: the transport is affine, the result a plain polynomial
    auto fb = gap_function(2, Interval::closed_open(Rational(0), Rational(1)), Rational(7, 10));
    auto p = fb.as_poly();
    REQUIRE(p.has_value());
    CHECK(*p == Poly{Rational(0), Rational(7, 10), Rational(0), Rational(343, 3000)});

    // left endpoint always maps to g_n(0) = 0
    for (int n = 1; n <= 4; ++n) {
        Rational ar = default_alpha_rat(n, 1e-9);
        for (const auto& I : {Interval::closed_open(Rational(-2), Rational(3)), Interval::closed_unbounded(Rational(5, 2))}) {
            auto g = gap_function(n, I, ar);
            CHECK(g.eval(I.lo()) == Rational(0));
        }
    }
}

TEST_CASE("gap_function: transported functions still fail order n+1") {
    for (int n = 2; n <= 3; ++n) {
        Rational ar = default_alpha_rat(n, 1e-9);
        for (const auto& I : {Interval::closed_open(Rational(0), Rational(1)), Interval::closed_unbounded(Rational(2))}) {
            auto f = gap_function(n, I, ar);
            auto r = find_violation(f, n + 1, I, 100000, 11);
            REQUIRE(r.witness.has_value());
            CHECK(reverify(*r.witness, f));
            for (const auto& t : r.witness->nodes) CHECK(I.contains(t));
        }
    }
}

TEST_CASE("gap_function rejects bad inputs") {
    Interval I = Interval::closed_unbounded(Rational(0));
    CHECK_THROWS_AS(gap_function(2, Interval::open_closed(Rational(0), Rational(1)), Rational(1, 2)),
                    unsupported_interval_pair);
    CHECK_THROWS_AS(gap_function(2, I, Rational(9, 10)), std::invalid_argument);   // above the certified radius
    CHECK_THROWS_AS(gap_function(2, I, Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(gap_function(2, I, Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("bendat_sherman: synthetic division cases") {
    auto f1 = bendat_sherman(FunctionExpr::power(2), Rational(0));
    CHECK(f1.as_poly().value() == Poly{Rational(0), Rational(1)});

    auto f2 = bendat_sherman(FunctionExpr::power(3), Rational(1));
    CHECK(f2.as_poly().value() == Poly{Rational(1), Rational(1), Rational(1)});

    auto f3 = bendat_sherman(FunctionExpr::gn(2), Rational(0));
    CHECK(f3.as_poly().value() == Poly{Rational(1), Rational(0), Rational(1, 3)});
    CHECK(f3.eval(Rational(0)) == gn_poly(2).derivative(1).eval(Rational(0)));
}

TEST_CASE("bendat_sherman: algebraic identity and derivative anchor, exact") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> num(-40, 40);

    std::vector<std::pair<FunctionExpr, Rational>> cases;
    cases.emplace_back(FunctionExpr::gn(3), Rational(2, 3));
    cases.emplace_back(FunctionExpr::poly(Poly{Rational(5), Rational(-2), Rational(0), Rational(1, 7)}), Rational(-1, 2));
    cases.emplace_back(
        FunctionExpr::compose(FunctionExpr::gn(2), FunctionExpr::mobius(Rational(1), Rational(0), Rational(1), Rational(1))),
        Rational(1));

    for (const auto& [f, t0] : cases) {
        auto F = bendat_sherman(f, t0);
        CHECK(F.eval(t0) == f.derivative_at(t0, 1));
        int done = 0;
        while (done < 50) {
            Rational t(num(rng), 1 + (done % 5));
            if (t == t0 || t == Rational(-1)) continue;  // skip the anchor and the Moebius pole
            CHECK(F.eval(t) * (t - t0) + f.eval(t0) == f.eval(t));
            ++done;
        }
    }
}

TEST_CASE("bendat_sherman rejects anchors at poles or outside the domain") {
    FunctionExpr h = FunctionExpr::mobius(Rational(1), Rational(0), Rational(1), Rational(1));
    CHECK_THROWS_AS(bendat_sherman(h, Rational(-1)), std::domain_error);
    FunctionExpr g = FunctionExpr::gn(2).with_domain(Interval::closed_open(Rational(0), Rational(1)));
    CHECK_THROWS_AS(bendat_sherman(g, Rational(2)), std::domain_error);
}

TEST_CASE("convex_gap_function: polynomial case, endpoint zero, transported case") {
    auto c = convex_gap_function(2, Interval::closed_open(Rational(0), Rational(1)), Rational(7, 10));
    auto p = c.as_poly();
    REQUIRE(p.has_value());
    CHECK(p->degree() == 4);
    CHECK(*p == Poly{Rational(0), Rational(0), Rational(7, 10), Rational(0), Rational(343, 3000)});

    auto cu = convex_gap_function(2, Interval::closed_unbounded(Rational(0)), Rational(7, 10));
    CHECK(cu.eval(Rational(0)) == Rational(0));
    CHECK(cu.eval(Rational(1)) == Rational(8743, 24000));  // t * f_2(t) at t = 1

    for (int n = 2; n <= 3; ++n) {
        Interval I = Interval::closed_open(Rational(-1, 2), Rational(2));
        auto cc = convex_gap_function(n, I, default_alpha_rat(n, 1e-9));
        CHECK(cc.eval(I.lo()) == Rational(0));
    }

    CHECK_THROWS_AS(convex_gap_function(2, Interval::open_closed(Rational(0), Rational(1)), Rational(1, 2)),
                    unsupported_interval_pair);
    CHECK_THROWS_AS(convex_gap_function(2, Interval::closed_unbounded(Rational(0)), Rational(9, 10)),
                    std::invalid_argument);
}

TEST_CASE("convex gap equals the monotone gap rebuilt through the transform") {
    // applying the difference-quotient transform to the convex gap recovers
    // the monotone gap: F(t) = (f(t) - f(t0))/(t - t0) with f = convex gap
    Interval I = Interval::closed_open(Rational(0), Rational(1));
    Rational ar(7, 10);
    auto mono = gap_function(2, I, ar);
    auto convex = convex_gap_function(2, I, ar);
    auto back = bendat_sherman(convex, I.lo());
    for (const auto& t : I.probe_points(20)) CHECK(back.eval(t) == mono.eval(t));
}
