#include "monogap/dobsch.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace monogap;

namespace {

Poly poly_from(std::initializer_list<Rational> cs) { return Poly(std::vector<Rational>(cs)); }

// independent moment oracle: (1/2) * integral of t^k over [-1,1]
Rational half_integral_pow(int k) {
    if (k % 2 == 1) return Rational(0);
    return Rational(1, k + 1);
}

}  // namespace

TEST_CASE("moment_b matches the half-integral of t^k over [-1,1]") {
    CHECK(moment_b(0) == Rational(1));
    CHECK(moment_b(3) == Rational(0));
    CHECK(moment_b(4) == Rational(1, 5));
    for (int k = 0; k <= 25; ++k) CHECK(moment_b(k) == half_integral_pow(k));
    CHECK_THROWS_AS(moment_b(-1), std::invalid_argument);
}

TEST_CASE("hankel_at_zero: pinned small cases") {
    auto h1 = hankel_at_zero(1);
    REQUIRE(h1.order() == 1);
    CHECK(h1(0, 0) == Rational(1));

    auto h2 = hankel_at_zero(2);
    CHECK(h2(0, 0) == Rational(1));
    CHECK(h2(0, 1) == Rational(0));
    CHECK(h2(1, 1) == Rational(1, 3));

    auto h3 = hankel_at_zero(3);
    CHECK(h3(0, 0) == Rational(1));
    CHECK(h3(0, 1) == Rational(0));
    CHECK(h3(0, 2) == Rational(1, 3));
    CHECK(h3(1, 1) == Rational(1, 3));
    CHECK(h3(1, 2) == Rational(0));
    CHECK(h3(2, 2) == Rational(1, 5));
}

TEST_CASE("hankel_at_zero equals the derivative matrix of g_n specialized at 0") {
    for (int n = 1; n <= 8; ++n) {
        auto h = hankel_at_zero(n);
        auto m = specialize(dobsch_matrix(gn_poly(n), n).entries, Rational(0));
        REQUIRE(h.order() == m.order());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(h(i, j) == m(i, j));
    }
}

TEST_CASE("hankel_at_zero is positive definite up to n = 8") {
    for (int n = 1; n <= 8; ++n) {
        auto v = is_pd(hankel_at_zero(n));
        CHECK(v.verdict == Definiteness::PositiveDefinite);
        REQUIRE(static_cast<int>(v.leading_minors.size()) == n);
        for (const auto& d : v.leading_minors) CHECK(d.sign() > 0);
    }
    // pinned minors for n = 3
    auto v3 = is_pd(hankel_at_zero(3));
    CHECK(v3.leading_minors[0] == Rational(1));
    CHECK(v3.leading_minors[1] == Rational(1, 3));
    CHECK(v3.leading_minors[2] == Rational(4, 135));
}

TEST_CASE("hankel quadratic form equals the half-integral of the squared polynomial") {
    std::mt19937_64 rng(411);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int n = 1; n <= 6; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<Rational> c(static_cast<std::size_t>(n));
            for (auto& x : c) x = Rational(d(rng), 1 + std::abs(d(rng)) % 3);
            Poly p{std::vector<Rational>(c)};
            Poly sq = p * p;
            Rational integral;
            for (int k = 0; k <= sq.degree(); ++k) integral += sq.coeff(k) * half_integral_pow(k);

            auto h = hankel_at_zero(n);
            Rational form;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) form += c[static_cast<std::size_t>(i)] * h(i, j) * c[static_cast<std::size_t>(j)];
            CHECK(form == integral);
        }
    }
}

TEST_CASE("dobsch_matrix: worked example for g_2 and degenerate cases") {
    auto m = dobsch_matrix(gn_poly(2), 2);
    CHECK(m.entries(0, 0) == poly_from({Rational(1), Rational(0), Rational(1)}));  // 1 + t^2
    CHECK(m.entries(0, 1) == poly_from({Rational(0), Rational(1)}));               // t
    CHECK(m.entries(1, 1) == Poly::constant(Rational(1, 3)));

    auto m1 = dobsch_matrix(gn_poly(1), 1);
    CHECK(m1.entries(0, 0) == Poly::constant(Rational(1)));

    CHECK_THROWS_AS(dobsch_matrix(gn_poly(2), 0), std::invalid_argument);
}

TEST_CASE("dobsch_matrix entries have the expected degrees") {
    for (int n = 2; n <= 6; ++n) {
        auto m = dobsch_matrix(gn_poly(n), n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int expected = 2 * n - 1 - (i + j + 1);
                CHECK(m.entries(i, j).degree() <= std::max(expected, 0));
            }
    }
}

TEST_CASE("trailing_block: closed form across n") {
    auto b2 = trailing_block(2);
    CHECK(b2(0, 0) == poly_from({Rational(1), Rational(0), Rational(1)}));
    CHECK(b2(0, 1) == poly_from({Rational(0), Rational(1)}));
    CHECK(b2(0, 2) == Poly::constant(Rational(1, 3)));
    CHECK(b2(1, 1) == Poly::constant(Rational(1, 3)));
    CHECK(b2(1, 2) == Poly());
    CHECK(b2(2, 2) == Poly());

    auto b3 = trailing_block(3);
    CHECK(b3(0, 0) == poly_from({Rational(1, 3), Rational(0), Rational(2)}));
    CHECK(b3(0, 1) == poly_from({Rational(0), Rational(1)}));
    CHECK(b3(0, 2) == Poly::constant(Rational(1, 5)));
    CHECK(b3(1, 1) == Poly::constant(Rational(1, 5)));

    for (int n = 2; n <= 8; ++n) {
        auto b = trailing_block(n);
        REQUIRE(b.order() == 3);
        CHECK(b(0, 0) == poly_from({Rational(1, 2 * n - 3), Rational(0), Rational(n - 1)}));
        CHECK(b(0, 1) == poly_from({Rational(0), Rational(1)}));
        CHECK(b(0, 2) == Poly::constant(Rational(1, 2 * n - 1)));
        CHECK(b(1, 1) == Poly::constant(Rational(1, 2 * n - 1)));
        CHECK(b(1, 2) == Poly());
        CHECK(b(2, 2) == Poly());
    }

    CHECK_THROWS_AS(trailing_block(1), std::invalid_argument);
}

TEST_CASE("trailing_block_det is the constant -(2n-1)^-3") {
    for (int n = 2; n <= 8; ++n) {
        Poly det = trailing_block_det(n);
        CHECK(det.degree() <= 0);
        Rational odd(2 * n - 1);
        CHECK(det == Poly::constant(Rational(-1) / (odd * odd * odd)));
    }
    CHECK(trailing_block_det(2) == Poly::constant(Rational(-1, 27)));
    CHECK(trailing_block_det(3) == Poly::constant(Rational(-1, 125)));
    CHECK(trailing_block_det(5) == Poly::constant(Rational(-1, 729)));
}

TEST_CASE("alpha_dobsch: n = 1 has no finite radius") {
    auto a = alpha_dobsch(1, 1e-8);
    CHECK_FALSE(a.finite);
}

TEST_CASE("alpha_dobsch: n = 2 pins the root of 1 - 2t^2") {
    auto a = alpha_dobsch(2, 1e-8);
    REQUIRE(a.finite);
    CHECK(a.minor_index == 2);
    CHECK(std::abs(a.value - std::sqrt(0.5)) < 1e-7);
    REQUIRE(a.bracket.has_value());
    // the bracket is an exact certificate: det changes sign across it
    Poly det2 = dobsch_minor_polys(2)[1];
    CHECK(det2.eval(a.bracket->lo).sign() > 0);
    CHECK(det2.eval(a.bracket->hi).sign() < 0);
}

TEST_CASE("alpha_dobsch: self-consistency for n = 3..6 (exact on both sides)") {
    for (int n = 3; n <= 6; ++n) {
        auto minors = dobsch_minor_polys(n);
        auto a = alpha_dobsch(n, 1e-6, &minors);
        REQUIRE(a.finite);
        REQUIRE(a.bracket.has_value());
        CHECK((a.bracket->hi - a.bracket->lo).to_double() <= 1e-6 * 1.01);

        // strictly below the certified root every leading minor is positive,
        // hence the specialized matrix is exactly PD
        for (int k = 1; k <= 100; ++k) {
            Rational t = a.bracket->lo * Rational(k, 100);
            bool all_pos = true;
            for (const auto& m : minors) all_pos = all_pos && m.eval(t).sign() > 0;
            CHECK(all_pos);
        }
        auto v = is_pd(specialize(dobsch_matrix(gn_poly(n), n).entries, a.bracket->lo * Rational(99, 100)));
        CHECK(v.verdict == Definiteness::PositiveDefinite);

        // just above it the critical minor is exactly negative
        CHECK(minors[static_cast<std::size_t>(a.minor_index - 1)].eval(a.bracket->hi).sign() < 0);
    }
}

TEST_CASE("alpha_dobsch input validation") {
    CHECK_THROWS_AS(alpha_dobsch(0, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(alpha_dobsch(2, 0.0), std::invalid_argument);
}

TEST_CASE("alpha_rat_admissible and the default rational radius") {
    // 45/64 < 1/sqrt(2) < 46/64
    CHECK(alpha_rat_admissible(2, Rational(45, 64)));
    CHECK_FALSE(alpha_rat_admissible(2, Rational(46, 64)));
    CHECK_FALSE(alpha_rat_admissible(2, Rational(0)));
    CHECK_FALSE(alpha_rat_admissible(2, Rational(-1, 2)));

    for (int n = 1; n <= 6; ++n) {
        Rational q = default_alpha_rat(n, 1e-9);
        CHECK(q.sign() > 0);
        CHECK(alpha_rat_admissible(n, q));
        auto a = alpha_dobsch(n, 1e-9);
        if (a.finite) CHECK(q.to_double() < a.value + 1e-8);
    }
}

TEST_CASE("gap_certificate: n = 2 assembles the worked examples") {
    auto c = gap_certificate(2);
    CHECK(c.valid);
    CHECK(c.failing_component.empty());
    CHECK(c.hankel_pd.verdict == Definiteness::PositiveDefinite);
    REQUIRE(c.hankel_pd.leading_minors.size() == 2);
    CHECK(c.hankel_pd.leading_minors[0] == Rational(1));
    CHECK(c.hankel_pd.leading_minors[1] == Rational(1, 3));
    CHECK(std::abs(c.alpha.value - std::sqrt(0.5)) < 1e-7);
    REQUIRE(c.trailing_det.has_value());
    CHECK(*c.trailing_det == Poly::constant(Rational(-1, 27)));
    REQUIRE(c.trailing_not_psd.has_value());
    CHECK(c.trailing_not_psd->verdict == Definiteness::NotPsd);
    CHECK(c.hypothesis_ok);
    CHECK(alpha_rat_admissible(2, c.alpha_rat));
}

TEST_CASE("gap_certificate: n = 3 and n = 4 are valid with pinned dets") {
    auto c3 = gap_certificate(3);
    CHECK(c3.valid);
    REQUIRE(c3.trailing_det.has_value());
    CHECK(*c3.trailing_det == Poly::constant(Rational(-1, 125)));

    auto c4 = gap_certificate(4);
    CHECK(c4.valid);
    REQUIRE(c4.trailing_det.has_value());
    CHECK(*c4.trailing_det == Poly::constant(Rational(-1, 343)));
}

TEST_CASE("gap_certificate: n = 1 uses a two-node square-function witness") {
    auto c = gap_certificate(1);
    CHECK(c.valid);
    CHECK_FALSE(c.alpha.finite);
    CHECK_FALSE(c.trailing_det.has_value());
    REQUIRE(c.square_witness.has_value());
    CHECK(c.square_witness->verdict.verdict == Definiteness::NotPsd);
    // the witness proves order-2 failure of t^2: re-derive it from scratch
    CHECK(reverify(*c.square_witness, FunctionExpr::power(2)));
}

TEST_CASE("gap_certificate rejects n = 0") {
    CHECK_THROWS_AS(gap_certificate(0), std::invalid_argument);
}
