#pragma once

#include "monogap/errors.hpp"
#include "monogap/function_expr.hpp"
#include "monogap/interval.hpp"
#include "monogap/loewner.hpp"
#include "monogap/poly.hpp"
#include "monogap/psd.hpp"
#include "monogap/rational.hpp"
#include "monogap/roots.hpp"
#include "monogap/sym_matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace monogap {

/// Moments of the uniform measure on [-1,1]: (k+1)^-1 for even k, 0 for odd.
inline Rational moment_b(int k) {
    if (k < 0) throw std::invalid_argument("moment_b: k must be non-negative");
    return k % 2 == 0 ? Rational(1, k + 1) : Rational(0);
}

/// n x n Hankel matrix (b_{i+j-2}); the value of the derivative matrix of g_n
/// at t = 0.
inline SymMatrix<Rational> hankel_at_zero(int n) {
    if (n < 1) throw std::invalid_argument("hankel_at_zero: n must be positive");
    return SymMatrix<Rational>::from_fn(n, [](int i, int j) { return moment_b(i + j); });
}

/// Matrix of scaled derivatives: entry(i,j) = f^(i+j-1)(t)/(i+j-1)! as an
/// exact polynomial (1-based index convention in the math, 0-based in code).
struct DobschMatrix {
    int n = 0;
    Poly f;
    SymMatrix<Poly> entries;
};

inline DobschMatrix dobsch_matrix(const Poly& f, int n) {
    if (n < 1) throw std::invalid_argument("dobsch_matrix: n must be positive");
    Rational factorial(1);
    std::vector<Poly> scaled;  // scaled[m] = f^(m+1)/(m+1)!
    scaled.reserve(static_cast<std::size_t>(2 * n));
    Poly d = f;
    for (int m = 1; m <= 2 * n - 1; ++m) {
        d = d.derivative(1);
        factorial *= Rational(m);
        scaled.push_back(d * (Rational(1) / factorial));
    }
    auto entries = SymMatrix<Poly>::from_fn(n, [&](int i, int j) { return scaled[static_cast<std::size_t>(i + j)]; });
    return DobschMatrix{n, f, std::move(entries)};
}

/// The 3x3 block of the order-(n+1) derivative matrix of g_n on its last
/// three indices; its determinant is the constant -(2n-1)^-3.
inline SymMatrix<Poly> trailing_block(int n) {
    if (n < 2) throw std::invalid_argument("trailing_block: n must be >= 2");
    auto full = dobsch_matrix(gn_poly(n), n + 1);
    return full.entries.principal_submatrix({n - 2, n - 1, n});
}

inline Poly trailing_block_det(int n) {
    Poly det = det_bareiss(trailing_block(n));
    Poly expected = Poly::constant(Rational(-1, (2 * n - 1)) * Rational(1, (2 * n - 1)) * Rational(1, (2 * n - 1)));
    if (!(det == expected)) throw internal_error("trailing_block_det: determinant drifted from -(2n-1)^-3");
    return det;
}

/// Leading principal minors of the order-n derivative matrix of g_n, as exact
/// polynomials in t.
inline std::vector<Poly> dobsch_minor_polys(int n) { return leading_minor_polys(dobsch_matrix(gn_poly(n), n).entries); }

/// Monotonicity radius, Dobsch side: all n leading minors positive on [0, a).
struct AlphaResult {
    bool finite = false;
    double value = 0.0;                   // refined to the requested tol when finite
    std::optional<RootBracket> bracket;   // exact bracket of the critical root
    int minor_index = 0;                  // 1-based index of the minor that vanishes first
};

inline AlphaResult alpha_dobsch(int n, double tol, const std::vector<Poly>* minors_hint = nullptr) {
    if (n < 1) throw std::invalid_argument("alpha_dobsch: n must be positive");
    if (tol <= 0) throw std::invalid_argument("alpha_dobsch: tol must be positive");
    std::vector<Poly> own;
    if (!minors_hint) {
        own = dobsch_minor_polys(n);
        minors_hint = &own;
    }
    const auto& minors = *minors_hint;
    AlphaResult out;
    for (int k = 0; k < n; ++k) {
        auto brs = isolate_positive_roots(minors[static_cast<std::size_t>(k)]);
        if (brs.empty()) continue;
        double v = refine_root(minors[static_cast<std::size_t>(k)], brs.front(), tol);
        if (!out.finite || v < out.value) {
            out.finite = true;
            out.value = v;
            out.minor_index = k + 1;
            // tighten the stored bracket so reports carry a sharp certificate
            Rational w(1, 1);
            while (w.to_double() > tol / 4.0) w = w / Rational(2);
            out.bracket = tighten_bracket(minors[static_cast<std::size_t>(k)], brs.front(), w);
        }
    }
    return out;
}

/// Exact test that the minors stay positive on [0, q): admissible radii are
/// exactly the rationals 0 < q <= alpha.
inline bool alpha_rat_admissible(int n, const Rational& q, const std::vector<Poly>* minors_hint = nullptr) {
    if (q.sign() <= 0) return false;
    std::vector<Poly> own;
    if (!minors_hint) {
        own = dobsch_minor_polys(n);
        minors_hint = &own;
    }
    for (const auto& p : *minors_hint) {
        if (p.eval(Rational(0)).sign() <= 0) return false;
        if (count_roots_open(p, Rational(0), q) != 0) return false;
    }
    return true;
}

/// Largest k/64 that is certified below the radius (1 when the radius is
/// infinite). Exact admissibility is re-checked, so float drift cannot leak.
inline Rational default_alpha_rat(int n, double tol = 1e-9, const std::vector<Poly>* minors_hint = nullptr) {
    std::vector<Poly> own;
    if (!minors_hint) {
        own = dobsch_minor_polys(n);
        minors_hint = &own;
    }
    AlphaResult a = alpha_dobsch(n, tol, minors_hint);
    if (!a.finite) return Rational(1);
    long k = static_cast<long>((a.value - tol) * 64.0);
    while (k >= 1 && !alpha_rat_admissible(n, Rational(k, 64), minors_hint)) --k;
    if (k >= 1) return Rational(k, 64);
    // radius below 1/64: fall back to a dyadic under-approximation
    Rational q(1, 64);
    while (q.sign() > 0 && !alpha_rat_admissible(n, q, minors_hint)) q = q / Rational(2);
    if (q.sign() <= 0) throw internal_error("default_alpha_rat: no admissible radius found");
    return q;
}

/// Everything the order-n gap claim needs, assembled from exact sub-checks:
/// the moment matrix at 0 is PD (monotonicity at the left end), the radius is
/// certified by minor root brackets, the trailing 3x3 block has constant
/// negative determinant (order n+1 fails on every subinterval), and the
/// classical sufficiency hypothesis holds on [0, alpha_rat).
struct GapCertificate {
    int n = 0;
    PsdVerdict hankel_pd;
    AlphaResult alpha;
    Rational alpha_rat;                              // certified rational radius used below
    std::optional<Poly> trailing_det;                // n >= 2
    std::optional<PsdVerdict> trailing_not_psd;      // trailing block at t = 0
    Rational trailing_sample_t;                      // the t used above (0)
    std::optional<LoewnerWitness> square_witness;    // n = 1: order-2 failure of t^2
    bool hypothesis_ok = false;
    std::optional<Rational> hypothesis_witness;      // point where the hypothesis fails
    bool valid = false;
    std::string failing_component;                   // empty when valid
};

inline GapCertificate gap_certificate(int n) {
    if (n < 1) throw std::invalid_argument("gap_certificate: n must be positive");
    GapCertificate cert;
    cert.n = n;
    cert.hankel_pd = is_pd(hankel_at_zero(n));
    auto minors = dobsch_minor_polys(n);
    cert.alpha = alpha_dobsch(n, 1e-8, &minors);
    cert.alpha_rat = default_alpha_rat(n, 1e-9, &minors);

    auto fail = [&](const std::string& what) {
        if (cert.failing_component.empty()) cert.failing_component = what;
    };

    if (cert.hankel_pd.verdict != Definiteness::PositiveDefinite) fail("hankel_pd");

    if (n >= 2) {
        cert.trailing_det = trailing_block_det(n);
        Poly expected = Poly::constant(Rational(-1) / (Rational(2 * n - 1) * Rational(2 * n - 1) * Rational(2 * n - 1)));
        if (!(*cert.trailing_det == expected)) fail("trailing_det");
        cert.trailing_sample_t = Rational(0);
        cert.trailing_not_psd = is_psd(specialize(trailing_block(n), cert.trailing_sample_t));
        if (cert.trailing_not_psd->verdict != Definiteness::NotPsd) fail("trailing_not_psd");
    } else {
        // order 1: the square function separates order 1 from order 2; a
        // two-node exact witness plays the role of the trailing block
        FunctionExpr sq = FunctionExpr::power(2);
        std::vector<Rational> nodes{Rational(1, 2), Rational(1)};
        PsdVerdict v = order_test(sq, nodes);
        cert.square_witness = LoewnerWitness{nodes, v};
        if (v.verdict != Definiteness::NotPsd) fail("square_witness");
    }

    // hypothesis: g_n^(2n-3) positive and convex on (0, alpha_rat)
    if (n >= 2) {
        Poly p = gn_poly(n).derivative(2 * n - 3);
        Interval window = Interval::closed_open(Rational(0), cert.alpha_rat);
        auto pos = poly_nonneg_on(p, window);
        auto convex = poly_nonneg_on(p.derivative(2), window);
        bool strict = p.eval(Rational(0)).sign() > 0 && count_roots_open(p, Rational(0), cert.alpha_rat) == 0;
        cert.hypothesis_ok = pos.nonneg && convex.nonneg && strict;
        if (!pos.nonneg) cert.hypothesis_witness = pos.witness;
        if (!convex.nonneg && !cert.hypothesis_witness) cert.hypothesis_witness = convex.witness;
    } else {
        cert.hypothesis_ok = true;  // g_1 = t: nothing to check at order 1
    }
    if (!cert.hypothesis_ok) fail("hypothesis");

    if (!alpha_rat_admissible(n, cert.alpha_rat, &minors)) fail("alpha_rat");

    cert.valid = cert.failing_component.empty();
    return cert;
}

}  // namespace monogap
