#pragma once

#include "monogap/errors.hpp"
#include "monogap/function_expr.hpp"
#include "monogap/interval.hpp"
#include "monogap/loewner.hpp"
#include "monogap/rng.hpp"
#include "monogap/symf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

namespace monogap {

/// Functional calculus: Q diag(f(lambda_i)) Q^T. When f carries a domain,
/// eigenvalues must sit inside it up to dom_tol.
inline SymMatrixF matrix_apply(const FunctionExpr& f, const SymMatrixF& x, double dom_tol = 1e-9) {
    EigResult e = sym_eig(x);
    std::vector<double> vals(e.lambda.size());
    for (std::size_t i = 0; i < e.lambda.size(); ++i) {
        double lam = e.lambda[i];
        if (f.domain() && !f.domain()->contains_double(lam, dom_tol))
            throw std::domain_error("matrix_apply: eigenvalue outside the function domain");
        double v = f.eval_double(lam);
        if (!std::isfinite(v)) throw std::domain_error("matrix_apply: evaluation blew up near a pole");
        vals[i] = v;
    }
    return assemble_from_eig(e, vals);
}

/// Ordered pair x <= y with both spectra inside I. The eigenvalues of x are
/// drawn uniformly from a centered 90% sub-box (unbounded sides use a width-8
/// surrogate window), y adds a PSD bump sum(s_i v_i v_i^T) whose rank favors 1
/// geometrically; leftover head-room bounds sum(s_i), and a rejection loop
/// re-checks the spectra exactly as sampled.
inline std::pair<SymMatrixF, SymMatrixF> sample_ordered_pair(const Interval& I, int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("sample_ordered_pair: dim must be positive");
    const double surrogate = 8.0;
    double blo, bwidth;  // 90% sub-box
    if (I.bounded_below() && I.bounded_above()) {
        double w = (I.hi() - I.lo()).to_double();
        blo = I.lo().to_double() + 0.05 * w;
        bwidth = 0.9 * w;
    } else if (I.bounded_below()) {
        blo = I.lo().to_double() + 0.05 * surrogate;
        bwidth = 0.9 * surrogate;
    } else {
        blo = I.hi().to_double() - 0.95 * surrogate;
        bwidth = 0.9 * surrogate;
    }
    const double headroom = bwidth / 18.0;  // the 5% margin left above the sub-box

    auto haar_like = [&](int n) {
        // orthonormalize a Gaussian matrix; redraw on (measure-zero) degeneracy
        std::vector<std::vector<double>> q;
        while (static_cast<int>(q.size()) < n) {
            std::vector<double> v(static_cast<std::size_t>(n));
            for (auto& c : v) c = rng.next_gaussian();
            for (const auto& u : q) {
                double dot = 0;
                for (int i = 0; i < n; ++i) dot += u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
                for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= dot * u[static_cast<std::size_t>(i)];
            }
            double nrm = 0;
            for (double c : v) nrm += c * c;
            if (nrm < 1e-12) continue;
            nrm = std::sqrt(nrm);
            for (auto& c : v) c /= nrm;
            q.push_back(std::move(v));
        }
        return q;
    };

    for (int attempt = 0; attempt < 40; ++attempt) {
        double shrink = std::pow(0.5, attempt / 8);  // halve the bump scale every 8 rejections
        std::vector<double> lam(static_cast<std::size_t>(dim));
        for (auto& l : lam) l = blo + bwidth * rng.next_unit();
        auto q = haar_like(dim);
        SymMatrixF x(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                double s = 0;
                for (int k = 0; k < dim; ++k) s += q[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * lam[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                x.set(i, j, s);
            }

        int rank = 1;
        while (rank < dim && rng.next_unit() < 0.35) ++rank;
        SymMatrixF y = x;
        for (int r = 0; r < rank; ++r) {
            std::vector<double> v(static_cast<std::size_t>(dim));
            double nrm = 0;
            for (auto& c : v) {
                c = rng.next_gaussian();
                nrm += c * c;
            }
            nrm = std::sqrt(nrm);
            if (nrm < 1e-12) continue;
            double s = shrink * (headroom / rank) * rng.next_unit();
            for (int i = 0; i < dim; ++i)
                for (int j = i; j < dim; ++j)
                    y.set(i, j, y(i, j) + s * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] / (nrm * nrm));
        }

        bool ok = true;
        for (double l : sym_eig(x).lambda) ok = ok && I.contains_double(l, 1e-12);
        for (double l : sym_eig(y).lambda) ok = ok && I.contains_double(l, 1e-12);
        if (ok) return {x, y};
    }
    throw sampling_exhausted("sample_ordered_pair: interval too small for the perturbation scale");
}

/// A concrete implication failure: x <= y (up to 1e-12) but f(x) <= f(y)
/// fails by a certified margin. Everything needed to re-check is stored.
struct PairWitness {
    SymMatrixF x{1}, y{1};
    FunctionExpr function = FunctionExpr::identity();
    double min_eig_order = 0.0;  // min eigenvalue of y - x
    double min_eig_gap = 0.0;    // min eigenvalue of f(y) - f(x)
    std::vector<double> spectra_x, spectra_y;
    std::uint64_t seed = 0;
    std::uint64_t trial_index = 0;
};

struct PairStats {
    double min_eig_order = 0.0;
    double min_eig_gap = 0.0;
    double fy_norm = 0.0;
    std::vector<double> spectra_x, spectra_y;
};

/// Recompute all witness statistics from the matrices alone.
inline PairStats evaluate_pair(const FunctionExpr& f, const SymMatrixF& x, const SymMatrixF& y) {
    PairStats s;
    s.spectra_x = sym_eig(x).lambda;
    s.spectra_y = sym_eig(y).lambda;
    s.min_eig_order = min_eigenvalue(y - x);
    SymMatrixF fx = matrix_apply(f, x);
    SymMatrixF fy = matrix_apply(f, y);
    s.fy_norm = fy.norm_fro();
    s.min_eig_gap = min_eigenvalue(fy - fx);
    return s;
}

/// True when the pair proves an order violation at the reporting tolerances:
/// y - x is PSD up to 1e-12 while f(y) - f(x) dips below -tol*(1+|f(y)|).
inline bool pair_violates(const PairStats& s, double tol = 1e-8) {
    return s.min_eig_order >= -1e-12 && s.min_eig_gap < -tol * (1.0 + s.fy_norm);
}

struct FalsifyResult {
    std::optional<PairWitness> witness;
    std::uint64_t trials_done = 0;
    bool exhausted() const { return !witness.has_value(); }
};

/// Seeded random hunt for a matrix pair falsifying monotonicity of f on I.
/// Trial k runs on its own split generator, so the outcome is independent of
/// scheduling; with several threads the lowest succeeding trial index wins.
/// Witnesses are accepted only if they re-validate at 10x the reporting
/// tolerance; Exhausted is always inconclusive.
inline FalsifyResult falsify(const FunctionExpr& f, int dim, const Interval& I, std::uint64_t trials,
                             std::uint64_t seed, int threads = 1) {
    if (dim < 1) throw std::invalid_argument("falsify: dim must be positive");
    if (trials < 1) throw std::invalid_argument("falsify: trials must be positive");

    auto attempt = [&](std::uint64_t k) -> std::optional<PairWitness> {
        Rng rng = Rng::split(seed, k);
        try {
            auto [x, y] = sample_ordered_pair(I, dim, rng);
            PairStats s = evaluate_pair(f, x, y);
            if (!pair_violates(s, 1e-8)) return std::nullopt;
            PairStats again = evaluate_pair(f, x, y);  // re-validate from the stored pair
            if (!pair_violates(again, 1e-7)) return std::nullopt;
            PairWitness w;
            w.x = x;
            w.y = y;
            w.function = f;
            w.min_eig_order = again.min_eig_order;
            w.min_eig_gap = again.min_eig_gap;
            w.spectra_x = again.spectra_x;
            w.spectra_y = again.spectra_y;
            w.seed = seed;
            w.trial_index = k;
            return w;
        } catch (const sampling_exhausted&) {
            return std::nullopt;
        } catch (const std::domain_error&) {
            return std::nullopt;
        }
    };

    if (threads <= 1) {
        for (std::uint64_t k = 0; k < trials; ++k)
            if (auto w = attempt(k)) return FalsifyResult{std::move(w), k + 1};
        return FalsifyResult{std::nullopt, trials};
    }

    const std::uint64_t chunk = static_cast<std::uint64_t>(threads) * 64;
    for (std::uint64_t base = 0; base < trials; base += chunk) {
        const std::uint64_t end = std::min(trials, base + chunk);
        std::vector<std::optional<PairWitness>> found(static_cast<std::size_t>(end - base));
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w]() {
                for (std::uint64_t k = base + static_cast<std::uint64_t>(w); k < end; k += static_cast<std::uint64_t>(threads))
                    found[static_cast<std::size_t>(k - base)] = attempt(k);
            });
        for (auto& th : pool) th.join();
        for (std::uint64_t k = base; k < end; ++k)
            if (found[static_cast<std::size_t>(k - base)])
                return FalsifyResult{std::move(found[static_cast<std::size_t>(k - base)]), k + 1};
    }
    return FalsifyResult{std::nullopt, trials};
}

/// Turn an exact Loewner witness into a concrete matrix pair:
/// x = diag(nodes), y = x + eps*uu^T with u the negative direction of the
/// Loewner matrix; eps comes from a grid line search over dyadic scales.
inline PairWitness witness_from_loewner(const LoewnerWitness& w, const FunctionExpr& f) {
    const int n = static_cast<int>(w.nodes.size());
    std::vector<Rational> u_exact;
    if (w.verdict.vector_witness) {
        u_exact = w.verdict.vector_witness->v;
    } else {
        auto vw = negative_quadratic_direction(loewner_matrix(f, w.nodes).entries);
        if (!vw) throw conversion_failed("witness_from_loewner: witness verdict is not NotPsd");
        u_exact = vw->v;
    }
    std::vector<double> u(static_cast<std::size_t>(n));
    double nrm = 0;
    for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] = u_exact[static_cast<std::size_t>(i)].to_double();
        nrm += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0) throw conversion_failed("witness_from_loewner: zero direction");
    for (auto& c : u) c /= nrm;

    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = w.nodes[static_cast<std::size_t>(i)].to_double();
    SymMatrixF x = SymMatrixF::diag(d);

    double span = *std::max_element(d.begin(), d.end()) - *std::min_element(d.begin(), d.end());
    if (span <= 0) span = 1.0;

    std::optional<PairWitness> best;
    for (int k = 0; k <= 30; ++k) {
        double eps = span * std::pow(0.5, k);
        SymMatrixF y = x;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                y.set(i, j, y(i, j) + eps * u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)]);
        try {
            PairStats s = evaluate_pair(f, x, y);
            if (s.min_eig_order < -1e-12 || s.min_eig_gap >= 0.0) continue;
            if (!best || s.min_eig_gap < best->min_eig_gap) {
                PairWitness pw;
                pw.x = x;
                pw.y = y;
                pw.function = f;
                pw.min_eig_order = s.min_eig_order;
                pw.min_eig_gap = s.min_eig_gap;
                pw.spectra_x = s.spectra_x;
                pw.spectra_y = s.spectra_y;
                best = std::move(pw);
            }
        } catch (const std::domain_error&) {
            continue;
        }
    }
    if (!best || best->min_eig_gap >= -1e-13)
        throw conversion_failed("witness_from_loewner: line search found no negative gap");
    return *best;
}

}  // namespace monogap
