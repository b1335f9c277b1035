#pragma once

#include "monogap/errors.hpp"
#include "monogap/function_expr.hpp"
#include "monogap/interval.hpp"
#include "monogap/psd.hpp"
#include "monogap/rng.hpp"
#include "monogap/sym_matrix.hpp"
#include "monogap/symf.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <thread>
#include <vector>

namespace monogap {

/// Symmetric matrix of first divided differences [f; node_i, node_j].
/// Diagonal entries are exact derivatives; repeated nodes are legal.
struct LoewnerMatrix {
    std::vector<Rational> nodes;
    SymMatrix<Rational> entries;
};

inline LoewnerMatrix loewner_matrix(const FunctionExpr& f, const std::vector<Rational>& nodes) {
    if (nodes.empty()) throw std::invalid_argument("loewner_matrix: need at least one node");
    const int n = static_cast<int>(nodes.size());
    auto entries = SymMatrix<Rational>::from_fn(n, [&](int i, int j) {
        return divided_difference(f, nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
    });
    return LoewnerMatrix{nodes, std::move(entries)};
}

/// Exact order-|nodes| positivity test. NotPsd disproves order-n monotonicity
/// on every interval containing the nodes.
inline PsdVerdict order_test(const FunctionExpr& f, const std::vector<Rational>& nodes) {
    return is_psd(loewner_matrix(f, nodes).entries);
}

struct LoewnerWitness {
    std::vector<Rational> nodes;
    PsdVerdict verdict;
};

/// Re-derives everything from the stored nodes; true iff still NotPsd.
inline bool reverify(const LoewnerWitness& w, const FunctionExpr& f) {
    PsdVerdict v = order_test(f, w.nodes);
    return v.verdict == Definiteness::NotPsd;
}

struct ViolationResult {
    std::optional<LoewnerWitness> witness;
    std::uint64_t tuples_tried = 0;
    bool exhausted() const { return !witness.has_value(); }
};

namespace vdetail {

// Half-open/closed window with rational dyadic subdivision.
struct Window {
    Rational lo, hi;
    bool lo_in, hi_in;
    Rational width() const { return hi - lo; }
    bool admits(const Rational& t) const {
        if (t < lo || t > hi) return false;
        if (t == lo && !lo_in) return false;
        if (t == hi && !hi_in) return false;
        return true;
    }
};

inline std::vector<Window> windows_of(const Interval& I) {
    switch (I.kind()) {
        case Interval::Kind::ClosedOpen: return {Window{I.lo(), I.hi(), true, false}};
        case Interval::Kind::OpenClosed: return {Window{I.lo(), I.hi(), false, true}};
        case Interval::Kind::ClosedUnbounded: {
            std::vector<Window> w;
            for (int m = 0; m < 4; ++m) w.push_back(Window{I.lo(), I.lo() + Rational(1 << m), true, false});
            return w;
        }
        case Interval::Kind::UnboundedClosed: {
            std::vector<Window> w;
            for (int m = 0; m < 4; ++m) w.push_back(Window{I.hi() - Rational(1 << m), I.hi(), false, true});
            return w;
        }
    }
    throw internal_error("windows_of: unreachable");
}

// Cached exact values of f and f' at a node, rounded to double once.
class NodeCache {
public:
    explicit NodeCache(const FunctionExpr& f) : f_(&f) {}

    // (f(t), f'(t)) as doubles; nullopt when t hits a pole
    std::optional<std::pair<double, double>> at(const Rational& t) {
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
        std::optional<std::pair<double, double>> val;
        try {
            val = std::make_pair(f_->eval(t).to_double(), f_->derivative_at(t, 1).to_double());
        } catch (const std::domain_error&) {
            val = std::nullopt;
        }
        cache_.emplace(t, val);
        return val;
    }

private:
    const FunctionExpr* f_;
    std::map<Rational, std::optional<std::pair<double, double>>> cache_;
};

// Float Loewner matrix from rational nodes via the cache; nullopt on pole or
// non-finite arithmetic.
inline std::optional<SymMatrixF> loewner_float(NodeCache& cache, const std::vector<Rational>& nodes) {
    const int n = static_cast<int>(nodes.size());
    std::vector<double> ts(static_cast<std::size_t>(n)), fs(static_cast<std::size_t>(n)), ds(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto v = cache.at(nodes[static_cast<std::size_t>(i)]);
        if (!v) return std::nullopt;
        ts[static_cast<std::size_t>(i)] = nodes[static_cast<std::size_t>(i)].to_double();
        fs[static_cast<std::size_t>(i)] = v->first;
        ds[static_cast<std::size_t>(i)] = v->second;
    }
    SymMatrixF m(n);
    for (int i = 0; i < n; ++i) {
        m.set(i, i, ds[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            double dx = ts[static_cast<std::size_t>(i)] - ts[static_cast<std::size_t>(j)];
            double dd = dx == 0.0 ? ds[static_cast<std::size_t>(i)]
                                  : (fs[static_cast<std::size_t>(i)] - fs[static_cast<std::size_t>(j)]) / dx;
            m.set(i, j, dd);
        }
    }
    if (!m.all_finite()) return std::nullopt;
    return m;
}

struct Candidate {
    std::vector<Rational> nodes;
    double score = 0.0;  // float min eigenvalue, filled by the prescreen
};

// Search driver shared by the phases: prescreen a block of tuples in float,
// exact-verify the suspicious ones, keep the best float score for phase C.
class Search {
public:
    Search(const FunctionExpr& f, std::uint64_t budget, int threads)
        : f_(&f), cache_(f), budget_(budget), threads_(std::max(1, threads)) {}

    std::uint64_t used() const { return used_; }
    bool budget_left() const { return used_ < budget_; }
    const std::optional<LoewnerWitness>& witness() const { return witness_; }
    const std::optional<Candidate>& best() const { return best_; }

    // Feed one tuple; returns true when the search should stop (witness found
    // or budget exhausted). Tuples beyond the budget are ignored.
    bool feed(std::vector<Rational> nodes) {
        if (witness_ || !budget_left()) return true;
        ++used_;
        block_.push_back(Candidate{std::move(nodes), 0.0});
        if (block_.size() >= kBlock || !budget_left()) flush();
        return witness_.has_value() || !budget_left();
    }

    void flush() {
        if (block_.empty()) return;
        prescreen();
        // deterministic pick: lowest block index whose exact check fails PSD
        for (std::size_t i = 0; i < block_.size() && !witness_; ++i) {
            Candidate& c = block_[i];
            if (!best_ || c.score < best_->score) best_ = c;
            if (c.score >= threshold_) continue;
            try {
                PsdVerdict v = order_test(*f_, c.nodes);
                if (v.verdict == Definiteness::NotPsd) witness_ = LoewnerWitness{c.nodes, std::move(v)};
            } catch (const std::domain_error&) {
            }
        }
        block_.clear();
    }

private:
    static constexpr std::size_t kBlock = 512;

    void prescreen() {
        auto run = [this](std::size_t begin, std::size_t step) {
            for (std::size_t i = begin; i < block_.size(); i += step) {
                auto m = loewner_float(cache_, block_[i].nodes);
                block_[i].score = m ? min_eigenvalue(*m) : 1.0;
            }
        };
        if (threads_ == 1 || block_.size() < 64) {
            run(0, 1);
            return;
        }
        // node cache is shared; warm it sequentially so workers only read
        for (const auto& c : block_)
            for (const auto& t : c.nodes) cache_.at(t);
        std::vector<std::thread> pool;
        for (int w = 0; w < threads_; ++w) pool.emplace_back(run, static_cast<std::size_t>(w), static_cast<std::size_t>(threads_));
        for (auto& th : pool) th.join();
    }

    const FunctionExpr* f_;
    NodeCache cache_;
    std::uint64_t budget_, used_ = 0;
    int threads_;
    double threshold_ = -1e-13;
    std::vector<Candidate> block_;
    std::optional<LoewnerWitness> witness_;
    std::optional<Candidate> best_;
};

}  // namespace vdetail

/// Deterministic seeded hunt for an order-|tuple| monotonicity violation of f
/// inside I. Phases: arithmetic-progression sweeps on dyadic grids (violations
/// concentrate near the diagonal), general dyadic combinations, perturbation
/// around the most negative float candidate, then random dyadic tuples.
/// Candidates are prescreened in floating point; every returned witness is
/// re-proved in exact arithmetic. Exhausted is inconclusive by design.
inline ViolationResult find_violation(const FunctionExpr& f, int order, const Interval& I, std::uint64_t budget,
                                      std::uint64_t seed, int threads = 1) {
    if (order < 1) throw std::invalid_argument("find_violation: order must be positive");
    if (budget < 1) throw std::invalid_argument("find_violation: budget must be positive");

    auto windows = vdetail::windows_of(I);
    vdetail::Search search(f, budget, threads);

    auto ap_tuple = [&](const vdetail::Window& w, const Rational& start, const Rational& h) -> std::optional<std::vector<Rational>> {
        std::vector<Rational> nodes;
        nodes.reserve(static_cast<std::size_t>(order));
        for (int j = 0; j < order; ++j) {
            Rational t = start + Rational(j) * h;
            if (!w.admits(t) || !I.contains(t)) return std::nullopt;
            nodes.push_back(std::move(t));
        }
        return nodes;
    };

    // Phase A: arithmetic progressions, coarse to fine. Tuples anchored both
    // at grid points and at the right edge (the radius bisection needs
    // violations that live just under the interval's upper end).
    for (int total = 4; total <= 16 && !search.witness() && search.budget_left(); ++total) {
        for (int level = 2; level <= 9; ++level) {
            int spread = total - level;
            if (spread < 2 || spread > 7) continue;
            for (const auto& w : windows) {
                Rational h = w.width() / Rational(1 << spread);
                Rational span = Rational(order - 1) * h;
                for (long k = 0; k <= (1L << level); ++k) {
                    Rational offset = w.width() * Rational(k, 1L << level);
                    if (auto nodes = ap_tuple(w, w.lo + offset, h))
                        if (search.feed(std::move(*nodes))) goto phase_a_done;
                    Rational top_start = w.hi - offset - span;
                    if (!w.hi_in && k == 0) top_start -= h / Rational(16);
                    if (auto nodes = ap_tuple(w, top_start, h))
                        if (search.feed(std::move(*nodes))) goto phase_a_done;
                }
            }
        }
    }
phase_a_done:
    search.flush();

    // Phase A2: clusters hugging the right edge at geometrically fine widths.
    // The radius bisection lives in the regime where the only violations sit
    // in a sliver (radius, c), so the sweep must reach far below the grids.
    for (int s = 2; s <= 20 && !search.witness() && search.budget_left(); ++s) {
        for (const auto& w : windows) {
            Rational h = w.width() * Rational(1, 1L << s);
            Rational span = Rational(order - 1) * h;
            for (int k = 0; k <= 8; ++k) {
                Rational start = w.hi - span - h * Rational(k, 4);
                if (!w.hi_in && k == 0) start -= h / Rational(16);
                if (auto nodes = ap_tuple(w, start, h))
                    if (search.feed(std::move(*nodes))) goto phase_a2_done;
            }
        }
    }
phase_a2_done:
    search.flush();

    // Phase B: all increasing tuples on dyadic grids, lexicographic.
    for (int level = 2; level <= 7 && !search.witness() && search.budget_left(); ++level) {
        for (const auto& w : windows) {
            std::vector<Rational> grid;
            for (long k = 0; k <= (1L << level); ++k) {
                Rational t = w.lo + w.width() * Rational(k, 1L << level);
                if (w.admits(t) && I.contains(t)) grid.push_back(std::move(t));
            }
            if (static_cast<int>(grid.size()) < order) continue;
            std::vector<int> idx(static_cast<std::size_t>(order));
            for (int i = 0; i < order; ++i) idx[static_cast<std::size_t>(i)] = i;
            bool more = true;
            while (more) {
                std::vector<Rational> nodes;
                for (int i : idx) nodes.push_back(grid[static_cast<std::size_t>(i)]);
                if (search.feed(std::move(nodes))) goto phase_b_done;
                // next combination
                int i = order - 1;
                while (i >= 0 && idx[static_cast<std::size_t>(i)] == static_cast<int>(grid.size()) - order + i) --i;
                if (i < 0) {
                    more = false;
                } else {
                    ++idx[static_cast<std::size_t>(i)];
                    for (int j = i + 1; j < order; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
                }
            }
        }
    }
phase_b_done:
    search.flush();

    // Phase C: seeded dyadic perturbation around the best float candidate.
    if (!search.witness() && search.budget_left() && search.best()) {
        Rng rng = Rng::split(seed, 1);
        const Rational scale = windows.front().width();
        std::vector<Rational> base = search.best()->nodes;
        for (int round = 0; round < 64 && !search.witness() && search.budget_left(); ++round) {
            std::vector<Rational> nodes = base;
            int denom_pow = 8 + static_cast<int>(rng.next_below(8));
            for (auto& t : nodes) {
                long off = static_cast<long>(rng.next_below(129)) - 64;
                t += scale * Rational(off, 64L << denom_pow);
            }
            std::sort(nodes.begin(), nodes.end());
            bool ok = std::all_of(nodes.begin(), nodes.end(), [&](const Rational& t) { return I.contains(t); });
            ok = ok && std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
            if (ok) search.feed(std::move(nodes));
            if (round % 16 == 15) {
                search.flush();
                if (search.best()) base = search.best()->nodes;
            }
        }
        search.flush();
    }

    // Phase D: seeded random dyadic tuples until the budget runs out.
    if (!search.witness() && search.budget_left()) {
        Rng rng = Rng::split(seed, 2);
        const long den = 1L << 20;
        while (!search.witness() && search.budget_left()) {
            const auto& w = windows[rng.next_below(windows.size())];
            std::vector<Rational> nodes;
            for (int j = 0; j < order; ++j) {
                long m = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(den - 1))) + 1;
                nodes.push_back(w.lo + w.width() * Rational(m, den));
            }
            std::sort(nodes.begin(), nodes.end());
            if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) continue;
            if (!std::all_of(nodes.begin(), nodes.end(), [&](const Rational& t) { return I.contains(t); })) continue;
            search.feed(std::move(nodes));
        }
        search.flush();
    }

    return ViolationResult{search.witness(), search.used()};
}

/// Upper bound on the order-n monotonicity radius of g_n: bisect on c,
/// hunting violations inside [0, c). The certified bound is the largest node
/// of the returned witness; `value` is +inf (finite=false) when n = 1 or no
/// violation was found up to c = 64.
struct AlphaUpperResult {
    bool finite = false;
    double value = 0.0;          // max witness node when finite
    Rational value_exact;        // same, exact
    std::optional<LoewnerWitness> witness;
    std::uint64_t tuples_tried = 0;
};

inline AlphaUpperResult alpha_loewner(int n, double tol, std::uint64_t budget, std::uint64_t seed = 1, int threads = 1) {
    if (n < 1) throw std::invalid_argument("alpha_loewner: n must be positive");
    if (tol <= 0) throw std::invalid_argument("alpha_loewner: tol must be positive");
    AlphaUpperResult out;
    if (n == 1) return out;  // g_1 = t is monotone of every order: no upper bound

    FunctionExpr f = FunctionExpr::gn(n);
    auto hunt = [&](const Rational& c) {
        auto r = find_violation(f, n, Interval::closed_open(Rational(0), c), budget, seed, threads);
        out.tuples_tried += r.tuples_tried;
        return r;
    };

    Rational c_lo(0), c_hi(1, 2);
    auto first = hunt(c_hi);
    while (first.exhausted() && c_hi < Rational(64)) {
        c_lo = c_hi;
        c_hi = c_hi * Rational(2);
        first = hunt(c_hi);
    }
    if (first.exhausted()) return out;  // honest: no violation found anywhere tried

    out.witness = first.witness;
    while ((c_hi - c_lo).to_double() > tol) {
        Rational mid = (c_lo + c_hi) / Rational(2);
        auto r = hunt(mid);
        if (r.exhausted()) {
            c_lo = mid;
        } else {
            c_hi = mid;
            out.witness = r.witness;
        }
    }
    out.finite = true;
    out.value_exact = *std::max_element(out.witness->nodes.begin(), out.witness->nodes.end());
    out.value = out.value_exact.to_double();
    return out;
}

}  // namespace monogap
