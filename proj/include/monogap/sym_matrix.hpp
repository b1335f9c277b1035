#pragma once

#include "monogap/poly.hpp"
#include "monogap/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace monogap {

namespace entry {
// The exact scalar kinds a SymMatrix can hold. Both are integral domains with
// exact division where divisibility is guaranteed (Bareiss needs only that).
inline bool is_zero(const Rational& v) { return v.is_zero(); }
inline bool is_zero(const Poly& v) { return v.is_zero(); }
inline Rational one(const Rational*) { return Rational(1); }
inline Poly one(const Poly*) { return Poly::constant(Rational(1)); }
inline Rational exact_div(const Rational& a, const Rational& b) { return a / b; }
inline Poly exact_div(const Poly& a, const Poly& b) { return a.exact_div(b); }
}  // namespace entry

/// Dense symmetric matrix over an exact scalar (Rational or Poly). set()
/// writes both mirror entries, so symmetry is an invariant, not a convention.
template <class T>
class SymMatrix {
public:
    explicit SymMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        if (n <= 0) throw std::invalid_argument("SymMatrix: order must be positive");
    }

    template <class F>
    static SymMatrix from_fn(int n, F&& f) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m.set(i, j, f(i, j));
        return m;
    }

    static SymMatrix identity(int n) {
        return from_fn(n, [](int i, int j) { return i == j ? entry::one(static_cast<const T*>(nullptr)) : T(); });
    }

    int order() const { return n_; }
    const T& operator()(int i, int j) const { return a_[idx(i, j)]; }
    void set(int i, int j, T v) {
        a_[idx(j, i)] = v;
        a_[idx(i, j)] = std::move(v);
    }

    SymMatrix principal_submatrix(const std::vector<int>& indices) const {
        const int k = static_cast<int>(indices.size());
        if (k == 0) throw std::invalid_argument("principal_submatrix: empty index set");
        for (int i : indices)
            if (i < 0 || i >= n_) throw std::invalid_argument("principal_submatrix: index out of range");
        SymMatrix m(k);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) m.set(i, j, (*this)(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]));
        return m;
    }

    SymMatrix leading(int k) const {
        if (k <= 0 || k > n_) throw std::invalid_argument("leading: order out of range");
        SymMatrix m(k);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) m.set(i, j, (*this)(i, j));
        return m;
    }

    friend bool operator==(const SymMatrix& x, const SymMatrix& y) { return x.n_ == y.n_ && x.a_ == y.a_; }

private:
    std::size_t idx(int i, int j) const {
        if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("SymMatrix: index out of range");
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }
    int n_;
    std::vector<T> a_;
};

/// Exact determinant by fraction-free (Bareiss) elimination with row
/// pivoting; every division is exact in the scalar domain.
template <class T>
T det_bareiss(const SymMatrix<T>& M) {
    const int n = M.order();
    std::vector<std::vector<T>> a(static_cast<std::size_t>(n), std::vector<T>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = M(i, j);
    T prev = entry::one(static_cast<const T*>(nullptr));
    bool negate = false;
    for (int k = 0; k + 1 < n; ++k) {
        auto& ak = a[static_cast<std::size_t>(k)];
        if (entry::is_zero(ak[static_cast<std::size_t>(k)])) {
            int r = k + 1;
            while (r < n && entry::is_zero(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)])) ++r;
            if (r == n) return T();  // zero column: singular
            std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(r)]);
            negate = !negate;
        }
        const T& pivot = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                T num = pivot * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = entry::exact_div(num, prev);
            }
        }
        prev = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    }
    T det = a[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)];
    return negate ? T() - det : det;
}

/// All leading principal minors, orders 1..n. A single pivot-free Bareiss pass
/// produces them as its pivots; any zero pivot forces per-order fallback for
/// the rest (zero pivots cannot be row-swapped away without changing which
/// minor is computed).
template <class T>
std::vector<T> leading_minors(const SymMatrix<T>& M) {
    const int n = M.order();
    std::vector<T> minors(static_cast<std::size_t>(n));
    std::vector<std::vector<T>> a(static_cast<std::size_t>(n), std::vector<T>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = M(i, j);
    T prev = entry::one(static_cast<const T*>(nullptr));
    for (int k = 0; k < n; ++k) {
        minors[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        if (k + 1 == n) break;
        if (entry::is_zero(minors[static_cast<std::size_t>(k)])) {
            for (int j = k + 1; j < n; ++j) minors[static_cast<std::size_t>(j)] = det_bareiss(M.leading(j + 1));
            break;
        }
        const T& pivot = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                T num = pivot * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = entry::exact_div(num, prev);
            }
        }
        prev = pivot;
    }
    return minors;
}

/// Entrywise map, e.g. specializing Poly entries at a rational point.
template <class T, class U, class F>
SymMatrix<U> map_entries(const SymMatrix<T>& M, F&& f) {
    return SymMatrix<U>::from_fn(M.order(), [&](int i, int j) { return f(M(i, j)); });
}

inline SymMatrix<Rational> specialize(const SymMatrix<Poly>& M, const Rational& t) {
    return map_entries<Poly, Rational>(M, [&](const Poly& p) { return p.eval(t); });
}

/// All leading principal minors of a polynomial matrix, as polynomials.
/// Evaluation + Newton interpolation: far cheaper than symbolic Bareiss once
/// entry degrees grow, and exact either way. minors[k-1] is the k-th minor.
inline std::vector<Poly> leading_minor_polys(const SymMatrix<Poly>& M) {
    const int n = M.order();
    // det of the k-th leading block has degree at most the sum over rows of
    // the largest entry degree in that row
    int bound = 0;
    for (int i = 0; i < n; ++i) {
        int row = 0;
        for (int j = 0; j < n; ++j) row = std::max(row, std::max(0, M(i, j).degree()));
        bound += row;
    }
    const int points = bound + 1;
    std::vector<Rational> xs(static_cast<std::size_t>(points));
    std::vector<std::vector<Rational>> vals(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(points)));
    for (int p = 0; p < points; ++p) {
        xs[static_cast<std::size_t>(p)] = Rational(p);
        auto lm = leading_minors(specialize(M, Rational(p)));
        for (int k = 0; k < n; ++k) vals[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = lm[static_cast<std::size_t>(k)];
    }
    std::vector<Poly> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out.push_back(interpolate(xs, vals[static_cast<std::size_t>(k)]));
    return out;
}

}  // namespace monogap
