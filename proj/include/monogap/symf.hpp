#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace monogap {

/// Dense real symmetric matrix in doubles. Symmetrized on construction:
/// whatever data comes in, entry(i,j) == entry(j,i) afterwards.
class SymMatrixF {
public:
    explicit SymMatrixF(int order) : n_(order), a_(static_cast<std::size_t>(order) * order, 0.0) {
        if (order <= 0) throw std::invalid_argument("SymMatrixF: order must be positive");
    }

    static SymMatrixF from_dense(int order, const std::vector<double>& raw) {
        SymMatrixF m(order);
        if (raw.size() != m.a_.size()) throw std::invalid_argument("SymMatrixF: size mismatch");
        for (int i = 0; i < order; ++i)
            for (int j = 0; j < order; ++j) m.a_[idx(order, i, j)] = 0.5 * (raw[idx(order, i, j)] + raw[idx(order, j, i)]);
        return m;
    }

    static SymMatrixF diag(const std::vector<double>& d) {
        SymMatrixF m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n_; ++i) m.a_[idx(m.n_, i, i)] = d[static_cast<std::size_t>(i)];
        return m;
    }

    static SymMatrixF identity(int order) { return diag(std::vector<double>(static_cast<std::size_t>(order), 1.0)); }

    int order() const { return n_; }
    double operator()(int i, int j) const { return a_[idx(n_, i, j)]; }
    void set(int i, int j, double v) {
        a_[idx(n_, i, j)] = v;
        a_[idx(n_, j, i)] = v;
    }

    const std::vector<double>& data() const { return a_; }

    double norm_fro() const {
        double s = 0.0;
        for (double x : a_) s += x * x;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : a_) m = std::max(m, std::abs(x));
        return m;
    }

    bool all_finite() const {
        return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
    }

    friend SymMatrixF operator+(const SymMatrixF& a, const SymMatrixF& b) {
        SymMatrixF r(a.n_);
        for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = a.a_[k] + b.a_[k];
        return r;
    }
    friend SymMatrixF operator-(const SymMatrixF& a, const SymMatrixF& b) {
        SymMatrixF r(a.n_);
        for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = a.a_[k] - b.a_[k];
        return r;
    }

private:
    static std::size_t idx(int n, int i, int j) { return static_cast<std::size_t>(i) * n + j; }
    int n_;
    std::vector<double> a_;
};

/// Eigendecomposition result: eigenvalues ascending, q row-major with the
/// k-th eigenVECTOR in column k, so M = Q diag(lambda) Q^T.
struct EigResult {
    std::vector<double> lambda;
    std::vector<double> q;
    int order = 0;

    double q_at(int i, int k) const { return q[static_cast<std::size_t>(i) * order + k]; }
};

/// Cyclic Jacobi rotations until every off-diagonal magnitude drops below
/// tol * Frobenius norm (at most 30 sweeps, plenty for desk-scale matrices).
inline EigResult sym_eig(const SymMatrixF& m, double tol = 1e-14) {
    if (!m.all_finite()) throw std::invalid_argument("sym_eig: non-finite entry");
    const int n = m.order();
    std::vector<double> a = m.data();
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto at = [&](std::vector<double>& w, int i, int j) -> double& { return w[static_cast<std::size_t>(i) * n + j]; };

    const double scale = std::max(m.norm_fro(), 1e-300);
    const double stop = tol * scale;
    for (int sweep = 0; sweep < 30; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(at(a, p, q)));
        if (off < stop) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(a, p, q);
                if (std::abs(apq) < stop * 1e-2) continue;
                double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(a, k, p), akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(a, p, k), aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = at(v, k, p), vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    EigResult r;
    r.order = n;
    r.lambda.resize(static_cast<std::size_t>(n));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = at(a, i, i);
    std::sort(perm.begin(), perm.end(), [&](int x, int y) { return d[static_cast<std::size_t>(x)] < d[static_cast<std::size_t>(y)]; });
    r.q.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        r.lambda[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
        for (int i = 0; i < n; ++i) r.q[static_cast<std::size_t>(i) * n + k] = at(v, i, perm[static_cast<std::size_t>(k)]);
    }
    return r;
}

inline double min_eigenvalue(const SymMatrixF& m, double tol = 1e-14) { return sym_eig(m, tol).lambda.front(); }

/// Q diag(vals) Q^T for the Q of an EigResult.
inline SymMatrixF assemble_from_eig(const EigResult& e, const std::vector<double>& vals) {
    const int n = e.order;
    SymMatrixF out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += e.q_at(i, k) * vals[static_cast<std::size_t>(k)] * e.q_at(j, k);
            out.set(i, j, s);
        }
    return out;
}

}  // namespace monogap
