#pragma once

// Extreme eigenpairs of a real symmetric tridiagonal matrix by Sturm-sequence
// bisection, with the eigenvector recovered by inverse iteration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gtprobe {

struct SymmetricTridiagonal {
    std::vector<double> diag;  // size m
    std::vector<double> off;   // size m - 1, off[k] couples k and k+1

    std::size_t size() const { return diag.size(); }
};

struct Eigenpair {
    double value = 0;
    std::vector<double> vector;
};

namespace detail {

inline void check_shape(const SymmetricTridiagonal& t) {
    if (t.diag.empty()) throw std::invalid_argument("tridiagonal: empty matrix");
    if (t.off.size() + 1 != t.diag.size()) throw std::invalid_argument("tridiagonal: off-diagonal size mismatch");
}

inline std::pair<double, double> gershgorin(const SymmetricTridiagonal& t) {
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    const std::size_t m = t.size();
    for (std::size_t k = 0; k < m; ++k) {
        double radius = 0;
        if (k > 0) radius += std::abs(t.off[k - 1]);
        if (k + 1 < m) radius += std::abs(t.off[k]);
        lo = std::min(lo, t.diag[k] - radius);
        hi = std::max(hi, t.diag[k] + radius);
    }
    const double pad = 4 * std::numeric_limits<double>::epsilon() * std::max({std::abs(lo), std::abs(hi), 1.0}) *
                       static_cast<double>(m);
    return {lo - pad, hi + pad};
}

}  // namespace detail

/// Number of eigenvalues strictly below x (sign changes of the LDL^T pivots).
inline std::size_t sturm_count(const SymmetricTridiagonal& t, double x) {
    detail::check_shape(t);
    const double tiny = std::numeric_limits<double>::min();
    std::size_t count = 0;
    double q = t.diag[0] - x;
    for (std::size_t k = 0;; ++k) {
        if (q == 0) q = -tiny;
        if (q < 0) ++count;
        if (k + 1 == t.size()) break;
        q = t.diag[k + 1] - x - t.off[k] * t.off[k] / q;
    }
    return count;
}

/// k-th smallest eigenvalue (0-based), bisected to relative width rel_tol.
inline double bisect_eigenvalue(const SymmetricTridiagonal& t, std::size_t k, double rel_tol = 1e-15) {
    detail::check_shape(t);
    if (k >= t.size()) throw std::out_of_range("bisect_eigenvalue: index out of range");
    auto [lo, hi] = detail::gershgorin(t);
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
        if (sturm_count(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Eigenvector for a converged eigenvalue by inverse iteration on the
/// slightly shifted matrix (LU with partial pivoting of T - shift I).
inline std::vector<double> inverse_iteration(const SymmetricTridiagonal& t, double eigenvalue, int sweeps = 4) {
    detail::check_shape(t);
    const std::size_t m = t.size();
    if (m == 1) return {1.0};
    auto [glo, ghi] = detail::gershgorin(t);
    const double scale = std::max(std::abs(glo), std::abs(ghi));
    const double shift = eigenvalue + 1e-13 * std::max(scale, 1e-300);
    const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

    // Pivoted LU of a tridiagonal matrix produces up to two superdiagonals.
    std::vector<double> a(m), b(m, 0), c(m, 0);  // U rows: a[k] x_k + b[k] x_{k+1} + c[k] x_{k+2}
    std::vector<double> mult(m, 0);
    std::vector<bool> swapped(m, false);
    std::vector<double> diag(m), sub(m, 0), sup(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
        diag[k] = t.diag[k] - shift;
        if (k + 1 < m) sup[k] = sub[k + 1] = t.off[k];
    }
    // Row k currently holds (a_k, b_k, c_k) at columns k, k+1, k+2.
    a[0] = diag[0];
    b[0] = m > 1 ? sup[0] : 0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        // Next row before elimination: sub at column k, diag at k+1, sup at k+2.
        double r0 = sub[k + 1], r1 = diag[k + 1], r2 = (k + 2 < m) ? sup[k + 1] : 0;
        if (std::abs(r0) > std::abs(a[k])) {
            std::swap(a[k], r0);
            std::swap(b[k], r1);
            std::swap(c[k], r2);
            swapped[k] = true;
        }
        if (a[k] == 0) a[k] = tiny;
        mult[k] = r0 / a[k];
        a[k + 1] = r1 - mult[k] * b[k];
        b[k + 1] = r2 - mult[k] * c[k];
        c[k + 1] = 0;
    }
    if (a[m - 1] == 0) a[m - 1] = tiny;

    std::vector<double> x(m, 1.0);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        // Forward elimination on the right-hand side.
        for (std::size_t k = 0; k + 1 < m; ++k) {
            if (swapped[k]) std::swap(x[k], x[k + 1]);
            x[k + 1] -= mult[k] * x[k];
        }
        // Back substitution.
        for (std::size_t k = m; k-- > 0;) {
            double s = x[k];
            if (k + 1 < m) s -= b[k] * x[k + 1];
            if (k + 2 < m) s -= c[k] * x[k + 2];
            x[k] = s / a[k];
        }
        double norm = 0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : x) v /= norm;
    }
    double sum = 0;
    for (double v : x) sum += v;
    if (sum < 0)
        for (double& v : x) v = -v;
    return x;
}

/// Largest eigenvalue and a unit eigenvector.
inline Eigenpair largest_eigenpair(const SymmetricTridiagonal& t) {
    const double value = bisect_eigenvalue(t, t.size() - 1);
    return {value, inverse_iteration(t, value)};
}

}  // namespace gtprobe
