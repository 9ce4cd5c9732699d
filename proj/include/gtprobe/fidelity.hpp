#pragma once

// Expected fidelity of the estimator, exactly and in floating point, plus the
// quantities built on it: the closed-form infidelity, the envelope ratio
// against d^3 / (n (n + d^2)), the optimal probe, and the query planner.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtprobe/protocol_coeffs.hpp"
#include "gtprobe/rational.hpp"
#include "gtprobe/tridiagonal.hpp"

namespace gtprobe {

/// Envelope constant used for 1 - F <= C d^3 / (n (n + d^2)). Empirical.
inline constexpr double kTheoremBoundConstant = 4.0;

/// L = n / (2d); throws unless n is a positive multiple of 2d and d >= 2.
inline int probe_length(int d, int n) {
    if (d < 2) throw std::invalid_argument("d must be at least 2");
    if (n <= 0 || n % (2 * d) != 0)
        throw std::invalid_argument("n must be a positive multiple of 2d (d=" + std::to_string(d) +
                                    ", n=" + std::to_string(n) + ")");
    return n / (2 * d);
}

/// g_0..g_L as used by the probe.
inline std::vector<BigInt> paper_g(int d, int L) {
    std::vector<BigInt> g;
    for (int i = 0; i <= L; ++i) g.push_back(g_coeff(i, d, L));
    return g;
}

namespace detail {

inline void check_g(std::span<const BigInt> g, int L) {
    if (static_cast<int>(g.size()) != L + 1) throw std::invalid_argument("g sequence must have L+1 entries");
    for (const auto& v : g)
        if (v < 0) throw std::invalid_argument("g sequence must be nonnegative");
}

inline const BigInt& g_at(std::span<const BigInt> g, int i) {
    static const BigInt zero = 0;
    return i < 0 ? zero : g[static_cast<std::size_t>(i)];
}

}  // namespace detail

/// Thrown when the two square-root terms of a fidelity summand do not share
/// a radicand, which would mean the coefficient formulas are inconsistent.
class RadicandMismatch : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Exact homogeneous fidelity quotient
///   (f_0^2 x_0^2 + sum_{i>=1} (f_i x_i + f_{i-1} y_i)^2) / sum f_i^2
/// for the probe generated by an arbitrary nonnegative g (g_{-1} = 0).
inline Rational expected_fidelity_for(int d, int L, std::span<const BigInt> g) {
    detail::check_g(g, L);
    const int N = (d + 1) * L;
    Rational numer = 0, norm = 0;
    for (int i = 0; i <= L; ++i) {
        const GammaParams p(d, L, i);
        const XySquared xy = xy_squared(p);
        const BigInt& gi = detail::g_at(g, i);
        const BigInt& gprev = detail::g_at(g, i - 1);
        const Rational self_sq = f_squared_for(i, d, L, gi) * xy.x_sq;
        const Rational prev_sq = i >= 1 ? f_squared_for(i - 1, d, L, gprev) * xy.y_sq : Rational(0);

        const Rational radicand = shared_radicand(i, d, L);
        const BigInt self_coeff = gi * (N - i + 1);
        const BigInt prev_coeff = gprev * (L + d - i - 1);
        if (self_sq != Rational(self_coeff * self_coeff) * radicand ||
            prev_sq != Rational(prev_coeff * prev_coeff) * radicand)
            throw RadicandMismatch("fidelity term " + std::to_string(i) + " has mismatched radicands (d=" +
                                   std::to_string(d) + ", L=" + std::to_string(L) + ")");
        const BigInt combined = self_coeff + prev_coeff;
        numer += Rational(combined * combined) * radicand;
        norm += f_squared_for(i, d, L, gi);
    }
    if (norm == 0) throw std::invalid_argument("probe is identically zero");
    return numer / norm;
}

/// Exact expected fidelity of the protocol with the paper's probe, n = 2dL.
inline Rational expected_fidelity_paper(int d, int n) {
    const int L = probe_length(d, n);
    const auto g = paper_g(d, L);
    return expected_fidelity_for(d, L, g);
}

/// The ratio expressing 1 - fidelity through differences of g, valid for any g.
inline Rational lemma42_value_for(int d, int L, std::span<const BigInt> g) {
    detail::check_g(g, L);
    const int N = (d + 1) * L;
    Rational numer = 0, denom = 0;
    for (int i = 0; i <= L; ++i) {
        BigInt weight = 1;
        for (int j = 1; j <= d - 1; ++j) weight *= BigInt(N + j - i) * (L + j - i);
        const BigInt diff = detail::g_at(g, i) - detail::g_at(g, i - 1);
        const BigInt gi = detail::g_at(g, i), gp = detail::g_at(g, i - 1);
        numer += Rational(diff * diff * weight, L + N + d - 2 * i);
        denom += Rational((gi * gi - gp * gp) * weight, d - 1);
    }
    return numer / denom;
}

inline Rational lemma42_value(int d, int L) {
    const auto g = paper_g(d, L);
    return lemma42_value_for(d, L, g);
}

/// (d-1) / (L + N + d + 2NL/(d+1)) with N = (d+1)L.
inline Rational closed_form_infidelity(int d, int L) {
    if (d < 2 || L < 1) throw std::invalid_argument("closed_form_infidelity: need d >= 2, L >= 1");
    const BigInt N = BigInt(d + 1) * L;
    return Rational(d - 1) / (Rational(L) + Rational(N) + d + Rational(2 * N * L, d + 1));
}

/// Closed-form infidelity scaled by n (n + d^2) / d^3.
inline double theorem_bound_ratio(int d, int n) {
    const int L = probe_length(d, n);
    const Rational scaled = closed_form_infidelity(d, L) * Rational(BigInt(n) * (BigInt(n) + d * d), BigInt(d) * d * d);
    return to_double(scaled);
}

/// x_i and y_i in floating point from their exact squares.
struct ProbeMap {
    std::vector<double> x, y;  // y[0] unused
};

inline ProbeMap probe_map(int d, int L) {
    ProbeMap m;
    for (int i = 0; i <= L; ++i) {
        const XySquared xy = xy_squared(GammaParams(d, L, i));
        m.x.push_back(std::sqrt(to_double(xy.x_sq)));
        m.y.push_back(i == 0 ? 0.0 : std::sqrt(to_double(xy.y_sq)));
    }
    return m;
}

/// Homogeneous fidelity quotient for an arbitrary (unnormalized) probe f.
inline double rayleigh_quotient(std::span<const double> f, int d, int L) {
    if (static_cast<int>(f.size()) != L + 1) throw std::invalid_argument("probe must have L+1 entries");
    double norm = 0;
    for (double v : f) norm += v * v;
    if (norm == 0) throw std::invalid_argument("probe must be nonzero");
    const ProbeMap m = probe_map(d, L);
    double numer = 0;
    for (int i = 0; i <= L; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double term = f[k] * m.x[k] + (i > 0 ? f[k - 1] * m.y[k] : 0.0);
        numer += term * term;
    }
    return numer / norm;
}

/// The paper's probe f_i = sqrt(f_i^2), unnormalized.
inline std::vector<double> paper_probe(int d, int L) {
    std::vector<double> f;
    for (int i = 0; i <= L; ++i) f.push_back(std::sqrt(to_double(f_squared(i, d, L))));
    return f;
}

/// Unit-norm version of paper_probe.
inline std::vector<double> normalized_paper_probe(int d, int L) {
    Rational total = 0;
    for (int i = 0; i <= L; ++i) total += f_squared(i, d, L);
    std::vector<double> f;
    for (int i = 0; i <= L; ++i) f.push_back(std::sqrt(to_double(f_squared(i, d, L) / total)));
    return f;
}

/// A^T A for the lower-bidiagonal A with A_ii = x_i, A_{i,i-1} = y_i, so that
/// f^T A^T A f / f^T f is the fidelity quotient.
inline SymmetricTridiagonal probe_gram(int d, int L) {
    SymmetricTridiagonal t;
    for (int i = 0; i <= L; ++i) {
        const XySquared xy = xy_squared(GammaParams(d, L, i));
        Rational diag = xy.x_sq;
        if (i < L) diag += xy_squared(GammaParams(d, L, i + 1)).y_sq;
        t.diag.push_back(to_double(diag));
        if (i < L) {
            const XySquared next = xy_squared(GammaParams(d, L, i + 1));
            t.off.push_back(std::sqrt(to_double(next.x_sq * next.y_sq)));
        }
    }
    return t;
}

struct OptimalProbe {
    std::vector<double> f;  // unit norm, nonnegative orientation
    double value = 0;       // maximal fidelity quotient
};

inline OptimalProbe optimal_probe(int d, int L) {
    if (d < 2 || L < 1) throw std::invalid_argument("optimal_probe: need d >= 2, L >= 1");
    const Eigenpair top = largest_eigenpair(probe_gram(d, L));
    return {top.vector, top.value};
}

/// Smallest n (a multiple of 2d) whose closed-form infidelity is at most
/// eps^2 / 100. By Markov's inequality the estimate is then within trace
/// distance eps with probability at least 2/3.
inline int plan_queries(int d, double eps) {
    if (d < 2) throw std::invalid_argument("plan_queries: d must be at least 2");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("plan_queries: eps must lie in (0, 1)");
    const Rational target = exact_rational(eps) * exact_rational(eps) / 100;
    auto ok = [&](int L) { return closed_form_infidelity(d, L) <= target; };

    int hi = 1;
    while (!ok(hi)) hi *= 2;
    int lo = hi / 2;  // ok(lo) is false unless lo == 0
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    // Monotone in L; a violation here falls back to a linear scan.
    if (!ok(hi) || (hi > 1 && ok(hi - 1))) {
        int L = 1;
        while (!ok(L)) ++L;
        hi = L;
    }
    return 2 * d * hi;
}

/// Trace norm of |psi><psi| - |phi><phi| given |<psi|phi>|^2.
inline double trace_distance_relation(double overlap_sq) {
    constexpr double slack = 1e-12;
    if (overlap_sq < -slack || overlap_sq > 1 + slack)
        throw std::invalid_argument("trace_distance_relation: overlap must lie in [0, 1]");
    const double gap = std::max(0.0, 1 - overlap_sq);
    return 2 * std::sqrt(gap);
}

struct AmplitudeReduction {
    double lhs = 0;  // | sqrt(<psi|P|psi>) - sqrt(<phi|P|phi>) |
    double rhs = 0;  // || |psi><psi| - |phi><phi| ||_1 / sqrt(2)
};

/// Both sides of the amplitude/trace-distance inequality. The trace norm is
/// taken from the eigenvalues of the difference of projectors.
inline AmplitudeReduction amplitude_reduction_check(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi,
                                                    const Eigen::MatrixXcd& proj) {
    constexpr double tol = 1e-9;
    const auto dim = psi.size();
    if (phi.size() != dim || proj.rows() != dim || proj.cols() != dim)
        throw std::invalid_argument("amplitude_reduction_check: dimension mismatch");
    if (std::abs(psi.norm() - 1) > tol || std::abs(phi.norm() - 1) > tol)
        throw std::invalid_argument("amplitude_reduction_check: states must be unit vectors");
    if ((proj - proj.adjoint()).norm() > tol || (proj * proj - proj).norm() > tol)
        throw std::invalid_argument("amplitude_reduction_check: projector must be Hermitian and idempotent");

    const double p_psi = std::max(0.0, psi.dot(proj * psi).real());
    const double p_phi = std::max(0.0, phi.dot(proj * phi).real());
    const Eigen::MatrixXcd diff = psi * psi.adjoint() - phi * phi.adjoint();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    const double trace_norm = solver.eigenvalues().cwiseAbs().sum();
    return {std::abs(std::sqrt(p_psi) - std::sqrt(p_phi)), trace_norm / std::sqrt(2.0)};
}

struct FidelityReport {
    int d = 0, n = 0, L = 0;
    Rational fidelity_exact;
    Rational infidelity_exact;
    Rational closed_form;
    double bound_ratio = 0;
    double optimal_rayleigh = 0;
    std::vector<double> optimal_f;

    double optimal_infidelity() const { return 1 - optimal_rayleigh; }
    /// (1 - lambda_max) / closed-form infidelity.
    double gap_ratio() const { return optimal_infidelity() / to_double(closed_form); }
    bool bound_ok() const { return bound_ratio <= kTheoremBoundConstant; }
};

inline FidelityReport fidelity_report(int d, int n) {
    FidelityReport r;
    r.d = d;
    r.n = n;
    r.L = probe_length(d, n);
    r.fidelity_exact = expected_fidelity_paper(d, n);
    r.infidelity_exact = 1 - r.fidelity_exact;
    r.closed_form = closed_form_infidelity(d, r.L);
    r.bound_ratio = theorem_bound_ratio(d, n);
    const OptimalProbe opt = optimal_probe(d, r.L);
    r.optimal_rayleigh = opt.value;
    r.optimal_f = opt.f;
    return r;
}

}  // namespace gtprobe
