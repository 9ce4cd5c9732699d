#pragma once

// Exact-identity verification suite: runs every algebraic family over a
// parameter grid and reports the first counterexample of each.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gtprobe/fidelity.hpp"
#include "gtprobe/protocol_coeffs.hpp"
#include "gtprobe/young.hpp"

namespace gtprobe {

/// Location of a deliberately corrupted g_i (g_i is incremented by one).
struct GFault {
    int d = 0, L = 0, i = 0;
};

struct VerifyOptions {
    int max_d = 6;
    int max_L = 12;
    std::uint64_t seed = 42;
    int telescoping_trials = 100;
    int telescoping_max_k = 25;
    int amplitude_trials = 1000;
    int amplitude_max_dim = 16;
    int branching_max_boxes = 10;
    int ratio_max_L = 10;
    std::optional<GFault> g_fault;
};

struct FamilyResult {
    std::string name;
    bool passed = true;
    std::size_t checks = 0;
    std::string counterexample;  // empty when passed
};

namespace detail {

inline std::string dl(int d, int L) { return "d=" + std::to_string(d) + " L=" + std::to_string(L); }

inline std::vector<BigInt> g_table(const VerifyOptions& opt, int d, int L) {
    std::vector<BigInt> g = paper_g(d, L);
    if (opt.g_fault && opt.g_fault->d == d && opt.g_fault->L == L && opt.g_fault->i >= 0 && opt.g_fault->i <= L)
        g[static_cast<std::size_t>(opt.g_fault->i)] += 1;
    return g;
}

/// Uniform rational p/q with |p| <= 60, 1 <= q <= 24.
inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> p(-60, 60), q(1, 24);
    const int numer = p(rng);
    return Rational(numer, q(rng));
}

inline Eigen::VectorXcd random_state(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = {normal(rng), normal(rng)};
    return v / v.norm();
}

}  // namespace detail

inline FamilyResult verify_g_recurrence(const VerifyOptions& opt) {
    FamilyResult r{"g_recurrence", true, 0, {}};
    for (int d = 2; d <= opt.max_d; ++d)
        for (int L = 1; L <= opt.max_L; ++L) {
            const auto g = detail::g_table(opt, d, L);
            const int N = (d + 1) * L;
            for (int i = 0; i <= L; ++i) {
                ++r.checks;
                const BigInt prev = i == 0 ? BigInt(0) : g[static_cast<std::size_t>(i - 1)];
                if (g[static_cast<std::size_t>(i)] - prev != L + N + d - 2 * i) {
                    r.passed = false;
                    r.counterexample = detail::dl(d, L) + " i=" + std::to_string(i);
                    return r;
                }
            }
        }
    return r;
}

/// 1 - fidelity == lemma42 == closed form, all exact.
inline FamilyResult verify_lemma_chain(const VerifyOptions& opt) {
    FamilyResult r{"lemma_chain", true, 0, {}};
    for (int d = 2; d <= opt.max_d; ++d)
        for (int L = 1; L <= opt.max_L; ++L) {
            ++r.checks;
            const auto g = detail::g_table(opt, d, L);
            const Rational infidelity = 1 - expected_fidelity_for(d, L, g);
            const Rational lemma = lemma42_value_for(d, L, g);
            const Rational closed = closed_form_infidelity(d, L);
            if (infidelity != lemma || lemma != closed) {
                r.passed = false;
                r.counterexample = detail::dl(d, L) + " infidelity=" + to_string(infidelity) +
                                   " lemma=" + to_string(lemma) + " closed_form=" + to_string(closed);
                return r;
            }
        }
    return r;
}

/// Add-a-box CG weights of the Gamma chain equal (alpha_i, beta_i).
inline FamilyResult verify_cg_weights(const VerifyOptions& opt) {
    FamilyResult r{"cg_alpha_beta", true, 0, {}};
    for (int d = 2; d <= opt.max_d; ++d)
        for (int L = 1; L <= opt.max_L; ++L)
            for (int i = 0; i <= L; ++i) {
                ++r.checks;
                const GammaParams p(d, L, i);
                const AlphaBeta ab = alpha_beta(p);
                Rational sum = 0, on_first = 0, on_last = 0;
                for (const auto& t : cg_add_d(gamma_tableau_chain(p))) {
                    sum += t.c_sq;
                    if (t.row == 1) on_first = t.c_sq;
                    if (t.row == d) on_last = t.c_sq;
                }
                if (sum != 1 || on_first != ab.alpha || on_last != ab.beta || ab.alpha + ab.beta != 1) {
                    r.passed = false;
                    r.counterexample = detail::dl(d, L) + " i=" + std::to_string(i);
                    return r;
                }
            }
    return r;
}

inline FamilyResult verify_dimension_ratios(const VerifyOptions& opt) {
    FamilyResult r{"dimension_ratios", true, 0, {}};
    for (int d = 2; d <= opt.max_d; ++d)
        for (int L = 1; L <= std::min(opt.max_L, opt.ratio_max_L); ++L)
            for (int i = 0; i <= L; ++i) {
                ++r.checks;
                if (!dim_ratio_check(GammaParams(d, L, i))) {
                    r.passed = false;
                    r.counterexample = detail::dl(d, L) + " i=" + std::to_string(i);
                    return r;
                }
            }
    return r;
}

/// sum over mu of dim_{d-1}(mu) == dim_d(lambda).
inline FamilyResult verify_branching_sums(const VerifyOptions& opt) {
    FamilyResult r{"branching_sums", true, 0, {}};
    for (int d = 2; d <= opt.max_d; ++d)
        for (int size = 0; size <= opt.branching_max_boxes; ++size)
            for (const auto& lambda : partitions(size, d)) {
                ++r.checks;
                BigInt total = 0;
                for (const auto& mu : branching_restrictions(lambda, d)) total += *weyl_dimension(mu, d - 1);
                if (total != *weyl_dimension(lambda, d)) {
                    r.passed = false;
                    r.counterexample = "d=" + std::to_string(d) + " lambda=" + lambda.to_string();
                    return r;
                }
            }
    return r;
}

inline FamilyResult verify_telescoping(const VerifyOptions& opt) {
    FamilyResult r{"telescoping", true, 0, {}};
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> kdist(0, opt.telescoping_max_k);
    for (int t = 0; t < opt.telescoping_trials; ++t) {
        const Rational a = detail::random_rational(rng);
        const Rational b = detail::random_rational(rng);
        const int k = kdist(rng);
        ++r.checks;
        if (!telescoping_check(a, b, k)) {
            r.passed = false;
            r.counterexample = "a=" + to_string(a) + " b=" + to_string(b) + " k=" + std::to_string(k);
            return r;
        }
    }
    return r;
}

/// Amplitude difference bounded by the trace norm / sqrt(2), on random states
/// and random coordinate projectors.
inline FamilyResult verify_amplitude_reduction(const VerifyOptions& opt) {
    FamilyResult r{"amplitude_reduction", true, 0, {}};
    std::mt19937_64 rng(opt.seed ^ 0x5bd1e995ULL);
    std::uniform_int_distribution<int> dim_dist(2, opt.amplitude_max_dim);
    std::bernoulli_distribution coin(0.5);
    for (int t = 0; t < opt.amplitude_trials; ++t) {
        const int dim = dim_dist(rng);
        const Eigen::VectorXcd psi = detail::random_state(dim, rng);
        const Eigen::VectorXcd phi = detail::random_state(dim, rng);
        Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(dim, dim);
        for (int k = 0; k < dim; ++k)
            if (coin(rng)) proj(k, k) = 1;
        ++r.checks;
        const AmplitudeReduction ar = amplitude_reduction_check(psi, phi, proj);
        if (ar.rhs - ar.lhs < -1e-10) {
            r.passed = false;
            r.counterexample = "trial=" + std::to_string(t) + " dim=" + std::to_string(dim);
            return r;
        }
    }
    return r;
}

/// paper fidelity - 1e-10 <= lambda_max <= 1 + 1e-10.
inline FamilyResult verify_optimizer_sandwich(const VerifyOptions& opt) {
    FamilyResult r{"optimizer_sandwich", true, 0, {}};
    for (int d = 2; d <= opt.max_d; ++d)
        for (int L = 1; L <= opt.max_L; ++L) {
            ++r.checks;
            const double paper = to_double(expected_fidelity_paper(d, 2 * d * L));
            const double best = optimal_probe(d, L).value;
            if (best < paper - 1e-10 || best > 1 + 1e-10) {
                r.passed = false;
                r.counterexample = detail::dl(d, L);
                return r;
            }
        }
    return r;
}

inline std::vector<FamilyResult> run_verification(const VerifyOptions& opt) {
    return {verify_g_recurrence(opt),       verify_lemma_chain(opt),       verify_cg_weights(opt),
            verify_dimension_ratios(opt),   verify_branching_sums(opt),    verify_telescoping(opt),
            verify_amplitude_reduction(opt), verify_optimizer_sandwich(opt)};
}

}  // namespace gtprobe
