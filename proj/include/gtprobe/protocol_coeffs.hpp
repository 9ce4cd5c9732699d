#pragma once

// Exact coefficients of the protocol: add-a-box Clebsch-Gordan weights,
// alpha/beta, x^2/y^2, g and f^2. Every quantity that appears under a square
// root is stored squared.

#include <stdexcept>
#include <string>
#include <vector>

#include "gtprobe/rational.hpp"
#include "gtprobe/young.hpp"

namespace gtprobe {

struct AlphaBeta {
    Rational alpha;
    Rational beta;
};

/// Weights of |Gamma_i>|d> on |Gamma_i^+> and |Gamma_{i+1}^+>.
inline AlphaBeta alpha_beta(const GammaParams& p) {
    const int d = p.d(), L = p.L(), N = p.N(), i = p.i();
    const int denom = L + N + d - 2 * i - 1;
    return {Rational(N + d - i - 1, denom), Rational(L - i, denom)};
}

struct CgTerm {
    int row;         // 1-based row receiving the new box
    Rational c_sq;   // |C_k|^2
    friend bool operator==(const CgTerm&, const CgTerm&) = default;
};

/// Squared Clebsch-Gordan coefficients of |S> (x) |d> onto the tableaux
/// obtained by appending a box filled with d to row k. Rows where the result
/// is not semistandard are omitted.
inline std::vector<CgTerm> cg_add_d(const GTPattern& s) {
    const int d = s.alphabet();
    const YoungDiagram& lambda = s.shape();
    const YoungDiagram& inner = s.level(d - 1);
    std::vector<CgTerm> out;
    for (int k = 1; k <= d; ++k) {
        if (!lambda.can_add_box(k)) continue;
        // The new box sits below a box of lambda^(d-1) only if that box exists.
        if (k > 1 && inner.row(k - 1) < lambda.row(k) + 1) continue;
        BigInt numer = 1, denom = 1;
        for (int j = 1; j <= d - 1; ++j) numer *= inner.row(j) - j - lambda.row(k) + k - 1;
        for (int j = 1; j <= d; ++j)
            if (j != k) denom *= lambda.row(j) - j - lambda.row(k) + k;
        Rational c_sq = ratio(numer, denom);
        if (c_sq < 0) c_sq = -c_sq;
        if (c_sq != 0) out.push_back({k, c_sq});
    }
    return out;
}

struct XySquared {
    Rational x_sq;
    Rational y_sq;
};

inline XySquared xy_squared(const GammaParams& p) {
    const int d = p.d(), L = p.L(), N = p.N(), i = p.i();
    const int m = L + N + d - 2 * i;
    return {Rational(BigInt(N + d - i - 1) * (N - i + 1), BigInt(m - 1) * m),
            Rational(BigInt(L - i + 1) * (L + d - i - 1), BigInt(m + 1) * m)};
}

/// g_i = (i+1)(L+N+d-i) for 0 <= i <= L, and g_{-1} = 0.
inline BigInt g_coeff(int i, int d, int L) {
    if (i < -1 || i > L) throw std::invalid_argument("g_coeff: index out of range");
    if (i == -1) return 0;
    const int N = (d + 1) * L;
    return BigInt(i + 1) * (L + N + d - i);
}

/// The radicand of f_i / g_i:
/// (L+N+d-2i-1) prod_{j=2}^{d-1} (N+j-i-1) prod_{j=2}^{d-1} (L+d-j-i).
inline BigInt f_radicand(int i, int d, int L) {
    const int N = (d + 1) * L;
    BigInt r = L + N + d - 2 * i - 1;
    for (int j = 2; j <= d - 1; ++j) r *= BigInt(N + j - i - 1) * (L + d - j - i);
    return r;
}

/// f_i^2 for an arbitrary g_i.
inline Rational f_squared_for(int i, int d, int L, const BigInt& g) {
    if (i == -1) return 0;
    return Rational(g * g * f_radicand(i, d, L));
}

inline Rational f_squared(int i, int d, int L) { return f_squared_for(i, d, L, g_coeff(i, d, L)); }

/// Common radicand R_i with f_i x_i = g_i (N-i+1) sqrt(R_i) and
/// f_{i-1} y_i = g_{i-1} (L+d-i-1) sqrt(R_i).
inline Rational shared_radicand(int i, int d, int L) {
    const int N = (d + 1) * L;
    BigInt numer = 1;
    for (int j = 2; j <= d - 1; ++j) numer *= BigInt(N + j - i) * (L + d - j - i);
    return Rational(numer, L + N + d - 2 * i);
}

struct DimRatios {
    Rational self_ratio;        // dim gamma_i / dim gamma_i^+
    Rational self_closed_form;
    Rational prev_ratio;        // dim gamma_{i-1} / dim gamma_i^+ (i >= 1, else 0)
    Rational prev_closed_form;
    bool x_matches = false;     // alpha_i^2 * self_ratio == x_i^2
    bool y_matches = false;     // beta_{i-1}^2 * prev_ratio == y_i^2 (vacuous at i = 0)

    bool ok() const {
        return self_ratio == self_closed_form && prev_ratio == prev_closed_form && x_matches && y_matches;
    }
};

inline DimRatios dim_ratios(const GammaParams& p) {
    const int d = p.d(), L = p.L(), N = p.N(), i = p.i();
    const int m = L + N + d - 2 * i;
    DimRatios out;
    const BigInt dim_plus = *weyl_dimension(gamma_plus_shape(p), d);
    out.self_ratio = Rational(*weyl_dimension(gamma_shape(p), d), dim_plus);
    out.self_closed_form = Rational(BigInt(m - 1) * (N - i + 1), BigInt(m) * (N + d - i - 1));
    const XySquared xy = xy_squared(p);
    const AlphaBeta ab = alpha_beta(p);
    out.x_matches = ab.alpha * ab.alpha * out.self_ratio == xy.x_sq;
    if (i >= 1) {
        const GammaParams prev = p.with_index(i - 1);
        out.prev_ratio = Rational(*weyl_dimension(gamma_shape(prev), d), dim_plus);
        out.prev_closed_form = Rational(BigInt(m + 1) * (L + d - i - 1), BigInt(m) * (L - i + 1));
        const AlphaBeta ab_prev = alpha_beta(prev);
        out.y_matches = ab_prev.beta * ab_prev.beta * out.prev_ratio == xy.y_sq;
    } else {
        out.y_matches = true;
    }
    return out;
}

inline bool dim_ratio_check(const GammaParams& p) { return dim_ratios(p).ok(); }

/// (a+b+k+1) prod_{j=1}^k (a+j)(b+j)
///   == [prod_{j=1}^{k+1} (a+j)(b+j) - prod_{j=1}^{k+1} (a-1+j)(b-1+j)] / (k+1)
inline bool telescoping_check(const Rational& a, const Rational& b, int k) {
    if (k < 0) throw std::invalid_argument("telescoping_check: k must be nonnegative");
    auto prod = [](const Rational& x, const Rational& y, int upto) {
        Rational out = 1;
        for (int j = 1; j <= upto; ++j) out *= (x + j) * (y + j);
        return out;
    };
    const Rational lhs = (a + b + k + 1) * prod(a, b, k);
    const Rational rhs = (prod(a, b, k + 1) - prod(a - 1, b - 1, k + 1)) / (k + 1);
    return lhs == rhs;
}

struct CoeffRow {
    int i = 0;
    Rational alpha, beta, x_sq, y_sq;
    BigInt g;
    Rational f_sq;
    Rational shared_radicand;
};

struct CoeffTable {
    int d = 0, L = 0, N = 0;
    std::vector<CoeffRow> rows;  // i = 0..L
};

/// Thrown when the Gamma-shape reconstruction disagrees with the closed forms
/// it must reproduce.
class ReconstructionError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Full coefficient sweep for (d, L). Cross-checks the Gamma-shape
/// reconstruction against the add-a-box CG weights and the dimension ratios,
/// throwing ReconstructionError on any mismatch.
inline CoeffTable coeff_table(int d, int L) {
    CoeffTable table{d, L, (d + 1) * L, {}};
    for (int i = 0; i <= L; ++i) {
        const GammaParams p(d, L, i);
        const AlphaBeta ab = alpha_beta(p);
        const XySquared xy = xy_squared(p);

        std::vector<CgTerm> expected;
        if (ab.alpha != 0) expected.push_back({1, ab.alpha});
        if (ab.beta != 0) expected.push_back({d, ab.beta});
        if (cg_add_d(gamma_tableau_chain(p)) != expected)
            throw ReconstructionError("CG weights of Gamma_" + std::to_string(i) + " disagree with alpha/beta (d=" +
                                      std::to_string(d) + ", L=" + std::to_string(L) + ")");
        if (!dim_ratio_check(p))
            throw ReconstructionError("dimension ratios of Gamma_" + std::to_string(i) + " disagree (d=" +
                                      std::to_string(d) + ", L=" + std::to_string(L) + ")");

        table.rows.push_back({i, ab.alpha, ab.beta, xy.x_sq, xy.y_sq, g_coeff(i, d, L), f_squared(i, d, L),
                              shared_radicand(i, d, L)});
    }
    return table;
}

}  // namespace gtprobe
