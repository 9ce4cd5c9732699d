#include <gtest/gtest.h>

#include <random>

#include "gtprobe/protocol_coeffs.hpp"

using namespace gtprobe;

namespace {

Rational q(long long p, long long r) { return ratio(p, r); }

}  // namespace

TEST(Rational, RatioNormalizesSign) {
    EXPECT_EQ(ratio(2, -4), q(-1, 2));
    EXPECT_EQ(to_string(ratio(-6, -4)), "3/2");
    EXPECT_EQ(to_string(Rational(5)), "5");
    EXPECT_THROW(ratio(1, 0), std::domain_error);
}

TEST(AlphaBeta, Examples) {
    const AlphaBeta a = alpha_beta(GammaParams(2, 1, 0));
    EXPECT_EQ(a.alpha, q(4, 5));
    EXPECT_EQ(a.beta, q(1, 5));
    const AlphaBeta b = alpha_beta(GammaParams(3, 1, 0));
    EXPECT_EQ(b.alpha, q(6, 7));
    EXPECT_EQ(b.beta, q(1, 7));
}

TEST(AlphaBeta, BetaVanishesAtLastIndexAndSumsToOne) {
    for (int d = 2; d <= 7; ++d)
        for (int L = 1; L <= 10; ++L) {
            EXPECT_EQ(alpha_beta(GammaParams(d, L, L)).beta, 0);
            for (int i = 0; i <= L; ++i) {
                const AlphaBeta ab = alpha_beta(GammaParams(d, L, i));
                EXPECT_EQ(ab.alpha + ab.beta, 1);
                EXPECT_GT(ab.alpha, 0);
            }
        }
}

TEST(CgAddD, GammaChainMatchesAlphaBeta) {
    const auto terms = cg_add_d(gamma_tableau_chain(GammaParams(2, 1, 0)));
    const std::vector<CgTerm> expected{{1, q(4, 5)}, {2, q(1, 5)}};
    EXPECT_EQ(terms, expected);
    for (int d = 2; d <= 6; ++d)
        for (int L = 1; L <= 8; ++L)
            for (int i = 0; i <= L; ++i) {
                const GammaParams p(d, L, i);
                const AlphaBeta ab = alpha_beta(p);
                std::vector<CgTerm> want;
                if (ab.alpha != 0) want.push_back({1, ab.alpha});
                if (ab.beta != 0) want.push_back({d, ab.beta});
                EXPECT_EQ(cg_add_d(gamma_tableau_chain(p)), want) << "d=" << d << " L=" << L << " i=" << i;
            }
}

TEST(CgAddD, SingleBoxQubit) {
    const GTPattern s({YoungDiagram({1}), YoungDiagram({1})});
    const std::vector<CgTerm> expected{{1, q(1, 2)}, {2, q(1, 2)}};
    EXPECT_EQ(cg_add_d(s), expected);
}

// Sum of squared CG coefficients is one for every GT pattern (unitarity).
TEST(CgAddD, UnitarityOverAllSmallPatterns) {
    std::size_t patterns = 0;
    for (int d = 1; d <= 4; ++d)
        for (int n = 0; n <= 8; ++n)
            for (const auto& lambda : partitions(n, d))
                for (const auto& s : gt_patterns(lambda, d)) {
                    Rational total = 0;
                    for (const auto& t : cg_add_d(s)) {
                        EXPECT_GT(t.c_sq, 0);
                        EXPECT_TRUE(lambda.can_add_box(t.row));
                        total += t.c_sq;
                    }
                    EXPECT_EQ(total, 1) << lambda.to_string() << " d=" << d;
                    ++patterns;
                }
    EXPECT_GT(patterns, 1000u);
}

TEST(XySquared, Examples) {
    EXPECT_EQ(xy_squared(GammaParams(2, 1, 0)).x_sq, q(8, 15));
    const XySquared a = xy_squared(GammaParams(2, 1, 1));
    EXPECT_EQ(a.x_sq, q(3, 4));
    EXPECT_EQ(a.y_sq, q(1, 20));
    EXPECT_EQ(xy_squared(GammaParams(3, 1, 1)).y_sq, q(1, 21));
}

TEST(DimRatios, Examples) {
    const DimRatios r = dim_ratios(GammaParams(2, 1, 0));
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.self_ratio, q(5, 6));
    EXPECT_TRUE(dim_ratio_check(GammaParams(3, 2, 1)));
    const DimRatios s = dim_ratios(GammaParams(2, 1, 1));
    EXPECT_TRUE(s.ok());
    EXPECT_EQ(s.self_ratio, q(3, 4));
}

TEST(DimRatios, HoldOnGrid) {
    for (int d = 2; d <= 6; ++d)
        for (int L = 1; L <= 10; ++L)
            for (int i = 0; i <= L; ++i) EXPECT_TRUE(dim_ratio_check(GammaParams(d, L, i)));
}

TEST(GCoeff, Examples) {
    EXPECT_EQ(g_coeff(-1, 2, 1), 0);
    EXPECT_EQ(g_coeff(0, 2, 1), 6);
    EXPECT_EQ(g_coeff(1, 2, 1), 10);
    EXPECT_THROW(g_coeff(2, 2, 1), std::invalid_argument);
    EXPECT_THROW(g_coeff(-2, 2, 1), std::invalid_argument);
}

TEST(GCoeff, Recurrence) {
    for (int d = 2; d <= 8; ++d)
        for (int L = 1; L <= 20; ++L) {
            const int N = (d + 1) * L;
            for (int i = 0; i <= L; ++i) EXPECT_EQ(g_coeff(i, d, L) - g_coeff(i - 1, d, L), L + N + d - 2 * i);
        }
}

TEST(FSquared, Examples) {
    EXPECT_EQ(f_squared(0, 2, 1), 180);
    EXPECT_EQ(f_squared(1, 2, 1), 300);
    EXPECT_EQ(f_squared(-1, 2, 1), 0);
}

// f_i x_i and f_{i-1} y_i share the radicand R_i.
TEST(FSquared, SharedRadicand) {
    for (int d = 2; d <= 6; ++d)
        for (int L = 1; L <= 10; ++L) {
            const int N = (d + 1) * L;
            for (int i = 0; i <= L; ++i) {
                const XySquared xy = xy_squared(GammaParams(d, L, i));
                const Rational r = shared_radicand(i, d, L);
                const BigInt g = g_coeff(i, d, L), gp = g_coeff(i - 1, d, L);
                EXPECT_EQ(f_squared(i, d, L) * xy.x_sq, Rational(g * g * (N - i + 1) * (N - i + 1)) * r);
                if (i > 0) {
                    EXPECT_EQ(f_squared(i - 1, d, L) * xy.y_sq,
                              Rational(gp * gp * (L + d - i - 1) * (L + d - i - 1)) * r);
                }
            }
        }
}

TEST(Telescoping, Examples) {
    EXPECT_TRUE(telescoping_check(0, 0, 0));
    EXPECT_TRUE(telescoping_check(q(3, 2), q(-1, 3), 5));
    EXPECT_THROW(telescoping_check(0, 0, -1), std::invalid_argument);
}

TEST(Telescoping, RandomRationals) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 30), k(0, 25);
    for (int t = 0; t < 200; ++t) {
        const Rational a = q(num(rng), den(rng));
        const Rational b = q(num(rng), den(rng));
        const int kk = k(rng);
        EXPECT_TRUE(telescoping_check(a, b, kk)) << to_string(a) << " " << to_string(b) << " " << kk;
    }
}

TEST(CoeffTable, RowsAndCrossChecks) {
    const CoeffTable t = coeff_table(2, 1);
    EXPECT_EQ(t.N, 3);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].alpha, q(4, 5));
    EXPECT_EQ(t.rows[0].x_sq, q(8, 15));
    EXPECT_EQ(t.rows[0].g, 6);
    EXPECT_EQ(t.rows[0].f_sq, 180);
    for (int d = 2; d <= 6; ++d)
        for (int L = 1; L <= 6; ++L) EXPECT_NO_THROW(coeff_table(d, L));
}
