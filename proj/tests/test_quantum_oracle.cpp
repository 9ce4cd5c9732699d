#include <gtest/gtest.h>

#include <random>

#include <Eigen/Dense>

#include "gtprobe/quantum_oracle.hpp"

using namespace gtprobe;

namespace {

// Dense E_ab = sum over sites of |a><b| on (C^d)^{(x)n}, letters 0-based,
// site 0 most significant.
Eigen::MatrixXd dense_generator(int a, int b, int d, int n) {
    const auto dim = static_cast<Eigen::Index>(std::pow(d, n));
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        Eigen::Index stride = 1;
        for (int site = n - 1; site >= 0; --site) {
            const Eigen::Index letter = (idx / stride) % d;
            if (letter == b) e(idx + (a - b) * stride, idx) += 1;
            stride *= d;
        }
    }
    return e;
}

Eigen::MatrixXd dense_casimir(int d, int n) {
    const auto dim = static_cast<Eigen::Index>(std::pow(d, n));
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) c += dense_generator(a, b, d, n) * dense_generator(b, a, d, n);
    return c;
}

}  // namespace

TEST(WeightSector, Sizes) {
    EXPECT_EQ(weight_sector(2, 4, std::vector<int>{1, 3}).size(), 4u);
    EXPECT_EQ(weight_sector(3, 6, std::vector<int>{1, 1, 4}).size(), 30u);
    EXPECT_EQ(weight_sector(3, 5, std::vector<int>{5, 0, 0}).size(), 1u);
    EXPECT_TRUE(weight_sector(2, 4, std::vector<int>{1, 2}).empty());
    EXPECT_TRUE(weight_sector(2, 4, std::vector<int>{5, -1}).empty());
}

TEST(WeightOperator, DiagonalIsCounting) {
    const std::vector<int> content{2, 1, 3};
    for (int a = 1; a <= 3; ++a) {
        const SectorOperator op = weight_operator(a, a, 3, 6, content);
        const Eigen::MatrixXd m(op.matrix);
        EXPECT_TRUE(m.isApprox(content[static_cast<std::size_t>(a - 1)] *
                               Eigen::MatrixXd::Identity(m.rows(), m.cols())));
    }
}

TEST(WeightOperator, Commutator) {
    // [E_ab, E_ba] = E_aa - E_bb on a sector of content c acts as c_a - c_b.
    const int d = 3, n = 5;
    const std::vector<int> c{2, 2, 1};
    for (int a = 1; a <= d; ++a)
        for (int b = 1; b <= d; ++b) {
            if (a == b) continue;
            const SectorOperator ba = weight_operator(b, a, d, n, c);
            const SectorOperator ab_back = weight_operator(a, b, d, n, ba.target_content);
            const SectorOperator ab = weight_operator(a, b, d, n, c);
            const SectorOperator ba_back = weight_operator(b, a, d, n, ab.target_content);
            Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ba.source.size()),
                                                        static_cast<Eigen::Index>(ba.source.size()));
            if (ba.matrix.rows() > 0) lhs += Eigen::MatrixXd(ab_back.matrix * ba.matrix);
            if (ab.matrix.rows() > 0) lhs -= Eigen::MatrixXd(ba_back.matrix * ab.matrix);
            const double diff = c[static_cast<std::size_t>(a - 1)] - c[static_cast<std::size_t>(b - 1)];
            EXPECT_TRUE(lhs.isApprox(diff * Eigen::MatrixXd::Identity(lhs.rows(), lhs.cols())))
                << "a=" << a << " b=" << b;
        }
}

TEST(WeightOperator, MatchesDenseGenerator) {
    const int d = 3, n = 4;
    const std::vector<int> c{1, 2, 1};
    const SectorOperator op = weight_operator(1, 2, d, n, c);
    const Eigen::MatrixXd dense = dense_generator(0, 1, d, n);
    const Eigen::MatrixXd m(op.matrix);
    for (std::size_t t = 0; t < op.target.size(); ++t)
        for (std::size_t s = 0; s < op.source.size(); ++s)
            EXPECT_EQ(m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)),
                      dense(static_cast<Eigen::Index>(op.target[t]), static_cast<Eigen::Index>(op.source[s])));
}

TEST(Casimir, EigenvalueFormula) {
    EXPECT_EQ(casimir_eigenvalue(YoungDiagram({4}), 2), 20);
    EXPECT_EQ(casimir_eigenvalue(YoungDiagram({3, 1}), 2), 12);
    EXPECT_EQ(casimir_eigenvalue(YoungDiagram({2, 2}), 2), 8);
}

TEST(Casimir, FullSpaceSpectrumQubits) {
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense_casimir(2, 4)).eigenvalues();
    std::map<long, int> mult;
    for (Eigen::Index k = 0; k < ev.size(); ++k) ++mult[std::lround(ev(k))];
    // dim_U * dim_S for (4), (3,1), (2,2).
    const std::map<long, int> expected{{20, 5}, {12, 9}, {8, 2}};
    EXPECT_EQ(mult, expected);
}

TEST(Extraction, QubitBuckets) {
    const GTVectorSet set = extract_gt_vectors(2, 4);
    EXPECT_EQ(set.L, 1);
    EXPECT_EQ(set.count(), 2u);
    EXPECT_EQ(set.sector_dims, (std::vector<std::size_t>{1, 3}));
    EXPECT_EQ(set.casimir_values, (std::vector<Rational>{20, 12}));
}

TEST(Extraction, QutritBucketsMatchHookLengths) {
    const GTVectorSet set = extract_gt_vectors(3, 6);
    ASSERT_EQ(set.count(), 2u);
    EXPECT_EQ(set.sector_dims[0], hook_length_dimension(YoungDiagram({5, 1})));
    EXPECT_EQ(set.sector_dims[1], hook_length_dimension(YoungDiagram({4, 1, 1})));
}

// v_i are Casimir eigenvectors of the full space and carry the det^L weight
// under the first d-1 letters.
TEST(Extraction, VectorsAgainstDenseOperators) {
    for (auto [d, n] : {std::pair{2, 4}, std::pair{3, 6}, std::pair{2, 8}}) {
        const GTVectorSet set = extract_gt_vectors(d, n);
        const Eigen::MatrixXd c2 = dense_casimir(d, n);
        for (std::size_t i = 0; i < set.count(); ++i) {
            const Eigen::VectorXd v = set.full_vector(i).real();
            EXPECT_NEAR(v.norm(), 1.0, 1e-12);
            const double lambda = to_double(casimir_eigenvalue(gamma_shape(GammaParams(d, set.L, static_cast<int>(i))), d));
            EXPECT_LT((c2 * v - lambda * v).norm(), 1e-9);
            for (int a = 0; a < d - 1; ++a)
                for (int b = 0; b < d - 1; ++b) {
                    const Eigen::VectorXd image = dense_generator(a, b, d, n) * v;
                    const Eigen::VectorXd want = a == b ? Eigen::VectorXd(set.L * v) : Eigen::VectorXd::Zero(v.size());
                    EXPECT_LT((image - want).norm(), 1e-9);
                }
        }
    }
}

TEST(Extraction, CapacityAndArguments) {
    EXPECT_THROW(extract_gt_vectors(5, 10), CapacityError);
    EXPECT_THROW(extract_gt_vectors(2, 20), CapacityError);
    EXPECT_THROW(extract_gt_vectors(2, 6), std::invalid_argument);
    OracleOptions tight;
    tight.capacity = 100;
    EXPECT_THROW(extract_gt_vectors(2, 8, tight), CapacityError);
}

TEST(Haar, UnitaryAndMoments) {
    std::mt19937_64 rng(5);
    for (int d : {2, 3, 4}) {
        double mean = 0;
        const int samples = 20000;
        for (int s = 0; s < samples; ++s) {
            const Unitary u = haar_unitary(d, rng);
            if (s < 20) { EXPECT_TRUE((u.adjoint() * u).isApprox(Unitary::Identity(d, d), 1e-12)); }
            mean += std::norm(u(0, 0));
        }
        mean /= samples;
        // Var |U_11|^2 = (d-1)/(d^2 (d+1)); allow 5 standard errors.
        const double sd = std::sqrt((d - 1.0) / (d * d * (d + 1.0)) / samples);
        EXPECT_NEAR(mean, 1.0 / d, 5 * sd) << "d=" << d;
    }
}

TEST(Haar, SeededDeterminism) {
    EXPECT_TRUE(haar_unitary(3, 17).isApprox(haar_unitary(3, 17)));
    EXPECT_FALSE(haar_unitary(3, 17).isApprox(haar_unitary(3, 18)));
}

TEST(TensorPower, Examples) {
    StateVector v = StateVector::Zero(8);
    v(5) = 1;  // |101>
    EXPECT_TRUE(apply_tensor_power(Unitary::Identity(2, 2), v, 3).isApprox(v));
    const Unitary w = haar_unitary(2, 3);
    StateVector ab = StateVector::Zero(4);
    ab(1) = 1;  // |01>
    Eigen::VectorXcd expected(4);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) expected(2 * x + y) = w(x, 0) * w(y, 1);
    EXPECT_TRUE(apply_tensor_power(w, ab, 2).isApprox(expected, 1e-12));
}

TEST(MatrixElements, SectorMatchesDenseAndOffDiagonalVanishes) {
    const GTVectorSet set = extract_gt_vectors(3, 6);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Unitary w = haar_unitary(3, seed);
        for (std::size_t i = 0; i < set.count(); ++i)
            for (std::size_t j = 0; j < set.count(); ++j) {
                const Complex s = sector_matrix_element(w, set, i, j);
                EXPECT_LT(std::abs(s - dense_matrix_element(w, set, i, j)), 1e-12);
                if (i != j) { EXPECT_LT(std::abs(s), 1e-12); }
            }
    }
}

// The matrix element of a GT vector does not depend on which copy inside its
// isotypic block was picked.
TEST(MatrixElements, IndependentOfBucketChoice) {
    OracleOptions last;
    last.pick = BucketPick::last;
    const GTVectorSet a = extract_gt_vectors(3, 6);
    const GTVectorSet b = extract_gt_vectors(3, 6, last);
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        const Unitary w = haar_unitary(3, seed);
        for (std::size_t i = 0; i < a.count(); ++i)
            EXPECT_LT(std::abs(sector_matrix_element(w, a, i, i) - sector_matrix_element(w, b, i, i)), 1e-12);
    }
}

TEST(CgEmbedding, ProjectionsMatchAlphaBeta) {
    for (auto [d, n] : {std::pair{2, 4}, std::pair{3, 6}, std::pair{2, 8}}) {
        for (const auto& r : verify_cg_embedding(d, n)) {
            EXPECT_LT(r.max_residual(), 1e-8) << "d=" << d << " n=" << n << " i=" << r.i;
        }
    }
    const auto qubit = verify_cg_embedding(2, 4);
    ASSERT_EQ(qubit.size(), 2u);
    EXPECT_NEAR(qubit[0].proj_self, 0.8, 1e-10);
    EXPECT_NEAR(qubit[0].proj_next, 0.2, 1e-10);
    EXPECT_NEAR(qubit[1].proj_self, 1.0, 1e-10);
    EXPECT_NEAR(qubit[1].proj_next, 0.0, 1e-10);
}

TEST(MonteCarlo, QubitFidelity) {
    const MCPair est = mc_protocol(extract_gt_vectors(2, 4), MCOptions{40000, 42, false, std::nullopt});
    EXPECT_NEAR(est.fidelity.mean, 0.875, 3 * est.fidelity.standard_error);
    EXPECT_NEAR(est.total_probability.mean, 1.0, 3 * est.total_probability.standard_error);
    EXPECT_EQ(est.fidelity.samples, 40000u);
}

TEST(MonteCarlo, DeterministicAndSeedConsistent) {
    const GTVectorSet set = extract_gt_vectors(2, 4);
    const MCEstimate a = mc_expected_fidelity(set, MCOptions{5000, 1, false, std::nullopt});
    const MCEstimate b = mc_expected_fidelity(set, MCOptions{5000, 1, false, std::nullopt});
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.standard_error, b.standard_error);
    const MCEstimate c = mc_expected_fidelity(set, MCOptions{5000, 1000003, false, std::nullopt});
    const double joint = std::hypot(a.standard_error, c.standard_error);
    EXPECT_LT(std::abs(a.mean - c.mean), 5 * joint);
}

TEST(MonteCarlo, SingleTermProbeTotalProbability) {
    for (auto [d, n] : {std::pair{2, 4}, std::pair{3, 6}}) {
        const GTVectorSet set = extract_gt_vectors(d, n);
        std::vector<double> e0(set.count(), 0.0);
        e0[0] = 1;
        const MCEstimate t = mc_total_probability(set, MCOptions{20000, 8, false, e0});
        EXPECT_NEAR(t.mean, 1.0, 3 * t.standard_error) << "d=" << d;
    }
}

TEST(MonteCarlo, HaarUnknownUnitary) {
    const MCPair est = mc_protocol(extract_gt_vectors(2, 4), MCOptions{20000, 3, true, std::nullopt});
    EXPECT_NEAR(est.fidelity.mean, 0.875, 3 * est.fidelity.standard_error);
}

TEST(MonteCarlo, Rejects) {
    const GTVectorSet set = extract_gt_vectors(2, 4);
    EXPECT_THROW(mc_protocol(set, MCOptions{10, 1, false, std::nullopt}), std::invalid_argument);
    EXPECT_THROW(mc_protocol(set, MCOptions{1000, 1, false, std::vector<double>{1.0}}), std::invalid_argument);
    EXPECT_THROW(mc_protocol(set, MCOptions{1000, 1, false, std::vector<double>{0.0, 0.0}}), std::invalid_argument);
}
