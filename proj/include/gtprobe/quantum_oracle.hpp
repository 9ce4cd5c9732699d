#pragma once

// Brute-force realization of the protocol inside (C^d)^{(x)n} for small d, n.
//
// The Gamma_i vectors are located without building any tableau basis: on the
// weight sector of content (L, ..., L, N) the vectors transforming as det^L
// under the U(d-1) fixing |d> form the null space of
// M = sum_{a != b < d} E_ba E_ab, and the quadratic Casimir separates that
// null space into one block per shape gamma_i. Each block has dimension
// dim P_{gamma_i}; any unit vector in it is |Gamma_i> (x) |perp> for some
// multiplicity vector |perp>.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gtprobe/fidelity.hpp"
#include "gtprobe/protocol_coeffs.hpp"
#include "gtprobe/rational.hpp"
#include "gtprobe/young.hpp"

namespace gtprobe {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using Unitary = Eigen::MatrixXcd;

/// Requested simulation exceeds the supported size.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The simulator found a structure inconsistent with the representation theory
/// (wrong Casimir spectrum, empty or mis-sized isotypic block).
class OracleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class BucketPick { first, last };

struct OracleOptions {
    double null_tolerance = 1e-9;     // relative to the largest eigenvalue of M
    double casimir_tolerance = 1e-6;  // absolute, on Casimir eigenvalues
    BucketPick pick = BucketPick::first;
    std::uint64_t capacity = 100000;  // upper bound on d^n
};

// ---------------------------------------------------------------------------
// Weight sectors and generators

namespace detail {

inline std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t out = 1;
    for (int k = 0; k < exp; ++k) out *= base;
    return out;
}

/// Letters (0-based) of a basis index, most significant site first.
inline std::vector<int> digits(std::uint64_t index, int d, int n) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::uint64_t>(d));
        index /= static_cast<std::uint64_t>(d);
    }
    return out;
}

inline std::unordered_map<std::uint64_t, Eigen::Index> position_map(std::span<const std::uint64_t> sector) {
    std::unordered_map<std::uint64_t, Eigen::Index> pos;
    pos.reserve(sector.size());
    for (std::size_t k = 0; k < sector.size(); ++k) pos.emplace(sector[k], static_cast<Eigen::Index>(k));
    return pos;
}

}  // namespace detail

/// Basis indices (base-d strings, site 1 most significant, letter a stored as
/// a-1) of length n with the given letter counts, in lexicographic order.
inline std::vector<std::uint64_t> weight_sector(int d, int n, std::span<const int> content) {
    std::vector<std::uint64_t> out;
    if (static_cast<int>(content.size()) != d) return out;
    int total = 0;
    for (int c : content) {
        if (c < 0) return out;
        total += c;
    }
    if (total != n) return out;
    std::vector<int> left(content.begin(), content.end());
    std::function<void(int, std::uint64_t)> rec = [&](int site, std::uint64_t prefix) {
        if (site == n) {
            out.push_back(prefix);
            return;
        }
        for (int a = 0; a < d; ++a) {
            if (left[static_cast<std::size_t>(a)] == 0) continue;
            --left[static_cast<std::size_t>(a)];
            rec(site + 1, prefix * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(a));
            ++left[static_cast<std::size_t>(a)];
        }
    };
    rec(0, 0);
    return out;
}

/// E_ab = sum over sites of |a><b|, restricted to a map from the sector of
/// `content` to the sector of content + e_a - e_b.
struct SectorOperator {
    std::vector<int> source_content, target_content;
    std::vector<std::uint64_t> source, target;
    Eigen::SparseMatrix<double> matrix;  // target.size() x source.size()
};

/// a and b are 1-based letters.
inline SectorOperator weight_operator(int a, int b, int d, int n, std::span<const int> content) {
    if (a < 1 || a > d || b < 1 || b > d) throw std::invalid_argument("weight_operator: letters must lie in [1, d]");
    SectorOperator op;
    op.source_content.assign(content.begin(), content.end());
    op.target_content = op.source_content;
    op.source = weight_sector(d, n, content);
    if (a != b) {
        auto& tc = op.target_content;
        if (tc[static_cast<std::size_t>(b - 1)] == 0) {
            op.matrix.resize(0, static_cast<Eigen::Index>(op.source.size()));
            return op;
        }
        --tc[static_cast<std::size_t>(b - 1)];
        ++tc[static_cast<std::size_t>(a - 1)];
    }
    op.target = weight_sector(d, n, op.target_content);
    const auto pos = detail::position_map(op.target);

    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t col = 0; col < op.source.size(); ++col) {
        const auto letters = detail::digits(op.source[col], d, n);
        for (int site = 0; site < n; ++site) {
            if (letters[static_cast<std::size_t>(site)] != b - 1) continue;
            const std::uint64_t place = detail::ipow(static_cast<std::uint64_t>(d), n - 1 - site);
            const std::uint64_t image =
                op.source[col] - place * static_cast<std::uint64_t>(b - 1) + place * static_cast<std::uint64_t>(a - 1);
            entries.emplace_back(pos.at(image), static_cast<Eigen::Index>(col), 1.0);
        }
    }
    op.matrix.resize(static_cast<Eigen::Index>(op.target.size()), static_cast<Eigen::Index>(op.source.size()));
    op.matrix.setFromTriplets(entries.begin(), entries.end());
    return op;
}

/// Eigenvalue of sum_{a,b} E_ab E_ba on the U(d) irrep lambda:
/// sum_j lambda_j (lambda_j + d + 1 - 2j).
inline BigInt casimir_eigenvalue(const YoungDiagram& lambda, int d) {
    BigInt out = 0;
    for (int j = 1; j <= lambda.length(); ++j) out += BigInt(lambda.row(j)) * (lambda.row(j) + d + 1 - 2 * j);
    return out;
}

namespace detail {

/// sum over ordered pairs (x, y), x != y, both in letters[0, max_letter), of
/// E_xy^T E_xy on the sector of `content`. E_yx E_xy = E_xy^T E_xy there.
inline Eigen::MatrixXd gram_of_generators(int d, int n, std::span<const int> content, int max_letter) {
    const auto size = static_cast<Eigen::Index>(weight_sector(d, n, content).size());
    Eigen::SparseMatrix<double> acc(size, size);
    for (int x = 1; x <= max_letter; ++x) {
        for (int y = 1; y <= max_letter; ++y) {
            if (x == y) continue;
            const SectorOperator op = weight_operator(x, y, d, n, content);
            if (op.matrix.rows() == 0) continue;
            acc += Eigen::SparseMatrix<double>(op.matrix.transpose() * op.matrix);
        }
    }
    return Eigen::MatrixXd(acc);
}

}  // namespace detail

/// Sector decomposition of the det^L-covariant vectors into Casimir blocks.
struct IsotypicBlocks {
    int d = 0, sites = 0;
    std::vector<int> content;
    std::vector<std::uint64_t> sector;
    std::vector<YoungDiagram> shapes;
    std::vector<Rational> casimir_values;
    std::vector<Eigen::MatrixXd> bases;  // orthonormal columns in sector coordinates
    Eigen::Index null_dim = 0;
};

/// Splits the common null space of the U(d-1) off-diagonal generators on the
/// sector of `content` into Casimir eigenspaces, one per expected shape.
inline IsotypicBlocks decompose_covariant_sector(int d, int sites, std::vector<int> content,
                                                 const std::vector<YoungDiagram>& shapes, const OracleOptions& opt) {
    IsotypicBlocks out;
    out.d = d;
    out.sites = sites;
    out.content = content;
    out.sector = weight_sector(d, sites, content);
    out.shapes = shapes;
    const auto size = static_cast<Eigen::Index>(out.sector.size());
    if (size == 0) throw OracleError("empty weight sector");

    // det^L-covariant subspace: null space of M.
    Eigen::MatrixXd null_basis;
    const Eigen::MatrixXd m = detail::gram_of_generators(d, sites, content, d - 1);
    if (m.norm() == 0) {
        null_basis = Eigen::MatrixXd::Identity(size, size);
    } else {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        const double threshold = opt.null_tolerance * solver.eigenvalues().cwiseAbs().maxCoeff();
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < size; ++k)
            if (std::abs(solver.eigenvalues()(k)) < threshold) keep.push_back(k);
        null_basis.resize(size, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c)
            null_basis.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(keep[c]);
    }
    out.null_dim = null_basis.cols();
    if (out.null_dim == 0) throw OracleError("no det-covariant vectors in the sector");

    // Casimir restricted to the null space.
    Eigen::MatrixXd casimir = detail::gram_of_generators(d, sites, content, d);
    double diag = 0;
    for (int c : content) diag += static_cast<double>(c) * c;
    casimir.diagonal().array() += diag;
    const Eigen::MatrixXd reduced = null_basis.transpose() * casimir * null_basis;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> csolver(0.5 * (reduced + reduced.transpose()));

    std::vector<double> expected;
    for (const auto& shape : shapes) {
        const BigInt c = casimir_eigenvalue(shape, d);
        out.casimir_values.emplace_back(c);
        expected.push_back(to_double(c));
    }
    for (std::size_t a = 0; a < expected.size(); ++a)
        for (std::size_t b = a + 1; b < expected.size(); ++b)
            if (std::abs(expected[a] - expected[b]) <= opt.casimir_tolerance)
                throw OracleError("Casimir values of " + shapes[a].to_string() + " and " + shapes[b].to_string() +
                                  " coincide");

    std::vector<std::vector<Eigen::Index>> members(shapes.size());
    for (Eigen::Index k = 0; k < csolver.eigenvalues().size(); ++k) {
        const double ev = csolver.eigenvalues()(k);
        std::size_t hit = shapes.size();
        for (std::size_t s = 0; s < expected.size(); ++s)
            if (std::abs(ev - expected[s]) <= opt.casimir_tolerance) hit = s;
        if (hit == shapes.size())
            throw OracleError("unexpected Casimir eigenvalue " + std::to_string(ev) + " in the covariant sector");
        members[hit].push_back(k);
    }
    for (std::size_t s = 0; s < shapes.size(); ++s) {
        if (members[s].empty()) throw OracleError("empty isotypic block for shape " + shapes[s].to_string());
        const BigInt hook = hook_length_dimension(shapes[s]);
        if (BigInt(members[s].size()) != hook)
            throw OracleError("block for " + shapes[s].to_string() + " has dimension " +
                              std::to_string(members[s].size()) + ", expected " + hook.str());
        Eigen::MatrixXd basis(size, static_cast<Eigen::Index>(members[s].size()));
        for (std::size_t c = 0; c < members[s].size(); ++c)
            basis.col(static_cast<Eigen::Index>(c)) = null_basis * csolver.eigenvectors().col(members[s][c]);
        out.bases.push_back(std::move(basis));
    }
    return out;
}

/// Unit vectors v_i, each realizing |Gamma_i> (x) |perp_i> in (C^d)^{(x)n}.
struct GTVectorSet {
    int d = 0, n = 0, L = 0;
    std::vector<std::uint64_t> sector;
    std::vector<Eigen::VectorXd> sector_vectors;  // v_i in sector coordinates (real)
    std::vector<Rational> casimir_values;
    std::vector<std::size_t> sector_dims;  // isotypic block dimension per i
    Eigen::Index null_dim = 0;

    std::size_t count() const { return sector_vectors.size(); }

    /// v_i as a dense vector of dimension d^n.
    StateVector full_vector(std::size_t i) const {
        StateVector out = StateVector::Zero(static_cast<Eigen::Index>(detail::ipow(static_cast<std::uint64_t>(d), n)));
        for (std::size_t k = 0; k < sector.size(); ++k)
            out(static_cast<Eigen::Index>(sector[k])) = sector_vectors[i](static_cast<Eigen::Index>(k));
        return out;
    }
};

inline void check_capacity(int d, int n, const OracleOptions& opt) {
    if (d < 2 || d > 4) throw CapacityError("simulator supports d in {2, 3, 4}, got d=" + std::to_string(d));
    if (n <= 0 || n % (2 * d) != 0)
        throw std::invalid_argument("n must be a positive multiple of 2d (d=" + std::to_string(d) +
                                    ", n=" + std::to_string(n) + ")");
    double size = 1;
    for (int k = 0; k < n; ++k) size *= d;
    if (size > static_cast<double>(opt.capacity))
        throw CapacityError("simulator capacity exceeded: d^n = " + std::to_string(static_cast<long long>(size)) +
                            " > " + std::to_string(opt.capacity));
}

namespace detail {

inline std::vector<int> gamma_content(int d, int L, int last) {
    std::vector<int> c(static_cast<std::size_t>(d - 1), L);
    c.push_back(last);
    return c;
}

}  // namespace detail

inline GTVectorSet extract_gt_vectors(int d, int n, const OracleOptions& opt = {}) {
    check_capacity(d, n, opt);
    const int L = n / (2 * d);
    const int N = (d + 1) * L;
    std::vector<YoungDiagram> shapes;
    for (int i = 0; i <= L; ++i) shapes.push_back(gamma_shape(GammaParams(d, L, i)));
    IsotypicBlocks blocks = decompose_covariant_sector(d, n, detail::gamma_content(d, L, N), shapes, opt);

    GTVectorSet set;
    set.d = d;
    set.n = n;
    set.L = L;
    set.sector = std::move(blocks.sector);
    set.casimir_values = std::move(blocks.casimir_values);
    set.null_dim = blocks.null_dim;
    for (const auto& basis : blocks.bases) {
        set.sector_dims.push_back(static_cast<std::size_t>(basis.cols()));
        Eigen::VectorXd v = opt.pick == BucketPick::first ? basis.col(0) : basis.col(basis.cols() - 1);
        set.sector_vectors.push_back(v / v.norm());
    }
    return set;
}

// ---------------------------------------------------------------------------
// Haar sampling and tensor powers

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// R's diagonal moved into Q.
inline Unitary haar_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Unitary z(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) z(r, c) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
    const Eigen::HouseholderQR<Unitary> qr(z);
    Unitary q = qr.householderQ();
    const Unitary r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
        const Complex diag = r(c, c);
        const double mag = std::abs(diag);
        if (mag > 0) q.col(c) *= diag / mag;
    }
    return q;
}

inline Unitary haar_unitary(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return haar_unitary(d, rng);
}

/// W^{(x)n} v by n single-site contractions.
inline StateVector apply_tensor_power(const Unitary& w, const StateVector& v, int n) {
    const auto d = w.rows();
    if (w.cols() != d) throw std::invalid_argument("apply_tensor_power: matrix must be square");
    const auto total = static_cast<Eigen::Index>(detail::ipow(static_cast<std::uint64_t>(d), n));
    if (v.size() != total) throw std::invalid_argument("apply_tensor_power: vector dimension must be d^n");
    StateVector cur = v, next(total);
    Eigen::Index stride = 1;
    for (int site = n - 1; site >= 0; --site) {
        const Eigen::Index block = stride * d;
        for (Eigen::Index base = 0; base < total; base += block) {
            for (Eigen::Index low = 0; low < stride; ++low) {
                for (Eigen::Index r = 0; r < d; ++r) {
                    Complex acc = 0;
                    for (Eigen::Index c = 0; c < d; ++c) acc += w(r, c) * cur(base + c * stride + low);
                    next(base + r * stride + low) = acc;
                }
            }
        }
        std::swap(cur, next);
        stride = block;
    }
    return cur;
}

/// <v_i| W^{(x)n} |v_j> summed over pairs of sector strings.
inline Complex sector_matrix_element(const Unitary& w, const GTVectorSet& set, std::size_t i, std::size_t j) {
    const std::size_t size = set.sector.size();
    std::vector<std::vector<int>> letters(size);
    for (std::size_t k = 0; k < size; ++k) letters[k] = detail::digits(set.sector[k], set.d, set.n);
    const auto& vi = set.sector_vectors[i];
    const auto& vj = set.sector_vectors[j];
    Complex total = 0;
    for (std::size_t s = 0; s < size; ++s) {
        const double left = vi(static_cast<Eigen::Index>(s));
        if (left == 0) continue;
        Complex row = 0;
        for (std::size_t t = 0; t < size; ++t) {
            const double right = vj(static_cast<Eigen::Index>(t));
            if (right == 0) continue;
            Complex prod = right;
            for (int site = 0; site < set.n; ++site)
                prod *= w(letters[s][static_cast<std::size_t>(site)], letters[t][static_cast<std::size_t>(site)]);
            row += prod;
        }
        total += left * row;
    }
    return total;
}

/// Same matrix element through apply_tensor_power on the dense vectors.
inline Complex dense_matrix_element(const Unitary& w, const GTVectorSet& set, std::size_t i, std::size_t j) {
    const StateVector image = apply_tensor_power(w, set.full_vector(j), set.n);
    return set.full_vector(i).dot(image);
}

// ---------------------------------------------------------------------------
// Clebsch-Gordan embedding

struct CgResidual {
    int i = 0;
    double proj_self = 0;  // ||P_{gamma_i^+} (v_i (x) |d>)||^2
    double proj_next = 0;  // ||P_{gamma_{i+1}^+} (v_i (x) |d>)||^2, 0 when i = L
    Rational alpha, beta;
    double residual_alpha = 0;
    double residual_beta = 0;
    double residual_total = 0;  // |proj_self + proj_next - 1|

    double max_residual() const { return std::max({residual_alpha, residual_beta, residual_total}); }
};

/// Projects v_i (x) |d> onto the gamma_i^+ and gamma_{i+1}^+ blocks of the
/// (n+1)-site covariant sector and compares the weights with alpha_i, beta_i.
inline std::vector<CgResidual> verify_cg_embedding(const GTVectorSet& set, const OracleOptions& opt = {}) {
    const int d = set.d, L = set.L, N = (d + 1) * L;
    std::vector<YoungDiagram> shapes;
    for (int i = 0; i <= L; ++i) shapes.push_back(gamma_plus_shape(GammaParams(d, L, i)));
    const IsotypicBlocks plus = decompose_covariant_sector(d, set.n + 1, detail::gamma_content(d, L, N + 1), shapes, opt);
    const auto pos = detail::position_map(plus.sector);

    std::vector<CgResidual> out;
    for (int i = 0; i <= L; ++i) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(plus.sector.size()));
        const auto& v = set.sector_vectors[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < set.sector.size(); ++k) {
            const std::uint64_t image = set.sector[k] * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(d - 1);
            w(pos.at(image)) = v(static_cast<Eigen::Index>(k));
        }
        CgResidual r;
        r.i = i;
        const AlphaBeta ab = alpha_beta(GammaParams(d, L, i));
        r.alpha = ab.alpha;
        r.beta = ab.beta;
        r.proj_self = (plus.bases[static_cast<std::size_t>(i)].transpose() * w).squaredNorm();
        r.proj_next = i < L ? (plus.bases[static_cast<std::size_t>(i + 1)].transpose() * w).squaredNorm() : 0.0;
        r.residual_alpha = std::abs(r.proj_self - to_double(ab.alpha));
        r.residual_beta = std::abs(r.proj_next - to_double(ab.beta));
        r.residual_total = std::abs(r.proj_self + r.proj_next - 1);
        out.push_back(r);
    }
    return out;
}

inline std::vector<CgResidual> verify_cg_embedding(int d, int n, const OracleOptions& opt = {}) {
    return verify_cg_embedding(extract_gt_vectors(d, n, opt), opt);
}

// ---------------------------------------------------------------------------
// Monte Carlo over the measurement outcome

struct MCEstimate {
    double mean = 0;
    double standard_error = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

struct MCOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
    bool haar_u = false;                       // also draw the unknown U from the Haar measure
    std::optional<std::vector<double>> probe;  // defaults to the normalized paper probe
};

/// Fixed number of independent chunks; chunk k is seeded with seed ^ k.
inline constexpr std::size_t kMonteCarloChunks = 8;

struct MCPair {
    MCEstimate fidelity;
    MCEstimate total_probability;
};

namespace detail {

struct RunningMoments {
    std::size_t count = 0;
    double mean = 0, m2 = 0;

    void push(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const RunningMoments& o) {
        if (o.count == 0) return;
        const double total = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / total;
        count += o.count;
    }

    MCEstimate estimate(std::uint64_t seed) const {
        const double var = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
        return {mean, std::sqrt(var / static_cast<double>(count)), count, seed};
    }
};

struct ChunkResult {
    RunningMoments fidelity, total;
};

}  // namespace detail

/// Averages, over Haar-random outcomes U_hat, the PGM density
/// T = |sum_i f_i sqrt(dim Q_{gamma_i}) <v_i| (U_hat^dag U)^{(x)n} |v_i>|^2
/// and the fidelity integrand F = T |<d|U_hat^dag U|d>|^2.
inline MCPair mc_protocol(const GTVectorSet& set, const MCOptions& mc) {
    if (mc.samples < 100) throw std::invalid_argument("Monte Carlo needs at least 100 samples");
    const int d = set.d, L = set.L;
    std::vector<double> probe = mc.probe ? *mc.probe : normalized_paper_probe(d, L);
    if (probe.size() != set.count()) throw std::invalid_argument("probe length must be L+1");
    double norm = 0;
    for (double v : probe) norm += v * v;
    if (norm == 0) throw std::invalid_argument("probe must be nonzero");
    std::vector<double> weight;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const BigInt dim = *weyl_dimension(gamma_shape(GammaParams(d, L, static_cast<int>(i))), d);
        weight.push_back(probe[i] / std::sqrt(norm) * std::sqrt(to_double(dim)));
    }

    const std::size_t size = set.sector.size();
    std::vector<int> letters(size * static_cast<std::size_t>(set.n));
    for (std::size_t k = 0; k < size; ++k) {
        const auto digits = detail::digits(set.sector[k], d, set.n);
        std::copy(digits.begin(), digits.end(), letters.begin() + static_cast<std::ptrdiff_t>(k * set.n));
    }

    auto run_chunk = [&](std::size_t chunk, std::size_t count) {
        std::mt19937_64 rng(mc.seed ^ static_cast<std::uint64_t>(chunk));
        detail::ChunkResult res;
        std::vector<Complex> diag(set.count());
        for (std::size_t s = 0; s < count; ++s) {
            Unitary w = haar_unitary(d, rng).adjoint();
            if (mc.haar_u) w = w * haar_unitary(d, rng);
            for (std::size_t i = 0; i < set.count(); ++i) {
                const auto& v = set.sector_vectors[i];
                Complex total = 0;
                for (std::size_t a = 0; a < size; ++a) {
                    const double left = v(static_cast<Eigen::Index>(a));
                    if (left == 0) continue;
                    const int* la = &letters[a * static_cast<std::size_t>(set.n)];
                    Complex row = 0;
                    for (std::size_t b = 0; b < size; ++b) {
                        const double right = v(static_cast<Eigen::Index>(b));
                        if (right == 0) continue;
                        const int* lb = &letters[b * static_cast<std::size_t>(set.n)];
                        Complex prod = right;
                        for (int site = 0; site < set.n; ++site) prod *= w(la[site], lb[site]);
                        row += prod;
                    }
                    total += left * row;
                }
                diag[i] = total;
            }
            Complex amp = 0;
            for (std::size_t i = 0; i < set.count(); ++i) amp += weight[i] * diag[i];
            const double density = std::norm(amp);
            res.total.push(density);
            res.fidelity.push(density * std::norm(w(d - 1, d - 1)));
        }
        return res;
    };

    std::vector<std::size_t> counts(kMonteCarloChunks, mc.samples / kMonteCarloChunks);
    for (std::size_t k = 0; k < mc.samples % kMonteCarloChunks; ++k) ++counts[k];
    std::vector<detail::ChunkResult> results(kMonteCarloChunks);
    if (std::thread::hardware_concurrency() > 1) {
        std::vector<std::future<detail::ChunkResult>> futures;
        for (std::size_t k = 0; k < kMonteCarloChunks; ++k)
            futures.push_back(std::async(std::launch::async, run_chunk, k, counts[k]));
        for (std::size_t k = 0; k < kMonteCarloChunks; ++k) results[k] = futures[k].get();
    } else {
        for (std::size_t k = 0; k < kMonteCarloChunks; ++k) results[k] = run_chunk(k, counts[k]);
    }
    detail::RunningMoments fid, tot;
    for (const auto& r : results) {
        fid.merge(r.fidelity);
        tot.merge(r.total);
    }
    return {fid.estimate(mc.seed), tot.estimate(mc.seed)};
}

inline MCEstimate mc_expected_fidelity(const GTVectorSet& set, const MCOptions& mc) {
    return mc_protocol(set, mc).fidelity;
}

inline MCEstimate mc_total_probability(const GTVectorSet& set, const MCOptions& mc) {
    return mc_protocol(set, mc).total_probability;
}

inline MCEstimate mc_expected_fidelity(int d, int n, std::size_t samples, std::uint64_t seed) {
    return mc_expected_fidelity(extract_gt_vectors(d, n), MCOptions{samples, seed, false, std::nullopt});
}

inline MCEstimate mc_total_probability(int d, int n, std::size_t samples, std::uint64_t seed) {
    return mc_total_probability(extract_gt_vectors(d, n), MCOptions{samples, seed, false, std::nullopt});
}

}  // namespace gtprobe
