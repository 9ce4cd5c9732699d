#pragma once

// Young diagrams, Gelfand-Tsetlin patterns, and the Gamma-shaped family of
// tableaux used by the probe state.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gtprobe/rational.hpp"

namespace gtprobe {

/// Weakly decreasing positive row lengths. Trailing zero rows are dropped on
/// construction, so two diagrams compare equal iff they are the same partition.
class YoungDiagram {
  public:
    YoungDiagram() = default;

    explicit YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
        while (!rows_.empty() && rows_.back() == 0) rows_.pop_back();
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            if (rows_[k] <= 0)
                throw std::invalid_argument("YoungDiagram: row lengths must be positive");
            if (k > 0 && rows_[k] > rows_[k - 1])
                throw std::invalid_argument("YoungDiagram: rows must be weakly decreasing");
        }
    }

    YoungDiagram(std::initializer_list<int> rows) : YoungDiagram(std::vector<int>(rows)) {}

    std::span<const int> rows() const { return rows_; }

    /// Number of nonzero rows, l(lambda).
    int length() const { return static_cast<int>(rows_.size()); }

    /// Number of boxes, |lambda|.
    int size() const {
        int total = 0;
        for (int r : rows_) total += r;
        return total;
    }

    bool empty() const { return rows_.empty(); }

    /// Length of row k (1-based); rows past the end read as 0.
    int row(int k) const {
        return (k >= 1 && k <= length()) ? rows_[static_cast<std::size_t>(k - 1)] : 0;
    }

    /// Whether a box can be appended to row k (1-based) keeping a diagram.
    bool can_add_box(int k) const {
        if (k < 1 || k > length() + 1) return false;
        return k == 1 || row(k - 1) > row(k);
    }

    YoungDiagram with_box_in_row(int k) const {
        if (!can_add_box(k))
            throw std::invalid_argument("YoungDiagram: cannot add a box to row " + std::to_string(k));
        std::vector<int> rows = rows_;
        if (k == length() + 1)
            rows.push_back(1);
        else
            ++rows[static_cast<std::size_t>(k - 1)];
        return YoungDiagram(std::move(rows));
    }

    std::string to_string() const {
        std::string out = "(";
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            if (k) out += ",";
            out += std::to_string(rows_[k]);
        }
        return out + ")";
    }

    friend bool operator==(const YoungDiagram&, const YoungDiagram&) = default;
    friend auto operator<=>(const YoungDiagram& a, const YoungDiagram& b) { return a.rows_ <=> b.rows_; }

  private:
    std::vector<int> rows_;
};

/// mu interlaces lambda: l(mu) <= l(lambda) and
/// lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...
inline bool interlaces(const YoungDiagram& mu, const YoungDiagram& lambda) {
    if (mu.length() > lambda.length()) return false;
    for (int k = 1; k <= lambda.length(); ++k) {
        if (mu.row(k) > lambda.row(k)) return false;
        if (mu.row(k) < lambda.row(k + 1)) return false;
    }
    return true;
}

/// Dimension of the U(d) irrep labelled by lambda (Weyl dimension formula).
/// std::nullopt means the irrep vanishes because l(lambda) > d.
inline std::optional<BigInt> weyl_dimension(const YoungDiagram& lambda, int d) {
    if (d < 1) throw std::invalid_argument("weyl_dimension: d must be positive");
    if (lambda.length() > d) return std::nullopt;
    BigInt numer = 1, denom = 1;
    for (int i = 1; i <= d; ++i) {
        for (int j = i + 1; j <= d; ++j) {
            numer *= lambda.row(i) - i - lambda.row(j) + j;
            denom *= j - i;
        }
    }
    return numer / denom;
}

/// Number of standard Young tableaux of shape lambda, n! / prod(hooks).
inline BigInt hook_length_dimension(const YoungDiagram& lambda) {
    BigInt hooks = 1;
    for (int r = 1; r <= lambda.length(); ++r) {
        for (int c = 1; c <= lambda.row(r); ++c) {
            int below = 0;
            while (lambda.row(r + below + 1) >= c) ++below;
            hooks *= (lambda.row(r) - c) + below + 1;
        }
    }
    return factorial(lambda.size()) / hooks;
}

/// All mu interlacing lambda with l(mu) <= d - 1, in lexicographic order.
/// These label the U(d-1) irreps in the restriction of the U(d) irrep lambda.
inline std::vector<YoungDiagram> branching_restrictions(const YoungDiagram& lambda, int d) {
    if (lambda.length() > d)
        throw std::invalid_argument("branching_restrictions: l(lambda) exceeds d");
    std::vector<YoungDiagram> out;
    if (d <= 1) return out;
    const int rows = std::min(lambda.length(), d - 1);
    std::vector<int> mu(static_cast<std::size_t>(rows), 0);
    std::function<void(int)> fill = [&](int k) {
        if (k > rows) {
            out.emplace_back(mu);
            return;
        }
        for (int v = lambda.row(k + 1); v <= lambda.row(k); ++v) {
            mu[static_cast<std::size_t>(k - 1)] = v;
            fill(k + 1);
        }
    };
    fill(1);
    std::sort(out.begin(), out.end());
    return out;
}

/// All partitions of n with at most max_rows rows, lexicographically descending.
inline std::vector<YoungDiagram> partitions(int n, int max_rows) {
    std::vector<YoungDiagram> out;
    std::vector<int> rows;
    std::function<void(int, int)> rec = [&](int remaining, int cap) {
        if (remaining == 0) {
            out.emplace_back(rows);
            return;
        }
        if (static_cast<int>(rows.size()) == max_rows) return;
        for (int v = std::min(remaining, cap); v >= 1; --v) {
            rows.push_back(v);
            rec(remaining - v, v);
            rows.pop_back();
        }
    };
    if (n >= 0) rec(n, n);
    return out;
}

/// Interlacing chain lambda^(1) -> ... -> lambda^(d); equivalently a
/// semistandard tableau with alphabet [d] whose entry-k boxes are
/// lambda^(k) \ lambda^(k-1).
class GTPattern {
  public:
    explicit GTPattern(std::vector<YoungDiagram> chain) : chain_(std::move(chain)) {
        if (chain_.empty()) throw std::invalid_argument("GTPattern: empty chain");
        for (std::size_t k = 0; k < chain_.size(); ++k) {
            if (chain_[k].length() > static_cast<int>(k + 1))
                throw std::invalid_argument("GTPattern: level " + std::to_string(k + 1) + " has too many rows");
            if (k > 0 && !interlaces(chain_[k - 1], chain_[k]))
                throw std::invalid_argument("GTPattern: levels " + std::to_string(k) + " and " +
                                            std::to_string(k + 1) + " do not interlace");
        }
    }

    int alphabet() const { return static_cast<int>(chain_.size()); }
    const YoungDiagram& shape() const { return chain_.back(); }

    /// lambda^(k), 1-based; level 0 is the empty diagram.
    const YoungDiagram& level(int k) const {
        static const YoungDiagram empty;
        return k == 0 ? empty : chain_.at(static_cast<std::size_t>(k - 1));
    }

    std::span<const YoungDiagram> chain() const { return chain_; }

    /// Number of boxes holding each letter 1..d.
    std::vector<int> content() const {
        std::vector<int> out;
        for (int k = 1; k <= alphabet(); ++k) out.push_back(level(k).size() - level(k - 1).size());
        return out;
    }

    friend bool operator==(const GTPattern&, const GTPattern&) = default;

  private:
    std::vector<YoungDiagram> chain_;
};

/// Every GT pattern of shape lambda over alphabet [d].
inline std::vector<GTPattern> gt_patterns(const YoungDiagram& lambda, int d) {
    std::vector<GTPattern> out;
    if (lambda.length() > d) return out;
    std::vector<YoungDiagram> chain(static_cast<std::size_t>(d));
    std::function<void(int)> descend = [&](int k) {
        if (k == 0) {
            out.emplace_back(chain);
            return;
        }
        for (const auto& mu : branching_restrictions(chain[static_cast<std::size_t>(k)], k + 1)) {
            chain[static_cast<std::size_t>(k - 1)] = mu;
            descend(k - 1);
        }
    };
    chain.back() = lambda;
    if (d == 1) {
        out.emplace_back(chain);
        return out;
    }
    descend(d - 1);
    return out;
}

/// Parameters (d, L, i) of a Gamma-shaped tableau; N = (d+1)L and the number
/// of queries is n = (d-1)L + N = 2dL.
class GammaParams {
  public:
    GammaParams(int d, int L, int i) : d_(d), L_(L), i_(i) {
        if (d < 2) throw std::invalid_argument("GammaParams: d must be at least 2");
        if (L < 1) throw std::invalid_argument("GammaParams: L must be at least 1");
        if (i < 0 || i > L) throw std::invalid_argument("GammaParams: index must lie in [0, L]");
    }

    int d() const { return d_; }
    int L() const { return L_; }
    int i() const { return i_; }
    int N() const { return (d_ + 1) * L_; }
    int n() const { return 2 * d_ * L_; }

    GammaParams with_index(int i) const { return GammaParams(d_, L_, i); }

  private:
    int d_, L_, i_;
};

/// gamma_i = (N + L - i, L^{d-2}, i); the last row is absent when i = 0.
inline YoungDiagram gamma_shape(const GammaParams& p) {
    std::vector<int> rows;
    rows.push_back(p.N() + p.L() - p.i());
    for (int k = 0; k < p.d() - 2; ++k) rows.push_back(p.L());
    rows.push_back(p.i());
    return YoungDiagram(std::move(rows));
}

/// gamma_i^+ : gamma_i with one more box in the first row.
inline YoungDiagram gamma_plus_shape(const GammaParams& p) { return gamma_shape(p).with_box_in_row(1); }

/// Chain of Gamma_i: lambda^(k) = (L^k) for k < d and lambda^(d) = gamma_i.
/// Letter d fills N - i boxes of row 1 and i boxes of row d.
inline GTPattern gamma_tableau_chain(const GammaParams& p) {
    std::vector<YoungDiagram> chain;
    for (int k = 1; k < p.d(); ++k) chain.emplace_back(std::vector<int>(static_cast<std::size_t>(k), p.L()));
    chain.push_back(gamma_shape(p));
    return GTPattern(std::move(chain));
}

}  // namespace gtprobe
