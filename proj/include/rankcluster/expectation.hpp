#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rankcluster/ranking.hpp"
#include "rankcluster/similarity.hpp"

namespace rankcluster {

// C(n, k) with the convention that out-of-range k yields 0, which keeps the
// p = 0 and p = S endpoints of the distance formulas well defined.
inline double binomial(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0.0;
    if (k > n - k) k = n - k;
    double result = 1.0;
    for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

// sum_{i=1}^{S-1} i (S - i): total distance over all position pairs of one
// block of S consecutive ranks. Equals S (S-1) (S+1) / 6.
inline double block_distance_sum(int block_size) {
    double total = 0.0;
    for (int i = 1; i < block_size; ++i) total += static_cast<double>(i) * (block_size - i);
    return total;
}

// Mean |a - b| over all unordered pairs of ranks 0..n-1: (n + 1) / 3.
inline double expected_overall_distance(int n) {
    if (n < 2) throw std::invalid_argument("expected distance needs at least two items");
    return (n + 1) / 3.0;
}

// Companion similarity value 1 - (n + 1) / (3 n).
inline double expected_overall_similarity(int n) {
    return 1.0 - expected_overall_distance(n) / n;
}

// Intracategory distance formula with p swaps for a concrete set X of swap-in
// positions (1-based, distinct, within [1, S]):
//
//   [ C(S,p)   * sum_{i<j} |X_i - X_j|
//   + C(S-1,p) * sum_{i=1}^{S} sum_{j} |X_j - i|
//   + C(S-2,p) * sum_{i=1}^{S-1} i (S - i) ] / ( C(S,2) C(S,p) )
inline double expected_intra_distance(int category_size, int swaps, std::span<const int> positions) {
    const int S = category_size;
    const int p = swaps;
    if (S < 2) throw std::invalid_argument("category size must be >= 2");
    if (p < 0 || p > S - 2)
        throw std::invalid_argument("swap count must satisfy 0 <= p <= S - 2");
    if (static_cast<int>(positions.size()) != p)
        throw std::invalid_argument("need exactly p swap-in positions");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] < 1 || positions[i] > S)
            throw std::invalid_argument("swap-in positions must lie in [1, S]");
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            if (positions[i] == positions[j])
                throw std::invalid_argument("swap-in positions must be distinct");
        }
    }

    double cross = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            cross += std::abs(positions[i] - positions[j]);

    double against_all = 0.0;
    for (int i = 1; i <= S; ++i)
        for (int x : positions) against_all += std::abs(x - i);

    const double numerator = binomial(S, p) * cross + binomial(S - 1, p) * against_all +
                             binomial(S - 2, p) * block_distance_sum(S);
    return numerator / (binomial(S, 2) * binomial(S, p));
}

namespace detail {

// Visit every k-subset of {0, .., n-1} in lexicographic order.
template <typename Fn>
inline void for_each_combination(int n, int k, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
        fn(std::span<const int>(idx));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace detail

// The formula above averaged uniformly over all C(S, p) distinct sets of
// swap-in positions, which is what a single curve point per p requires.
inline double expected_intra_distance_averaged(int category_size, int swaps) {
    double total = 0.0;
    double arrangements = 0.0;
    std::vector<int> positions(static_cast<std::size_t>(swaps));
    detail::for_each_combination(category_size, swaps, [&](std::span<const int> subset) {
        for (std::size_t i = 0; i < subset.size(); ++i) positions[i] = subset[i] + 1;
        total += expected_intra_distance(category_size, swaps, positions);
        arrangements += 1.0;
    });
    return total / arrangements;
}

// Expected distance between two elements currently sharing a category block
// under the generative exchange model itself: p residents leave, the p
// exchanged-in elements occupy exactly the vacated rank slots. The occupied
// slot set is therefore invariant, and the expectation reduces to the
// unmixed block mean (S + 1) / 3 for every p. The enumeration oracle in the
// test suite confirms this reduction case by case.
inline double intra_block_expectation(int category_size, int swaps) {
    if (category_size < 2) throw std::invalid_argument("category size must be >= 2");
    if (swaps < 0 || swaps > category_size)
        throw std::invalid_argument("swap count must satisfy 0 <= p <= S");
    return block_distance_sum(category_size) / binomial(category_size, 2);
}

// Intercategory distance formula with p swaps between two categories whose
// blocks are D categories apart (D = 0 for adjacent blocks):
//
//   [ (C(S-1,p)^2 + C(S-1,p-1)^2) S^3 (D+1)
//   + 4 C(S-2,p-1) C(S,p) sum_{i=1}^{S-1} i (S - i) ] / ( S^2 C(S,p)^2 )
inline double expected_inter_distance(int category_size, int swaps, int gap) {
    const int S = category_size;
    const int p = swaps;
    if (S < 1) throw std::invalid_argument("category size must be >= 1");
    if (p < 0 || p > S) throw std::invalid_argument("swap count must satisfy 0 <= p <= S");
    if (gap < 0) throw std::invalid_argument("category gap must be >= 0");

    const double stay = binomial(S - 1, p);
    const double swap_both = binomial(S - 1, p - 1);
    const double cube = static_cast<double>(S) * S * S;
    const double numerator = (stay * stay + swap_both * swap_both) * cube * (gap + 1) +
                             4.0 * binomial(S - 2, p - 1) * binomial(S, p) * block_distance_sum(S);
    const double denominator = static_cast<double>(S) * S * binomial(S, p) * binomial(S, p);
    return numerator / denominator;
}

// One row per swap count: distances within a category, over the whole
// ranking, and across the two categories. intra_formula keeps the printed
// averaged formula alongside the generative value wherever it is defined.
struct ExpectationCurveRow {
    int p = 0;
    double intra = 0.0;
    double overall = 0.0;
    double inter = 0.0;
    double intra_formula = std::numeric_limits<double>::quiet_NaN();
};

struct ExpectationCurve {
    int category_size = 0;
    int categories = 0;
    std::vector<ExpectationCurveRow> rows;
    int crossing_p = -1;  // first p with inter < overall, -1 if none
};

// Curve for the two-category model (D = 0). Other category counts have no
// closed form here and are rejected.
inline ExpectationCurve emit_expectation_curve(int category_size, int categories, int p_max) {
    if (categories != 2)
        throw std::invalid_argument("expectation curve supports exactly 2 categories");
    if (p_max < 0 || p_max > category_size)
        throw std::invalid_argument("p_max must satisfy 0 <= p_max <= S");

    ExpectationCurve curve;
    curve.category_size = category_size;
    curve.categories = categories;
    const int total_items = category_size * categories;
    for (int p = 0; p <= p_max; ++p) {
        ExpectationCurveRow row;
        row.p = p;
        row.intra = intra_block_expectation(category_size, p);
        row.overall = expected_overall_distance(total_items);
        row.inter = expected_inter_distance(category_size, p, 0);
        if (p <= category_size - 2)
            row.intra_formula = expected_intra_distance_averaged(category_size, p);
        if (curve.crossing_p == -1 && row.inter < row.overall) curve.crossing_p = p;
        curve.rows.push_back(row);
    }
    return curve;
}

// Empirical edge densities: fraction of same-category and different-category
// pairs whose mean similarity exceeds the threshold.
inline std::pair<double, double> estimate_alpha_beta(const SimilarityMatrix& matrix,
                                                     const GroundTruth& truth, double epsilon) {
    if (static_cast<int>(truth.category.size()) != matrix.items)
        throw std::invalid_argument("ground truth does not match similarity matrix");
    double same_pairs = 0.0, same_edges = 0.0;
    double diff_pairs = 0.0, diff_edges = 0.0;
    for (int i = 0; i < matrix.items; ++i) {
        for (int j = i + 1; j < matrix.items; ++j) {
            const bool same = truth.category[static_cast<std::size_t>(i)] ==
                              truth.category[static_cast<std::size_t>(j)];
            const bool edge = matrix.at(i, j) > epsilon;
            (same ? same_pairs : diff_pairs) += 1.0;
            if (edge) (same ? same_edges : diff_edges) += 1.0;
        }
    }
    const double alpha = same_pairs > 0.0 ? same_edges / same_pairs : 0.0;
    const double beta = diff_pairs > 0.0 ? diff_edges / diff_pairs : 0.0;
    return {alpha, beta};
}

}  // namespace rankcluster
