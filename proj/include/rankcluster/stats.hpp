#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rankcluster/random.hpp"

namespace rankcluster {

inline double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of empty range");
    return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

namespace detail {

// Fractional ranks with ties averaged.
inline std::vector<double> fractional_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = 0.5 * (i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;  // a constant side carries no trend
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace detail

// Spearman rank correlation with average ranks for ties; 0 when either side
// is constant.
inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
    if (x.size() < 2) throw std::invalid_argument("need at least two observations");
    const auto rx = detail::fractional_ranks(x);
    const auto ry = detail::fractional_ranks(y);
    return detail::pearson(rx, ry);
}

// One-sided permutation test on Spearman's rho, shuffling y against x.
// tail < 0 tests for a negative trend (P[rho_perm <= rho_obs]), tail > 0 for
// a positive trend. Includes the identity permutation, so the p-value is
// never 0.
inline double spearman_permutation_pvalue(std::span<const double> x, std::span<const double> y,
                                          int tail, int permutations, std::uint64_t seed) {
    const double observed = spearman_rho(x, y);
    std::vector<double> shuffled(y.begin(), y.end());
    Rng rng(derive_seed(seed, 0x7e57));
    int hits = 1;  // identity permutation
    for (int b = 0; b < permutations; ++b) {
        rng.shuffle(shuffled);
        const double rho = spearman_rho(x, shuffled);
        if (tail < 0 ? rho <= observed : rho >= observed) ++hits;
    }
    return static_cast<double>(hits) / (permutations + 1);
}

}  // namespace rankcluster
