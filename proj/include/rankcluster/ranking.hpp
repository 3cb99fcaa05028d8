#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rankcluster/random.hpp"

namespace rankcluster {

// Parameters of the synthetic ordinal ranking generator.
//   categories    C  number of planted categories
//   category_size S  items per category
//   mixing        p  items exchanged per ordered category pair and voter
//   voters        V  number of independent voters
struct RankingConfig {
    int categories = 1;
    int category_size = 1;
    int mixing = 0;
    int voters = 1;
    std::uint64_t seed = 0;

    int item_count() const { return categories * category_size; }

    void validate() const {
        if (categories < 1) throw std::invalid_argument("categories must be >= 1");
        if (category_size < 1) throw std::invalid_argument("category_size must be >= 1");
        if (voters < 1) throw std::invalid_argument("voters must be >= 1");
        if (mixing < 0 || mixing > category_size)
            throw std::invalid_argument("mixing must satisfy 0 <= p <= category_size");
    }
};

// Planted category of every item; identical for all voters.
struct GroundTruth {
    std::vector<int> category;
    int num_categories = 0;
};

// V x N matrix of ordinal ranks; every row is a permutation of 0..N-1.
struct RankingMatrix {
    int voters = 0;
    int items = 0;
    std::vector<int> ranks;  // row-major

    int rank(int voter, int item) const {
        return ranks[static_cast<std::size_t>(voter) * items + item];
    }
    std::span<const int> row(int voter) const {
        return {ranks.data() + static_cast<std::size_t>(voter) * items,
                static_cast<std::size_t>(items)};
    }
};

namespace detail {

// Exchange `p` uniformly chosen rank slots of block a with `p` uniformly
// chosen slots of block b, pairing the two selections uniformly at random.
// Operates on slots, so items that previously swapped in are eligible again.
inline void swap_between_blocks(std::vector<int>& item_at_rank, int block_a, int block_b,
                                int block_size, int p, Rng& rng) {
    if (p == 0) return;
    std::vector<int> slots_a = rng.sample_without_replacement(block_size, p);
    std::vector<int> slots_b = rng.sample_without_replacement(block_size, p);
    rng.shuffle(slots_b);
    for (int k = 0; k < p; ++k) {
        const int ra = block_a * block_size + slots_a[static_cast<std::size_t>(k)];
        const int rb = block_b * block_size + slots_b[static_cast<std::size_t>(k)];
        std::swap(item_at_rank[static_cast<std::size_t>(ra)],
                  item_at_rank[static_cast<std::size_t>(rb)]);
    }
}

}  // namespace detail

// Synthetic ranking generation. Per voter: categories are assigned to
// contiguous rank blocks in a random order, items are permuted within their
// block, and then every ordered category pair exchanges `mixing` rank slots.
// One seeded generator streams all randomness in algorithm order, so a
// (config, seed) pair reproduces the dataset exactly.
inline std::pair<RankingMatrix, GroundTruth> generate_rankings(const RankingConfig& config) {
    config.validate();
    const int C = config.categories;
    const int S = config.category_size;
    const int N = config.item_count();

    GroundTruth truth;
    truth.num_categories = C;
    truth.category.resize(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) truth.category[static_cast<std::size_t>(i)] = i / S;

    RankingMatrix matrix;
    matrix.voters = config.voters;
    matrix.items = N;
    matrix.ranks.resize(static_cast<std::size_t>(config.voters) * N);

    Rng rng(config.seed);
    std::vector<int> item_at_rank(static_cast<std::size_t>(N));
    for (int v = 0; v < config.voters; ++v) {
        // Block position of each category, then a within-block permutation.
        const std::vector<int> block_of_category = rng.permutation(C);
        for (int c = 0; c < C; ++c) {
            const int base = block_of_category[static_cast<std::size_t>(c)] * S;
            std::vector<int> offsets = rng.permutation(S);
            for (int k = 0; k < S; ++k)
                item_at_rank[static_cast<std::size_t>(base + offsets[static_cast<std::size_t>(k)])] =
                    c * S + k;
        }

        // Mixing pass: in a fresh random category order, every ordered pair
        // of distinct categories exchanges `mixing` slots.
        const std::vector<int> mix_order = rng.permutation(C);
        for (int i = 0; i < C; ++i) {
            for (int j = 0; j < C; ++j) {
                if (i == j) continue;
                const int c1 = mix_order[static_cast<std::size_t>(i)];
                const int c2 = mix_order[static_cast<std::size_t>(j)];
                detail::swap_between_blocks(item_at_rank,
                                            block_of_category[static_cast<std::size_t>(c1)],
                                            block_of_category[static_cast<std::size_t>(c2)],
                                            S, config.mixing, rng);
            }
        }

        for (int r = 0; r < N; ++r)
            matrix.ranks[static_cast<std::size_t>(v) * N +
                         item_at_rank[static_cast<std::size_t>(r)]] = r;
    }
    return {std::move(matrix), std::move(truth)};
}

}  // namespace rankcluster
