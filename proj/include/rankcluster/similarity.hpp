#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "rankcluster/graph.hpp"
#include "rankcluster/ranking.hpp"

namespace rankcluster {

// Sim(a, b, n) = 1 - |a - b| / n. Higher for closely ranked items; always
// positive because |a - b| <= n - 1.
inline double similarity(int rank_a, int rank_b, int item_count) {
    return 1.0 - static_cast<double>(std::abs(rank_a - rank_b)) / item_count;
}

// Mean pairwise similarity across voters, plus the number of voters that
// contributed to each pair (always the full voter count for complete
// rankings; sparse sources fill in true co-observation counts).
struct SimilarityMatrix {
    int items = 0;
    std::vector<double> mean_sim;     // items x items, symmetric, diagonal 1
    std::vector<int> voters_counted;  // items x items

    double at(int i, int j) const {
        return mean_sim[static_cast<std::size_t>(i) * items + j];
    }
    int count(int i, int j) const {
        return voters_counted[static_cast<std::size_t>(i) * items + j];
    }
    void set(int i, int j, double value, int count) {
        mean_sim[static_cast<std::size_t>(i) * items + j] = value;
        mean_sim[static_cast<std::size_t>(j) * items + i] = value;
        voters_counted[static_cast<std::size_t>(i) * items + j] = count;
        voters_counted[static_cast<std::size_t>(j) * items + i] = count;
    }

    static SimilarityMatrix identity(int items) {
        SimilarityMatrix m;
        m.items = items;
        m.mean_sim.assign(static_cast<std::size_t>(items) * items, 0.0);
        m.voters_counted.assign(static_cast<std::size_t>(items) * items, 0);
        for (int i = 0; i < items; ++i) m.set(i, i, 1.0, 0);
        return m;
    }
};

// Collapse the voter-item ranking matrix to mean item-item similarities.
// mean Sim = (1/V) sum_v (1 - d_v/n) = 1 - (sum_v d_v) / (V n), so the
// accumulation is an integer rank-distance sum per pair: exact, and
// invariant under any regrouping or reordering of the voters (per-voter
// partial sums combine by integer addition).
inline SimilarityMatrix build_similarity_matrix(const RankingMatrix& rankings) {
    const int n = rankings.items;
    const int voters = rankings.voters;
    SimilarityMatrix matrix = SimilarityMatrix::identity(n);

    std::vector<long long> distance_sums(static_cast<std::size_t>(n) * n, 0);
    for (int v = 0; v < voters; ++v) {
        const auto row = rankings.row(v);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                distance_sums[static_cast<std::size_t>(i) * n + j] += std::abs(row[i] - row[j]);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double mean =
                1.0 - static_cast<double>(distance_sums[static_cast<std::size_t>(i) * n + j]) /
                          (static_cast<double>(voters) * n);
            matrix.set(i, j, mean, voters);
        }
        matrix.voters_counted[static_cast<std::size_t>(i) * n + i] = voters;
    }
    return matrix;
}

// Keep pairs whose mean similarity strictly exceeds epsilon. The diagonal is
// never considered, so the result is a simple graph.
inline SimilarityGraph threshold_graph(const SimilarityMatrix& matrix, double epsilon) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("epsilon must lie in [0, 1]");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < matrix.items; ++i) {
        for (int j = i + 1; j < matrix.items; ++j) {
            if (matrix.at(i, j) > epsilon) edges.emplace_back(i, j);
        }
    }
    return SimilarityGraph(matrix.items, std::move(edges), GraphSource::thresholded, epsilon);
}

}  // namespace rankcluster
