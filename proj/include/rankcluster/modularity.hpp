#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rankcluster/graph.hpp"
#include "rankcluster/partition.hpp"

namespace rankcluster {

// Newman-Girvan modularity Q = sum_c [ e_c/m - (d_c/2m)^2 ], where e_c is
// the number of intra-community edges, d_c the total degree of community c
// and m the edge count. Requires at least one edge.
inline double modularity(const SimilarityGraph& graph, const Partition& partition) {
    if (partition.size() != graph.vertex_count())
        throw std::invalid_argument("partition does not match graph");
    const double m = static_cast<double>(graph.edge_count());
    if (m < 1.0) throw std::invalid_argument("modularity undefined on an edgeless graph");

    std::vector<double> intra(static_cast<std::size_t>(partition.num_communities), 0.0);
    std::vector<double> degree(static_cast<std::size_t>(partition.num_communities), 0.0);
    for (const auto& [a, b] : graph.edges()) {
        const int ca = partition.community[static_cast<std::size_t>(a)];
        const int cb = partition.community[static_cast<std::size_t>(b)];
        degree[static_cast<std::size_t>(ca)] += 1.0;
        degree[static_cast<std::size_t>(cb)] += 1.0;
        if (ca == cb) intra[static_cast<std::size_t>(ca)] += 1.0;
    }
    double q = 0.0;
    for (int c = 0; c < partition.num_communities; ++c) {
        const double frac = degree[static_cast<std::size_t>(c)] / (2.0 * m);
        q += intra[static_cast<std::size_t>(c)] / m - frac * frac;
    }
    return q;
}

// Greedy agglomerative modularity maximization: start from singleton
// communities and repeatedly merge the connected pair with the largest
// modularity gain, stopping when no merge has a strictly positive gain.
// Gain of merging a and b: e_ab/m - d_a*d_b / (2 m^2). Ties are broken by
// the smallest (a, b) community-index pair. An edgeless graph yields the
// all-singleton partition.
inline Partition cnm_greedy_modularity(const SimilarityGraph& graph) {
    const int n = graph.vertex_count();
    std::vector<int> community(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) community[static_cast<std::size_t>(v)] = v;
    const double m = static_cast<double>(graph.edge_count());
    if (m < 1.0) return Partition::from_labels(community);

    // Community-to-community edge counts, keyed a < b, plus total degrees.
    std::map<std::pair<int, int>, double> between;
    std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
    for (const auto& [a, b] : graph.edges()) {
        between[{a, b}] += 1.0;
        degree[static_cast<std::size_t>(a)] += 1.0;
        degree[static_cast<std::size_t>(b)] += 1.0;
    }

    for (;;) {
        // The map iterates keys ascending, so the first maximum encountered
        // is already the smallest (a, b) pair among ties.
        double best_gain = 0.0;
        std::pair<int, int> best{-1, -1};
        for (const auto& [pair, e_ab] : between) {
            const auto [a, b] = pair;
            const double gain =
                e_ab / m - degree[static_cast<std::size_t>(a)] *
                               degree[static_cast<std::size_t>(b)] / (2.0 * m * m);
            if (gain > best_gain) {
                best_gain = gain;
                best = pair;
            }
        }
        if (best.first == -1) break;

        // Merge b into a.
        const auto [a, b] = best;
        std::map<std::pair<int, int>, double> merged;
        for (const auto& [pair, e] : between) {
            auto [x, y] = pair;
            if (x == b) x = a;
            if (y == b) y = a;
            if (x == y) continue;  // the merged pair's own edges become internal
            if (x > y) std::swap(x, y);
            merged[{x, y}] += e;
        }
        between = std::move(merged);
        degree[static_cast<std::size_t>(a)] += degree[static_cast<std::size_t>(b)];
        degree[static_cast<std::size_t>(b)] = 0.0;
        for (int v = 0; v < n; ++v) {
            if (community[static_cast<std::size_t>(v)] == b)
                community[static_cast<std::size_t>(v)] = a;
        }
    }
    return Partition::from_labels(community);
}

}  // namespace rankcluster
