#pragma once

#include <deque>
#include <vector>

#include "rankcluster/graph.hpp"

namespace rankcluster {

// Hop distances between every vertex pair; kUnreachable marks disconnected
// pairs. Row-major n x n, symmetric, zero diagonal.
struct DistanceTable {
    static constexpr int kUnreachable = -1;

    int n = 0;
    std::vector<int> dist;

    int at(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
    bool reachable(int i, int j) const { return at(i, j) != kUnreachable; }
};

// Edges are unweighted, so one breadth-first search per source produces the
// same table as unit-weight shortest paths.
inline DistanceTable all_pairs_distances(const SimilarityGraph& graph) {
    const int n = graph.vertex_count();
    DistanceTable table;
    table.n = n;
    table.dist.assign(static_cast<std::size_t>(n) * n, DistanceTable::kUnreachable);

    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(n));
    for (int source = 0; source < n; ++source) {
        int* row = table.dist.data() + static_cast<std::size_t>(source) * n;
        queue.clear();
        queue.push_back(source);
        row[source] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int v = queue[head];
            for (int u : graph.neighbors(v)) {
                if (row[u] == DistanceTable::kUnreachable) {
                    row[u] = row[v] + 1;
                    queue.push_back(u);
                }
            }
        }
    }
    return table;
}

}  // namespace rankcluster
