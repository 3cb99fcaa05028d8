#pragma once

#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rankcluster/ranking.hpp"

namespace rankcluster {

// Assignment of every vertex to one community, indices dense from 0 in order
// of first appearance by vertex id.
struct Partition {
    std::vector<int> community;
    int num_communities = 0;

    int size() const { return static_cast<int>(community.size()); }

    static Partition from_labels(const std::vector<int>& labels) {
        Partition partition;
        partition.community.resize(labels.size());
        std::unordered_map<int, int> dense;
        dense.reserve(labels.size());
        for (std::size_t v = 0; v < labels.size(); ++v) {
            auto [it, inserted] = dense.try_emplace(labels[v], partition.num_communities);
            if (inserted) ++partition.num_communities;
            partition.community[v] = it->second;
        }
        return partition;
    }
};

inline Partition to_partition(const GroundTruth& truth) {
    Partition partition;
    partition.community = truth.category;
    partition.num_communities = truth.num_categories;
    return partition;
}

}  // namespace rankcluster
