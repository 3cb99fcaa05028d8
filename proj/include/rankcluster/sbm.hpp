#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rankcluster/graph.hpp"
#include "rankcluster/random.hpp"
#include "rankcluster/ranking.hpp"

namespace rankcluster {

// How Bernoulli trials map onto vertex pairs.
//   per_pair:         one trial per unordered pair (the usual convention)
//   per_ordered_pair: one trial per ordered pair, edge if either fires, i.e.
//                     a generator looping over the full adjacency matrix;
//                     effective density 2q - q^2 per unordered pair
enum class EdgeSampling { per_pair, per_ordered_pair };

inline std::string to_string(EdgeSampling sampling) {
    return sampling == EdgeSampling::per_pair ? "pair" : "ordered-pair";
}

inline EdgeSampling edge_sampling_from_string(const std::string& name) {
    if (name == "pair") return EdgeSampling::per_pair;
    if (name == "ordered-pair") return EdgeSampling::per_ordered_pair;
    throw std::invalid_argument("unknown edge sampling: " + name);
}

// Planted-partition / stochastic block model configuration.
struct SbmConfig {
    int communities = 1;
    int size = 1;
    double p_in = 0.0;   // alpha
    double p_out = 0.0;  // beta
    std::uint64_t seed = 0;
    EdgeSampling sampling = EdgeSampling::per_pair;

    int node_count() const { return communities * size; }

    // Assortative benchmarks expect 0 <= beta <= alpha <= 1; anything else is
    // legal, just worth a warning at the call site.
    bool assortative() const { return p_out <= p_in; }

    void validate() const {
        if (communities < 1) throw std::invalid_argument("communities must be >= 1");
        if (size < 1) throw std::invalid_argument("community size must be >= 1");
        if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
            throw std::invalid_argument("edge probabilities must lie in [0, 1]");
    }
};

// Draw a planted-partition graph: same-community pairs are edges with
// probability p_in, cross-community pairs with probability p_out.
inline std::pair<SimilarityGraph, GroundTruth> generate_sbm(const SbmConfig& config) {
    config.validate();
    const int n = config.node_count();

    GroundTruth truth;
    truth.num_categories = config.communities;
    truth.category.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) truth.category[static_cast<std::size_t>(i)] = i / config.size;

    Rng rng(config.seed);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool same = truth.category[static_cast<std::size_t>(i)] ==
                              truth.category[static_cast<std::size_t>(j)];
            const double p = same ? config.p_in : config.p_out;
            bool edge = rng.bernoulli(p);
            if (config.sampling == EdgeSampling::per_ordered_pair) {
                // Second, independent trial for the mirrored ordered pair.
                edge = rng.bernoulli(p) || edge;
            }
            if (edge) edges.emplace_back(i, j);
        }
    }
    return {SimilarityGraph(n, std::move(edges), GraphSource::sbm), std::move(truth)};
}

}  // namespace rankcluster
