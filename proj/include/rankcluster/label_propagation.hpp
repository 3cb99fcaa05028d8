#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rankcluster/distances.hpp"
#include "rankcluster/graph.hpp"
#include "rankcluster/partition.hpp"
#include "rankcluster/random.hpp"

namespace rankcluster {

enum class UpdateMode { synchronous, asynchronous };

inline std::string to_string(UpdateMode mode) {
    return mode == UpdateMode::synchronous ? "sync" : "async";
}

inline UpdateMode update_mode_from_string(const std::string& name) {
    if (name == "sync") return UpdateMode::synchronous;
    if (name == "async") return UpdateMode::asynchronous;
    throw std::invalid_argument("unknown update mode: " + name);
}

// Label votes are scaled by a non-increasing function of the hop distance
// between the label's source vertex and the neighbor casting the vote.
// w(0) = 1 for every kind; linear and exponential treat unreachable sources
// as weight 0 (a held label's source is always in the holder's component,
// so that case cannot arise during propagation).
struct WeightFunction {
    enum class Kind { unit, linear, exponential };

    Kind kind = Kind::linear;

    double operator()(int hop_distance) const {
        switch (kind) {
            case Kind::unit:
                return 1.0;
            case Kind::linear:
                if (hop_distance == DistanceTable::kUnreachable) return 0.0;
                return hop_distance == 0 ? 1.0 : 1.0 / hop_distance;
            case Kind::exponential:
                if (hop_distance == DistanceTable::kUnreachable) return 0.0;
                return std::ldexp(1.0, -hop_distance);
        }
        return 0.0;
    }

    static WeightFunction unit() { return {Kind::unit}; }
    static WeightFunction linear() { return {Kind::linear}; }
    static WeightFunction exponential() { return {Kind::exponential}; }
};

inline std::string to_string(WeightFunction::Kind kind) {
    switch (kind) {
        case WeightFunction::Kind::unit: return "unit";
        case WeightFunction::Kind::linear: return "linear";
        case WeightFunction::Kind::exponential: return "exp";
    }
    return "unit";
}

inline WeightFunction::Kind weight_kind_from_string(const std::string& name) {
    if (name == "unit") return WeightFunction::Kind::unit;
    if (name == "linear") return WeightFunction::Kind::linear;
    if (name == "exp" || name == "exponential") return WeightFunction::Kind::exponential;
    throw std::invalid_argument("unknown weight function: " + name);
}

struct PropagationOptions {
    UpdateMode mode = UpdateMode::asynchronous;
    bool sticky_ties = true;  // keep the current label when it ties for the max
    int max_iters = 100;
    std::uint64_t seed = 0;
    bool record_trajectory = false;
};

struct PropagationResult {
    Partition partition;
    std::vector<int> labels;  // final label per vertex; label id = source vertex
    int iterations = 0;
    bool converged = false;
    std::vector<std::vector<int>> trajectory;  // labels after each pass, if recorded
};

namespace detail {

constexpr std::uint64_t kOrderStream = 0x10;
constexpr std::uint64_t kTieStream = 0x20;

// Candidate labels tied for the maximum vote, sorted by label id so the
// uniform pick below is a pure function of (seed, pass, vertex).
template <typename CountMap>
inline void collect_argmax(const CountMap& counts, std::vector<int>& out) {
    out.clear();
    auto best = counts.begin()->second;
    for (const auto& [label, count] : counts) {
        if (count > best) best = count;
    }
    for (const auto& [label, count] : counts) {
        if (count == best) out.push_back(label);
    }
    std::sort(out.begin(), out.end());
}

inline int tie_pick(std::uint64_t seed, int pass, int vertex, int n,
                    const std::vector<int>& candidates) {
    Rng rng(derive_seed(seed, kTieStream,
                        static_cast<std::uint64_t>(pass) * static_cast<std::uint64_t>(n) +
                            static_cast<std::uint64_t>(vertex)));
    return candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
}

}  // namespace detail

// Weighted label propagation: each vertex repeatedly adopts the neighbor
// label with the largest distance-weighted vote. A neighbor z holding label
// L contributes weights(dist(L, z)) to L's count, where dist is measured
// from the vertex L originated at. Vertices are visited in one random order
// drawn up front from the seed; synchronous passes read the previous pass's
// labels while asynchronous passes see updates immediately.
//
// The run stops early only in a stable state: a full pass in which no label
// changed and no tie had to be broken at random (under sticky ties a tie
// involving the current label counts as stable). One further pass from such
// a state is guaranteed to change nothing.
inline PropagationResult weighted_label_propagation(const SimilarityGraph& graph,
                                                    const WeightFunction& weights,
                                                    const DistanceTable& distances,
                                                    const PropagationOptions& options) {
    const int n = graph.vertex_count();
    if (distances.n != n)
        throw std::invalid_argument("distance table does not match graph");
    if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) labels[static_cast<std::size_t>(v)] = v;

    Rng order_rng(derive_seed(options.seed, detail::kOrderStream));
    const std::vector<int> order = order_rng.permutation(n);

    PropagationResult result;
    const bool sync = options.mode == UpdateMode::synchronous;
    std::vector<int> next;
    std::unordered_map<int, double> counts;
    std::vector<int> candidates;

    for (int pass = 0; pass < options.max_iters; ++pass) {
        bool changed = false;
        bool random_pick_used = false;
        if (sync) next = labels;
        std::vector<int>& write = sync ? next : labels;

        for (int v : order) {
            const auto& neighbors = graph.neighbors(v);
            if (neighbors.empty()) continue;
            counts.clear();
            for (int z : neighbors) {
                const int label = labels[static_cast<std::size_t>(z)];
                counts[label] += weights(distances.at(label, z));
            }
            detail::collect_argmax(counts, candidates);
            const int current = labels[static_cast<std::size_t>(v)];
            int chosen;
            if (options.sticky_ties &&
                std::binary_search(candidates.begin(), candidates.end(), current)) {
                chosen = current;
            } else if (candidates.size() == 1) {
                chosen = candidates.front();
            } else {
                chosen = detail::tie_pick(options.seed, pass, v, n, candidates);
                random_pick_used = true;
            }
            if (chosen != current) changed = true;
            write[static_cast<std::size_t>(v)] = chosen;
        }

        if (sync) labels.swap(next);
        ++result.iterations;
        if (options.record_trajectory) result.trajectory.push_back(labels);
        if (!changed && !random_pick_used) {
            result.converged = true;
            break;
        }
    }

    result.partition = Partition::from_labels(labels);
    result.labels = std::move(labels);
    return result;
}

// Traditional label propagation: every neighbor's vote counts 1 regardless
// of where its label originated. Kept as an independent integer-count loop;
// with the unit weight function the weighted variant must reproduce its
// label trajectory exactly for the same seed.
inline PropagationResult standard_label_propagation(const SimilarityGraph& graph,
                                                    const PropagationOptions& options) {
    const int n = graph.vertex_count();
    if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) labels[static_cast<std::size_t>(v)] = v;

    Rng order_rng(derive_seed(options.seed, detail::kOrderStream));
    const std::vector<int> order = order_rng.permutation(n);

    PropagationResult result;
    const bool sync = options.mode == UpdateMode::synchronous;
    std::vector<int> next;
    std::unordered_map<int, long long> counts;
    std::vector<int> candidates;

    for (int pass = 0; pass < options.max_iters; ++pass) {
        bool changed = false;
        bool random_pick_used = false;
        if (sync) next = labels;
        std::vector<int>& write = sync ? next : labels;

        for (int v : order) {
            const auto& neighbors = graph.neighbors(v);
            if (neighbors.empty()) continue;
            counts.clear();
            for (int z : neighbors) counts[labels[static_cast<std::size_t>(z)]] += 1;
            detail::collect_argmax(counts, candidates);
            const int current = labels[static_cast<std::size_t>(v)];
            int chosen;
            if (options.sticky_ties &&
                std::binary_search(candidates.begin(), candidates.end(), current)) {
                chosen = current;
            } else if (candidates.size() == 1) {
                chosen = candidates.front();
            } else {
                chosen = detail::tie_pick(options.seed, pass, v, n, candidates);
                random_pick_used = true;
            }
            if (chosen != current) changed = true;
            write[static_cast<std::size_t>(v)] = chosen;
        }

        if (sync) labels.swap(next);
        ++result.iterations;
        if (options.record_trajectory) result.trajectory.push_back(labels);
        if (!changed && !random_pick_used) {
            result.converged = true;
            break;
        }
    }

    result.partition = Partition::from_labels(labels);
    result.labels = std::move(labels);
    return result;
}

}  // namespace rankcluster
