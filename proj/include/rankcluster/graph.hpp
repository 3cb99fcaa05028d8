#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rankcluster {

enum class GraphSource { thresholded, sbm, file };

inline std::string to_string(GraphSource source) {
    switch (source) {
        case GraphSource::thresholded: return "thresholded";
        case GraphSource::sbm: return "sbm";
        case GraphSource::file: return "file";
    }
    return "file";
}

inline GraphSource graph_source_from_string(const std::string& name) {
    if (name == "thresholded") return GraphSource::thresholded;
    if (name == "sbm") return GraphSource::sbm;
    if (name == "file") return GraphSource::file;
    throw std::invalid_argument("unknown graph source: " + name);
}

// Simple undirected graph over items 0..n-1. Edges are stored i < j, sorted
// and deduplicated; self-loops are rejected at construction.
class SimilarityGraph {
public:
    SimilarityGraph() = default;

    SimilarityGraph(int n, std::vector<std::pair<int, int>> edge_list, GraphSource source,
                    std::optional<double> epsilon = std::nullopt)
        : n_(n), source_(source), epsilon_(epsilon) {
        if (n < 0) throw std::invalid_argument("negative vertex count");
        for (auto& [a, b] : edge_list) {
            if (a == b) throw std::invalid_argument("self-loop rejected");
            if (a < 0 || b < 0 || a >= n || b >= n)
                throw std::invalid_argument("edge endpoint out of range");
            if (a > b) std::swap(a, b);
        }
        std::sort(edge_list.begin(), edge_list.end());
        edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
        edges_ = std::move(edge_list);
        adjacency_.assign(static_cast<std::size_t>(n), {});
        for (const auto& [a, b] : edges_) {
            adjacency_[static_cast<std::size_t>(a)].push_back(b);
            adjacency_[static_cast<std::size_t>(b)].push_back(a);
        }
    }

    int vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const {
        return adjacency_[static_cast<std::size_t>(v)];
    }
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    GraphSource source() const { return source_; }
    std::optional<double> epsilon() const { return epsilon_; }

    // |edges| / C(n, 2)
    double edge_ratio() const {
        if (n_ < 2) return 0.0;
        const double pairs = 0.5 * n_ * (n_ - 1);
        return static_cast<double>(edges_.size()) / pairs;
    }

    // Connected component id per vertex, dense from 0 in order of discovery.
    std::vector<int> components() const {
        std::vector<int> comp(static_cast<std::size_t>(n_), -1);
        int next = 0;
        std::vector<int> stack;
        for (int start = 0; start < n_; ++start) {
            if (comp[static_cast<std::size_t>(start)] != -1) continue;
            comp[static_cast<std::size_t>(start)] = next;
            stack.push_back(start);
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (int u : neighbors(v)) {
                    if (comp[static_cast<std::size_t>(u)] == -1) {
                        comp[static_cast<std::size_t>(u)] = next;
                        stack.push_back(u);
                    }
                }
            }
            ++next;
        }
        return comp;
    }

private:
    int n_ = 0;
    GraphSource source_ = GraphSource::file;
    std::optional<double> epsilon_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

}  // namespace rankcluster
