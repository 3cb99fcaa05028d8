#include <catch2/catch.hpp>

#include <vector>

#include "oracles.hpp"
#include "rankcluster/distances.hpp"
#include "rankcluster/sbm.hpp"

using namespace rankcluster;

TEST_CASE("path graph") {
    const SimilarityGraph graph(3, {{0, 1}, {1, 2}}, GraphSource::file);
    const auto table = all_pairs_distances(graph);
    CHECK(table.at(0, 2) == 2);
    CHECK(table.at(0, 1) == 1);
    CHECK(table.at(2, 2) == 0);
}

TEST_CASE("disconnected components are unreachable") {
    const SimilarityGraph graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}},
                                GraphSource::file);
    const auto table = all_pairs_distances(graph);
    for (int i = 0; i < 3; ++i) {
        for (int j = 3; j < 6; ++j) {
            CHECK(table.at(i, j) == DistanceTable::kUnreachable);
            CHECK_FALSE(table.reachable(i, j));
        }
    }
    CHECK(table.at(0, 2) == 1);
}

TEST_CASE("random graphs match the matrix-power oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SbmConfig config{.communities = 4, .size = 5, .p_in = 0.5, .p_out = 0.05, .seed = seed};
        const auto [graph, truth] = generate_sbm(config);
        const int n = graph.vertex_count();
        std::vector<std::vector<bool>> adjacency(static_cast<std::size_t>(n),
                                                 std::vector<bool>(static_cast<std::size_t>(n)));
        for (const auto& [a, b] : graph.edges()) {
            adjacency[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
            adjacency[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
        }
        const auto expected = oracle::matrix_power_distances(adjacency);
        const auto table = all_pairs_distances(graph);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                CAPTURE(seed, i, j);
                CHECK(table.at(i, j) == expected[static_cast<std::size_t>(i)]
                                                [static_cast<std::size_t>(j)]);
            }
        }
    }
}

TEST_CASE("table is symmetric with zero diagonal and triangle inequality") {
    SbmConfig config{.communities = 3, .size = 6, .p_in = 0.4, .p_out = 0.08, .seed = 33};
    const auto [graph, truth] = generate_sbm(config);
    const auto table = all_pairs_distances(graph);
    const int n = graph.vertex_count();
    for (int i = 0; i < n; ++i) {
        CHECK(table.at(i, i) == 0);
        for (int j = 0; j < n; ++j) {
            CHECK(table.at(i, j) == table.at(j, i));
            for (int k = 0; k < n; ++k) {
                if (table.reachable(i, k) && table.reachable(k, j)) {
                    REQUIRE(table.reachable(i, j));
                    CHECK(table.at(i, j) <= table.at(i, k) + table.at(k, j));
                }
            }
        }
    }
}
