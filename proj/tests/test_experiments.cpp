#include <catch2/catch.hpp>

#include <map>

#include "rankcluster/experiments.hpp"

using namespace rankcluster;

namespace {

SweepConfig small_sweep() {
    SweepConfig config;
    config.category_size = 4;
    config.categories = 2;
    config.p_values = {0, 2};
    config.multipliers = {2, 6};
    config.trials = 6;
    config.seed = 51;
    config.trend_permutations = 200;
    return config;
}

BenchConfig small_bench() {
    BenchConfig config;
    SbmConfig sbm{.communities = 4, .size = 5, .p_in = 0.8, .p_out = 0.02, .seed = 0};
    config.grid = {sbm};
    config.trials = 8;
    config.seed = 99;
    return config;
}

}  // namespace

TEST_CASE("sweep aggregates equal recomputed means") {
    const auto report = run_mixing_sweep(small_sweep());
    REQUIRE(report.trials.size() == 2 * 2 * 6);
    std::map<std::pair<int, int>, std::pair<double, int>> sums;
    for (const auto& t : report.trials) {
        auto& [total, count] = sums[{t.p, t.multiplier}];
        total += t.nmi;
        ++count;
    }
    REQUIRE(report.points.size() == sums.size());
    for (const auto& point : report.points) {
        const auto& [total, count] = sums.at({point.p, point.multiplier});
        CHECK(point.trials == count);
        CHECK(point.mean_nmi == Approx(total / count).epsilon(1e-12));
    }
}

TEST_CASE("sweep is deterministic and thread-count independent") {
    auto config = small_sweep();
    const auto serial = run_mixing_sweep(config);
    config.jobs = 2;
    const auto parallel = run_mixing_sweep(config);
    REQUIRE(serial.trials.size() == parallel.trials.size());
    for (std::size_t i = 0; i < serial.trials.size(); ++i) {
        CHECK(serial.trials[i].nmi == parallel.trials[i].nmi);
        CHECK(serial.trials[i].seed == parallel.trials[i].seed);
    }
    CHECK(serial.trends.mixing.statistic == parallel.trends.mixing.statistic);
}

TEST_CASE("perfect separation at p = 0 with many voters") {
    SweepConfig config;
    config.category_size = 5;
    config.categories = 2;
    config.p_values = {0};
    config.multipliers = {10};
    config.trials = 10;
    config.seed = 7;
    config.trend_permutations = 10;
    const auto report = run_mixing_sweep(config);
    REQUIRE(report.points.size() == 1);
    CHECK(report.points.front().mean_nmi > 0.99);
}

TEST_CASE("benchmark aggregates equal recomputed means") {
    const auto report = run_sbm_benchmark(small_bench());
    REQUIRE(report.trials.size() == 3 * 8);
    std::map<std::pair<int, std::string>, std::vector<const BenchTrial*>> groups;
    for (const auto& t : report.trials) groups[{t.config_index, t.algo}].push_back(&t);
    REQUIRE(report.aggregates.size() == groups.size());
    for (const auto& agg : report.aggregates) {
        const auto& rows = groups.at({agg.config_index, agg.algo});
        double nmi_sum = 0.0, q_sum = 0.0, k_sum = 0.0;
        for (const auto* row : rows) {
            nmi_sum += row->nmi;
            q_sum += row->modularity_value;
            k_sum += row->communities;
        }
        CHECK(agg.trials == static_cast<int>(rows.size()));
        CHECK(agg.mean_nmi == Approx(nmi_sum / rows.size()).epsilon(1e-12));
        CHECK(agg.mean_modularity == Approx(q_sum / rows.size()).epsilon(1e-12));
        CHECK(agg.mean_communities == Approx(k_sum / rows.size()).epsilon(1e-12));
    }
}

TEST_CASE("benchmark is deterministic across thread counts") {
    auto config = small_bench();
    const auto serial = run_sbm_benchmark(config);
    config.jobs = 3;
    const auto parallel = run_sbm_benchmark(config);
    REQUIRE(serial.trials.size() == parallel.trials.size());
    for (std::size_t i = 0; i < serial.trials.size(); ++i) {
        CHECK(serial.trials[i].nmi == parallel.trials[i].nmi);
        CHECK(serial.trials[i].communities == parallel.trials[i].communities);
    }
}

TEST_CASE("invalid grids are rejected before any trial runs") {
    auto sweep = small_sweep();
    sweep.p_values = {0, sweep.category_size + 1};
    CHECK_THROWS_AS(run_mixing_sweep(sweep), std::invalid_argument);
    sweep = small_sweep();
    sweep.trials = 0;
    CHECK_THROWS_AS(run_mixing_sweep(sweep), std::invalid_argument);

    auto bench = small_bench();
    bench.grid[0].p_in = 1.5;
    CHECK_THROWS_AS(run_sbm_benchmark(bench), std::invalid_argument);
}

TEST_CASE("disconnected cliques are recovered exactly by every algorithm") {
    BenchConfig config;
    config.grid = {SbmConfig{.communities = 10, .size = 5, .p_in = 1.0, .p_out = 0.0, .seed = 0}};
    config.trials = 3;
    config.seed = 4;
    const auto report = run_sbm_benchmark(config);
    for (const auto& trial : report.trials) {
        CAPTURE(trial.algo, trial.trial);
        CHECK(trial.nmi == Approx(1.0).epsilon(1e-12));
        CHECK(trial.communities == 10);
    }
}
