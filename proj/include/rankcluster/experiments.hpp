#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rankcluster/distances.hpp"
#include "rankcluster/expectation.hpp"
#include "rankcluster/label_propagation.hpp"
#include "rankcluster/modularity.hpp"
#include "rankcluster/nmi.hpp"
#include "rankcluster/random.hpp"
#include "rankcluster/ranking.hpp"
#include "rankcluster/sbm.hpp"
#include "rankcluster/similarity.hpp"
#include "rankcluster/stats.hpp"

namespace rankcluster {

namespace detail {

// Index-parallel loop; each index writes its own slot, so results do not
// depend on the thread count. The first worker exception is rethrown on the
// calling thread after all workers have joined.
template <typename Fn>
inline void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// Per-stratum positive/negative trend test: the statistic is the mean of the
// per-stratum Spearman correlations, and the null distribution is built by
// shuffling y within each stratum. Strata where either side is constant
// contribute 0.
struct TrendTest {
    double statistic = 0.0;
    double pvalue = 1.0;
};

inline TrendTest stratified_trend_test(std::span<const double> x, std::span<const double> y,
                                       std::span<const int> stratum, int tail, int permutations,
                                       std::uint64_t seed) {
    if (x.size() != y.size() || x.size() != stratum.size())
        throw std::invalid_argument("length mismatch");
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < stratum.size(); ++i) groups[stratum[i]].push_back(i);

    auto statistic = [&](const std::vector<double>& ys) {
        double total = 0.0;
        for (const auto& [key, idx] : groups) {
            std::vector<double> gx, gy;
            gx.reserve(idx.size());
            gy.reserve(idx.size());
            for (std::size_t i : idx) {
                gx.push_back(x[i]);
                gy.push_back(ys[i]);
            }
            total += gx.size() >= 2 ? spearman_rho(gx, gy) : 0.0;
        }
        return total / static_cast<double>(groups.size());
    };

    TrendTest test;
    std::vector<double> ys(y.begin(), y.end());
    test.statistic = statistic(ys);

    Rng rng(derive_seed(seed, 0x57a7));
    int hits = 1;
    for (int b = 0; b < permutations; ++b) {
        for (auto& [key, idx] : groups) {
            // Fisher-Yates restricted to the stratum's indices.
            for (std::size_t i = idx.size(); i > 1; --i) {
                const std::size_t j = static_cast<std::size_t>(rng.below(i));
                std::swap(ys[idx[i - 1]], ys[idx[j]]);
            }
        }
        const double s = statistic(ys);
        if (tail < 0 ? s <= test.statistic : s >= test.statistic) ++hits;
    }
    test.pvalue = static_cast<double>(hits) / (permutations + 1);
    return test;
}

// ---------------------------------------------------------------------------
// Mixing-parameter sweep: rankings -> similarity graph -> weighted label
// propagation, scored against the planted categories.
// ---------------------------------------------------------------------------

struct SweepConfig {
    int category_size = 10;  // S
    int categories = 2;      // C
    std::vector<int> p_values = {0, 1, 2, 3};
    std::vector<int> multipliers = {1, 2, 5, 10};  // voters = multiplier * N
    int trials = 50;
    std::uint64_t seed = 0;
    std::optional<double> epsilon;  // default: expected overall similarity
    UpdateMode mode = UpdateMode::asynchronous;
    WeightFunction::Kind weight = WeightFunction::Kind::linear;
    bool sticky_ties = true;
    int max_iters = 100;
    int jobs = 1;
    int trend_permutations = 2000;
};

struct SweepTrial {
    int p = 0;
    int multiplier = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double nmi = 0.0;
    int communities = 0;
    int iterations = 0;
    bool converged = false;
};

struct SweepPoint {
    int p = 0;
    int multiplier = 0;
    double mean_nmi = 0.0;
    int trials = 0;
};

struct SweepTrends {
    TrendTest mixing;      // expected negative: NMI falls as p grows
    TrendTest multiplier;  // expected positive: NMI rises with more voters
};

struct SweepReport {
    SweepConfig config;
    double epsilon_used = 0.0;
    std::vector<SweepTrial> trials;
    std::vector<SweepPoint> points;
    SweepTrends trends;
};

inline SweepReport run_mixing_sweep(const SweepConfig& config) {
    // Validate the whole grid before any worker thread starts.
    for (int p : config.p_values) {
        for (int multiplier : config.multipliers) {
            RankingConfig probe;
            probe.categories = config.categories;
            probe.category_size = config.category_size;
            probe.mixing = p;
            probe.voters = multiplier * config.categories * config.category_size;
            probe.validate();
        }
    }
    if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");

    SweepReport report;
    report.config = config;
    const int total_items = config.category_size * config.categories;
    report.epsilon_used = config.epsilon.value_or(expected_overall_similarity(total_items));

    const std::size_t cells = config.p_values.size() * config.multipliers.size();
    const std::size_t runs = cells * static_cast<std::size_t>(config.trials);
    report.trials.resize(runs);

    detail::parallel_for(runs, config.jobs, [&](std::size_t run) {
        const std::size_t cell = run / static_cast<std::size_t>(config.trials);
        const int trial = static_cast<int>(run % static_cast<std::size_t>(config.trials));
        const int p = config.p_values[cell / config.multipliers.size()];
        const int multiplier = config.multipliers[cell % config.multipliers.size()];

        SweepTrial record;
        record.p = p;
        record.multiplier = multiplier;
        record.trial = trial;
        record.seed = derive_seed(config.seed, cell, static_cast<std::uint64_t>(trial));

        RankingConfig ranking;
        ranking.categories = config.categories;
        ranking.category_size = config.category_size;
        ranking.mixing = p;
        ranking.voters = multiplier * total_items;
        ranking.seed = record.seed;
        const auto [matrix, truth] = generate_rankings(ranking);
        const auto similarity = build_similarity_matrix(matrix);
        const auto graph = threshold_graph(similarity, report.epsilon_used);
        const auto distances = all_pairs_distances(graph);

        PropagationOptions options;
        options.mode = config.mode;
        options.sticky_ties = config.sticky_ties;
        options.max_iters = config.max_iters;
        options.seed = derive_seed(record.seed, 0xde7ec7);
        const auto result = weighted_label_propagation(graph, WeightFunction{config.weight},
                                                       distances, options);
        record.nmi = nmi(result.partition, to_partition(truth)).value;
        record.communities = result.partition.num_communities;
        record.iterations = result.iterations;
        record.converged = result.converged;
        report.trials[run] = record;
    });

    // Aggregate points and trial-level trend tests.
    std::map<std::pair<int, int>, std::pair<double, int>> sums;
    for (const auto& t : report.trials) {
        auto& [total, count] = sums[{t.p, t.multiplier}];
        total += t.nmi;
        ++count;
    }
    for (const auto& [key, agg] : sums)
        report.points.push_back({key.first, key.second, agg.first / agg.second, agg.second});

    std::vector<double> ps, mults, nmis;
    std::vector<int> p_stratum;
    for (const auto& t : report.trials) {
        ps.push_back(static_cast<double>(t.p));
        mults.push_back(static_cast<double>(t.multiplier));
        nmis.push_back(t.nmi);
        p_stratum.push_back(t.p);
    }
    const std::vector<int> one_stratum(report.trials.size(), 0);
    report.trends.mixing = stratified_trend_test(ps, nmis, one_stratum, -1,
                                                 config.trend_permutations, config.seed);
    report.trends.multiplier = stratified_trend_test(mults, nmis, p_stratum, +1,
                                                     config.trend_permutations, config.seed + 1);
    return report;
}

// ---------------------------------------------------------------------------
// Planted-partition benchmark comparing CNM, standard and weighted label
// propagation on a grid of SBM configurations.
// ---------------------------------------------------------------------------

struct BenchConfig {
    std::vector<SbmConfig> grid;
    std::vector<std::string> algos = {"cnm", "lp", "wlp"};
    int trials = 100;
    std::uint64_t seed = 0;
    UpdateMode mode = UpdateMode::asynchronous;
    WeightFunction::Kind weight = WeightFunction::Kind::linear;
    bool sticky_ties = true;
    int max_iters = 100;
    int jobs = 1;
};

struct BenchTrial {
    int config_index = 0;
    std::string algo;
    int trial = 0;
    std::uint64_t seed = 0;
    double nmi = 0.0;
    double modularity_value = 0.0;
    int communities = 0;
    int iterations = 0;
    bool converged = false;
};

struct BenchAggregate {
    int config_index = 0;
    std::string algo;
    double mean_communities = 0.0;
    double mean_nmi = 0.0;
    double mean_modularity = 0.0;
    int trials = 0;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchTrial> trials;
    std::vector<BenchAggregate> aggregates;
};

inline BenchReport run_sbm_benchmark(const BenchConfig& config) {
    for (const auto& sbm : config.grid) sbm.validate();
    if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");

    BenchReport report;
    report.config = config;
    const std::size_t algo_count = config.algos.size();
    const std::size_t runs =
        config.grid.size() * static_cast<std::size_t>(config.trials) * algo_count;
    report.trials.resize(runs);

    const std::size_t graphs = config.grid.size() * static_cast<std::size_t>(config.trials);
    detail::parallel_for(graphs, config.jobs, [&](std::size_t g) {
        const std::size_t config_index = g / static_cast<std::size_t>(config.trials);
        const int trial = static_cast<int>(g % static_cast<std::size_t>(config.trials));

        SbmConfig sbm = config.grid[config_index];
        sbm.seed = derive_seed(config.seed, config_index, static_cast<std::uint64_t>(trial));
        const auto [graph, truth] = generate_sbm(sbm);
        const auto truth_partition = to_partition(truth);
        const auto distances = all_pairs_distances(graph);

        for (std::size_t a = 0; a < algo_count; ++a) {
            BenchTrial record;
            record.config_index = static_cast<int>(config_index);
            record.algo = config.algos[a];
            record.trial = trial;
            record.seed = sbm.seed;

            Partition partition;
            if (record.algo == "cnm") {
                partition = cnm_greedy_modularity(graph);
            } else {
                PropagationOptions options;
                options.mode = config.mode;
                options.sticky_ties = config.sticky_ties;
                options.max_iters = config.max_iters;
                options.seed = derive_seed(sbm.seed, 0xa160 + a);
                const auto result =
                    record.algo == "lp"
                        ? standard_label_propagation(graph, options)
                        : weighted_label_propagation(graph, WeightFunction{config.weight},
                                                     distances, options);
                partition = result.partition;
                record.iterations = result.iterations;
                record.converged = result.converged;
            }
            record.nmi = nmi(partition, truth_partition).value;
            record.communities = partition.num_communities;
            record.modularity_value =
                graph.edge_count() > 0 ? modularity(graph, partition) : 0.0;
            report.trials[g * algo_count + a] = record;
        }
    });

    std::map<std::pair<int, std::string>, BenchAggregate> sums;
    for (const auto& t : report.trials) {
        auto& agg = sums[{t.config_index, t.algo}];
        agg.config_index = t.config_index;
        agg.algo = t.algo;
        agg.mean_communities += t.communities;
        agg.mean_nmi += t.nmi;
        agg.mean_modularity += t.modularity_value;
        ++agg.trials;
    }
    for (auto& [key, agg] : sums) {
        agg.mean_communities /= agg.trials;
        agg.mean_nmi /= agg.trials;
        agg.mean_modularity /= agg.trials;
        report.aggregates.push_back(agg);
    }
    return report;
}

inline const BenchAggregate& find_aggregate(const BenchReport& report, int config_index,
                                            const std::string& algo) {
    for (const auto& agg : report.aggregates) {
        if (agg.config_index == config_index && agg.algo == algo) return agg;
    }
    throw std::out_of_range("no aggregate for config " + std::to_string(config_index) + "/" + algo);
}

}  // namespace rankcluster
