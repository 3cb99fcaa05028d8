#pragma once

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankcluster/distances.hpp"
#include "rankcluster/expectation.hpp"
#include "rankcluster/experiments.hpp"
#include "rankcluster/io.hpp"
#include "rankcluster/label_propagation.hpp"
#include "rankcluster/modularity.hpp"
#include "rankcluster/movielens.hpp"
#include "rankcluster/nmi.hpp"
#include "rankcluster/random.hpp"
#include "rankcluster/ranking.hpp"
#include "rankcluster/sbm.hpp"
#include "rankcluster/similarity.hpp"

namespace rankcluster::cli {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;

namespace detail {

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::istringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) values.push_back(std::stoi(field));
    return values;
}

inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::istringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) values.push_back(std::stod(field));
    return values;
}

inline bool parse_on_off(const std::string& text) {
    if (text == "on") return true;
    if (text == "off") return false;
    throw CLI::ValidationError("expected 'on' or 'off', got '" + text + "'");
}

inline std::string timestamp_name() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t time = std::chrono::system_clock::to_time_t(now);
    std::tm parts{};
    localtime_r(&time, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y%m%d-%H%M%S", &parts);
    return buffer;
}

// out/<subcommand>/<name>/ unless --out names a directory explicitly; the
// root is overridable through RANKCLUSTER_OUT.
inline fs::path resolve_output_dir(const std::string& subcommand, const std::string& out,
                                   const std::string& name) {
    if (!out.empty()) return fs::path(out);
    const char* env_root = std::getenv("RANKCLUSTER_OUT");
    const fs::path root = env_root != nullptr ? fs::path(env_root) : fs::path("out");
    return root / subcommand / (name.empty() ? timestamp_name() : name);
}

// Arguments with the output-destination flags removed; replay appends its
// own --out so the recorded command can be rerun anywhere.
inline std::vector<std::string> strip_output_args(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out" || args[i] == "--name") {
            ++i;  // skip the value too
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0 || args[i].rfind("--name=", 0) == 0) continue;
        kept.push_back(args[i]);
    }
    return kept;
}

class ManifestWriter {
public:
    ManifestWriter(fs::path dir, std::string subcommand, const std::vector<std::string>& args)
        : dir_(std::move(dir)),
          subcommand_(std::move(subcommand)),
          args_(strip_output_args(args)),
          start_(std::chrono::steady_clock::now()) {}

    void add_output(const fs::path& path) { outputs_.push_back(path.filename().string()); }

    void write() const {
        nlohmann::json manifest;
        manifest["tool"] = "rankcluster";
        manifest["version"] = kVersion;
        manifest["subcommand"] = subcommand_;
        manifest["args"] = args_;
        manifest["outputs"] = outputs_;
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        manifest["duration_seconds"] =
            std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
        std::ofstream out(dir_ / "manifest.json");
        if (!out) throw std::runtime_error("cannot write manifest in " + dir_.string());
        out << manifest.dump(2) << '\n';
    }

private:
    fs::path dir_;
    std::string subcommand_;
    std::vector<std::string> args_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

struct DetectFlags {
    std::string algo = "wlp";
    std::string weight = "linear";
    std::string mode = "async";
    std::string sticky = "on";
    int max_iters = 100;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd, bool with_algo = true) {
        if (with_algo)
            cmd->add_option("--algo", algo, "detection algorithm")
                ->check(CLI::IsMember({"wlp", "lp", "cnm"}));
        cmd->add_option("--weight", weight, "distance weight for wlp")
            ->check(CLI::IsMember({"linear", "exp", "unit"}));
        cmd->add_option("--mode", mode, "label update schedule")
            ->check(CLI::IsMember({"sync", "async"}));
        cmd->add_option("--sticky-ties", sticky, "keep current label on tied votes")
            ->check(CLI::IsMember({"on", "off"}));
        cmd->add_option("--max-iters", max_iters, "iteration cap");
        cmd->add_option("--seed", seed, "random seed");
    }

    PropagationOptions options() const {
        PropagationOptions options;
        options.mode = update_mode_from_string(mode);
        options.sticky_ties = parse_on_off(sticky);
        options.max_iters = max_iters;
        options.seed = seed;
        return options;
    }
};

struct DetectionOutcome {
    Partition partition;
    int iterations = 0;
    bool converged = true;
    std::string algo;
};

inline DetectionOutcome run_detection(const SimilarityGraph& graph, const DetectFlags& flags) {
    DetectionOutcome outcome;
    outcome.algo = flags.algo;
    if (flags.algo == "cnm") {
        outcome.partition = cnm_greedy_modularity(graph);
    } else if (flags.algo == "lp") {
        const auto result = standard_label_propagation(graph, flags.options());
        outcome.partition = result.partition;
        outcome.iterations = result.iterations;
        outcome.converged = result.converged;
    } else {
        const auto distances = all_pairs_distances(graph);
        const auto result = weighted_label_propagation(
            graph, WeightFunction{weight_kind_from_string(flags.weight)}, distances,
            flags.options());
        outcome.partition = result.partition;
        outcome.iterations = result.iterations;
        outcome.converged = result.converged;
    }
    return outcome;
}

inline nlohmann::json detection_json(const DetectionOutcome& outcome,
                                     const SimilarityGraph& graph, const DetectFlags& flags) {
    nlohmann::json run;
    run["algo"] = outcome.algo;
    run["num_communities"] = outcome.partition.num_communities;
    if (outcome.algo != "cnm") {
        run["iterations"] = outcome.iterations;
        run["converged"] = outcome.converged;
        run["mode"] = flags.mode;
        run["sticky_ties"] = flags.sticky;
        run["seed"] = flags.seed;
        run["max_iters"] = flags.max_iters;
    }
    if (outcome.algo == "wlp") run["weight"] = flags.weight;
    if (graph.edge_count() > 0)
        run["modularity"] = modularity(graph, outcome.partition);
    else
        run["modularity"] = nullptr;
    return run;
}

inline void write_json(const fs::path& path, const nlohmann::json& value) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << value.dump(2) << '\n';
}

inline void write_sweep_outputs(const fs::path& dir, const SweepReport& report,
                                const std::string& format, ManifestWriter& manifest) {
    {
        std::ofstream out(dir / "trials.csv");
        out << "p,multiplier,trial,seed,nmi,communities,iterations,converged\n";
        for (const auto& t : report.trials) {
            out << t.p << ',' << t.multiplier << ',' << t.trial << ',' << t.seed << ','
                << format_double(t.nmi) << ',' << t.communities << ',' << t.iterations << ','
                << (t.converged ? 1 : 0) << '\n';
        }
        manifest.add_output(dir / "trials.csv");
    }
    {
        std::ofstream out(dir / "points.csv");
        out << "p,multiplier,mean_nmi,trials\n";
        for (const auto& point : report.points) {
            out << point.p << ',' << point.multiplier << ',' << format_double(point.mean_nmi)
                << ',' << point.trials << '\n';
        }
        manifest.add_output(dir / "points.csv");
    }
    nlohmann::json trends;
    trends["epsilon"] = report.epsilon_used;
    trends["mixing"] = {{"rho", report.trends.mixing.statistic},
                        {"pvalue", report.trends.mixing.pvalue}};
    trends["multiplier"] = {{"rho", report.trends.multiplier.statistic},
                            {"pvalue", report.trends.multiplier.pvalue}};
    write_json(dir / "trends.json", trends);
    manifest.add_output(dir / "trends.json");

    if (format == "md") {
        std::ofstream out(dir / "report.md");
        out << "# Mixing sweep\n\n";
        out << "epsilon = " << format_double(report.epsilon_used) << "\n\n";
        out << "| p | multiplier | mean NMI |\n|---|---|---|\n";
        for (const auto& point : report.points)
            out << "| " << point.p << " | " << point.multiplier << " | "
                << format_double(point.mean_nmi) << " |\n";
        manifest.add_output(dir / "report.md");
    }
}

inline void write_bench_outputs(const fs::path& dir, const BenchReport& report,
                                ManifestWriter& manifest) {
    {
        std::ofstream out(dir / "trials.csv");
        out << "config,algo,trial,seed,nmi,modularity,communities,iterations,converged\n";
        for (const auto& t : report.trials) {
            out << t.config_index << ',' << t.algo << ',' << t.trial << ',' << t.seed << ','
                << format_double(t.nmi) << ',' << format_double(t.modularity_value) << ','
                << t.communities << ',' << t.iterations << ',' << (t.converged ? 1 : 0) << '\n';
        }
        manifest.add_output(dir / "trials.csv");
    }
    {
        std::ofstream out(dir / "aggregate.csv");
        out << "config,p_in,p_out,communities,size,sampling,algo,mean_communities,mean_nmi,"
               "mean_modularity,trials\n";
        for (const auto& agg : report.aggregates) {
            const auto& sbm = report.config.grid[static_cast<std::size_t>(agg.config_index)];
            out << agg.config_index << ',' << format_double(sbm.p_in) << ','
                << format_double(sbm.p_out) << ',' << sbm.communities << ',' << sbm.size << ','
                << to_string(sbm.sampling) << ',' << agg.algo << ','
                << format_double(agg.mean_communities) << ',' << format_double(agg.mean_nmi)
                << ',' << format_double(agg.mean_modularity) << ',' << agg.trials << '\n';
        }
        manifest.add_output(dir / "aggregate.csv");
    }
    {
        std::ofstream out(dir / "report.md");
        out << "# Planted-partition benchmark\n";
        for (std::size_t c = 0; c < report.config.grid.size(); ++c) {
            const auto& sbm = report.config.grid[c];
            out << "\np_in = " << format_double(sbm.p_in)
                << ", p_out = " << format_double(sbm.p_out)
                << ", communities = " << sbm.communities << ", size = " << sbm.size
                << ", sampling = " << to_string(sbm.sampling) << "\n\n";
            out << "| metric | CNM | Regular | Weighted |\n|---|---|---|---|\n";
            const auto row = [&](const std::string& label, auto getter) {
                out << "| " << label;
                for (const std::string algo : {"cnm", "lp", "wlp"}) {
                    const auto& agg = find_aggregate(report, static_cast<int>(c), algo);
                    out << " | " << format_double(getter(agg));
                }
                out << " |\n";
            };
            row("mean communities", [](const BenchAggregate& a) { return a.mean_communities; });
            row("mean NMI", [](const BenchAggregate& a) { return a.mean_nmi; });
            row("mean modularity", [](const BenchAggregate& a) { return a.mean_modularity; });
        }
        manifest.add_output(dir / "report.md");
    }
}

}  // namespace detail

// Entry point shared by the binary and the test suite. Args exclude the
// program name. Returns the process exit status: 0 success, 1 runtime
// failure, 2 usage error.
inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"latent category discovery from ordinal rankings"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string out_dir_flag, name_flag;

    // ---- generate ----
    auto* generate = app.add_subcommand("generate", "synthetic rankings with planted categories");
    RankingConfig ranking_config;
    generate->add_option("--C,--categories", ranking_config.categories, "number of categories")
        ->required();
    generate->add_option("--S,--category-size", ranking_config.category_size, "items per category")
        ->required();
    generate->add_option("--p,--mixing", ranking_config.mixing, "items swapped per category pair");
    generate->add_option("--voters", ranking_config.voters, "number of voters")->required();
    generate->add_option("--seed", ranking_config.seed, "random seed");

    // ---- build-graph ----
    auto* build = app.add_subcommand("build-graph", "similarity graph from a rankings file");
    std::string rankings_path;
    double epsilon_value = 0.0;
    bool dump_similarity = false;
    build->add_option("--rankings", rankings_path, "rankings CSV")->required();
    auto* build_epsilon = build->add_option("--epsilon", epsilon_value,
                                            "similarity threshold (default: expected value)");
    build->add_flag("--dump-similarity", dump_similarity, "also write similarity.csv");

    // ---- detect ----
    auto* detect = app.add_subcommand("detect", "community detection on an edge-list graph");
    std::string graph_path;
    detail::DetectFlags detect_flags;
    detect->add_option("--graph", graph_path, "edge-list file")->required();
    detect_flags.attach(detect);

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "score a partition against ground truth");
    std::string partition_path, truth_path, eval_graph_path, eval_format = "json";
    eval->add_option("--partition", partition_path, "partition CSV")->required();
    eval->add_option("--truth", truth_path, "ground-truth CSV")->required();
    eval->add_option("--graph", eval_graph_path, "edge list, enables modularity");
    eval->add_option("--format", eval_format, "report format")
        ->check(CLI::IsMember({"json", "csv", "md"}));

    // ---- expect ----
    auto* expect = app.add_subcommand("expect", "expected distance curves for the two-category model");
    int expect_S = 20, expect_C = 2, expect_pmax = -1;
    expect->add_option("--S,--category-size", expect_S, "items per category")->required();
    expect->add_option("--C,--categories", expect_C, "number of categories");
    expect->add_option("--p-max", expect_pmax, "largest swap count (default: S/2)");

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "NMI vs mixing parameter and voting multiplier");
    SweepConfig sweep_config;
    std::string sweep_p_list = "0,1,2,3", sweep_multipliers = "1,2,5,10", sweep_format = "csv";
    double sweep_epsilon = 0.0;
    detail::DetectFlags sweep_flags;
    sweep->add_option("--S,--category-size", sweep_config.category_size, "items per category");
    sweep->add_option("--C,--categories", sweep_config.categories, "number of categories");
    sweep->add_option("--p-list", sweep_p_list, "comma separated mixing values");
    sweep->add_option("--multipliers", sweep_multipliers, "comma separated voter multipliers");
    sweep->add_option("--trials", sweep_config.trials, "trials per grid point");
    sweep->add_option("--jobs", sweep_config.jobs, "worker threads");
    auto* sweep_eps_opt = sweep->add_option("--epsilon", sweep_epsilon, "similarity threshold");
    sweep->add_option("--format", sweep_format, "report format")
        ->check(CLI::IsMember({"csv", "json", "md"}));
    sweep_flags.attach(sweep, /*with_algo=*/false);

    // ---- bench-sbm ----
    auto* bench = app.add_subcommand("bench-sbm", "compare algorithms on planted partitions");
    std::string bench_p_in = "0.7,0.75,0.8", bench_sampling = "pair";
    double bench_p_out = 0.01;
    int bench_communities = 10, bench_size = 5, bench_trials = 100, bench_jobs = 1;
    detail::DetectFlags bench_flags;
    bench->add_option("--p-in-list", bench_p_in, "comma separated intra-community densities");
    bench->add_option("--p-out", bench_p_out, "inter-community density");
    bench->add_option("--communities", bench_communities, "number of planted communities");
    bench->add_option("--size", bench_size, "community size");
    bench->add_option("--trials", bench_trials, "trials per configuration");
    bench->add_option("--jobs", bench_jobs, "worker threads");
    bench->add_option("--sampling", bench_sampling, "Bernoulli trials per pair or ordered pair")
        ->check(CLI::IsMember({"pair", "ordered-pair"}));
    bench_flags.attach(bench, /*with_algo=*/false);

    // ---- ingest-movielens ----
    auto* ingest = app.add_subcommand("ingest-movielens", "similarity pipeline on MovieLens ratings");
    std::string ml_data, ml_items, ml_subset;
    double ml_epsilon = 0.9;
    bool ml_dump_similarity = false;
    detail::DetectFlags ml_flags;
    ingest->add_option("--data", ml_data, "ratings file (user<TAB>item<TAB>rating<TAB>ts)")
        ->required();
    ingest->add_option("--items", ml_items, "item metadata file (id|title|...)")->required();
    ingest->add_option("--subset-file", ml_subset, "title patterns defining the universe")
        ->required();
    ingest->add_option("--epsilon", ml_epsilon, "similarity threshold")->required();
    ingest->add_flag("--dump-similarity", ml_dump_similarity, "also write similarity.csv");
    ml_flags.attach(ingest);

    // ---- pipeline ----
    auto* pipeline = app.add_subcommand("pipeline", "generate, build, detect and score in one run");
    RankingConfig pipe_config;
    double pipe_epsilon = 0.0;
    detail::DetectFlags pipe_flags;
    pipeline->add_option("--C,--categories", pipe_config.categories, "number of categories")
        ->required();
    pipeline->add_option("--S,--category-size", pipe_config.category_size, "items per category")
        ->required();
    pipeline->add_option("--p,--mixing", pipe_config.mixing, "items swapped per category pair");
    pipeline->add_option("--voters", pipe_config.voters, "number of voters")->required();
    auto* pipe_eps_opt = pipeline->add_option("--epsilon", pipe_epsilon, "similarity threshold");
    pipe_flags.attach(pipeline, /*with_algo=*/true);

    // ---- replay ----
    auto* replay = app.add_subcommand("replay", "re-run a recorded manifest");
    std::string replay_manifest;
    replay->add_option("--manifest", replay_manifest, "manifest.json from a previous run")
        ->required();

    for (auto* cmd : {generate, build, detect, eval, expect, sweep, bench, ingest, pipeline}) {
        cmd->add_option("--out", out_dir_flag, "output directory");
        cmd->add_option("--name", name_flag, "run name under the output root");
    }
    replay->add_option("--out", out_dir_flag, "output directory")->required();

    try {
        std::vector<const char*> argv;
        argv.push_back("rankcluster");
        for (const auto& arg : args) argv.push_back(arg.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto run = [&](CLI::App* cmd, auto body) -> int {
        if (!cmd->parsed()) return -1;
        const fs::path dir = detail::resolve_output_dir(cmd->get_name(), out_dir_flag, name_flag);
        try {
            fs::create_directories(dir);
            detail::ManifestWriter manifest(dir, cmd->get_name(), args);
            body(dir, manifest);
            manifest.write();
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    };

    if (replay->parsed()) {
        try {
            std::ifstream in(replay_manifest);
            if (!in) throw std::runtime_error("cannot open manifest: " + replay_manifest);
            const nlohmann::json manifest = nlohmann::json::parse(in);
            std::vector<std::string> replay_args =
                manifest.at("args").get<std::vector<std::string>>();
            replay_args.push_back("--out");
            replay_args.push_back(out_dir_flag);
            return run_cli(replay_args);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }

    int status;

    status = run(generate, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        const auto [matrix, truth] = generate_rankings(ranking_config);
        write_rankings_csv(dir / "rankings.csv", matrix);
        write_assignment_csv(dir / "truth.csv", "category", truth.category);
        nlohmann::json config;
        config["categories"] = ranking_config.categories;
        config["category_size"] = ranking_config.category_size;
        config["mixing"] = ranking_config.mixing;
        config["voters"] = ranking_config.voters;
        config["seed"] = ranking_config.seed;
        config["items"] = ranking_config.item_count();
        detail::write_json(dir / "config.json", config);
        for (const char* f : {"rankings.csv", "truth.csv", "config.json"})
            manifest.add_output(dir / f);
        std::cout << "wrote " << matrix.voters << " voters x " << matrix.items << " items to "
                  << dir.string() << '\n';
    });
    if (status >= 0) return status;

    status = run(build, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        const auto matrix = read_rankings_csv(rankings_path);
        const auto similarity = build_similarity_matrix(matrix);
        const double epsilon =
            *build_epsilon ? epsilon_value : expected_overall_similarity(matrix.items);
        const auto graph = threshold_graph(similarity, epsilon);
        write_edge_list(dir / "graph.edges", graph);
        write_graph_sidecar(dir / "graph.json", graph);
        manifest.add_output(dir / "graph.edges");
        manifest.add_output(dir / "graph.json");
        if (dump_similarity) {
            write_similarity_csv(dir / "similarity.csv", similarity);
            manifest.add_output(dir / "similarity.csv");
        }
        std::cout << "epsilon " << format_double(epsilon) << ": " << graph.edge_count()
                  << " edges, edge ratio " << format_double(graph.edge_ratio()) << '\n';
    });
    if (status >= 0) return status;

    status = run(detect, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        const auto graph = read_graph(graph_path);
        const auto outcome = detail::run_detection(graph, detect_flags);
        write_assignment_csv(dir / "partition.csv", "community", outcome.partition.community);
        detail::write_json(dir / "run.json", detail::detection_json(outcome, graph, detect_flags));
        manifest.add_output(dir / "partition.csv");
        manifest.add_output(dir / "run.json");
        std::cout << outcome.partition.num_communities << " communities\n";
    });
    if (status >= 0) return status;

    status = run(eval, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        const auto partition = Partition::from_labels(read_assignment_csv(partition_path));
        const auto truth = Partition::from_labels(read_assignment_csv(truth_path));
        const auto score = nmi(partition, truth);
        nlohmann::json report;
        report["nmi"] = score.value;
        report["mutual_information"] = score.mutual_information;
        report["entropy_a"] = score.entropy_a;
        report["entropy_b"] = score.entropy_b;
        report["num_communities"] = partition.num_communities;
        report["num_truth_categories"] = truth.num_communities;
        if (!eval_graph_path.empty()) {
            const auto graph = read_graph(eval_graph_path);
            report["modularity"] =
                graph.edge_count() > 0
                    ? nlohmann::json(modularity(graph, partition))
                    : nlohmann::json(nullptr);
        }
        detail::write_json(dir / "eval.json", report);
        manifest.add_output(dir / "eval.json");
        if (eval_format == "csv") {
            std::ofstream out(dir / "eval.csv");
            out << "metric,value\n";
            for (const auto& [key, value] : report.items())
                out << key << ',' << value.dump() << '\n';
            manifest.add_output(dir / "eval.csv");
        } else if (eval_format == "md") {
            std::ofstream out(dir / "eval.md");
            out << "| metric | value |\n|---|---|\n";
            for (const auto& [key, value] : report.items())
                out << "| " << key << " | " << value.dump() << " |\n";
            manifest.add_output(dir / "eval.md");
        }
        std::cout << "nmi " << format_double(score.value) << '\n';
    });
    if (status >= 0) return status;

    status = run(expect, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        const int p_max = expect_pmax >= 0 ? expect_pmax : expect_S / 2;
        const auto curve = emit_expectation_curve(expect_S, expect_C, p_max);
        write_expectation_csv(dir / "expectation.csv", curve);
        manifest.add_output(dir / "expectation.csv");
        nlohmann::json meta;
        meta["category_size"] = curve.category_size;
        meta["categories"] = curve.categories;
        meta["crossing_p"] = curve.crossing_p;
        nlohmann::json formula = nlohmann::json::array();
        for (const auto& row : curve.rows) {
            if (std::isnan(row.intra_formula))
                formula.push_back(nullptr);
            else
                formula.push_back(row.intra_formula);
        }
        meta["intra_formula_averaged"] = formula;
        detail::write_json(dir / "expect.json", meta);
        manifest.add_output(dir / "expect.json");
        if (curve.crossing_p >= 0)
            std::cout << "inter-category distance first drops below the overall mean at p = "
                      << curve.crossing_p << '\n';
        else
            std::cout << "inter-category distance never drops below the overall mean\n";
    });
    if (status >= 0) return status;

    status = run(sweep, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        sweep_config.p_values = detail::parse_int_list(sweep_p_list);
        sweep_config.multipliers = detail::parse_int_list(sweep_multipliers);
        if (*sweep_eps_opt) sweep_config.epsilon = sweep_epsilon;
        sweep_config.mode = update_mode_from_string(sweep_flags.mode);
        sweep_config.weight = weight_kind_from_string(sweep_flags.weight);
        sweep_config.sticky_ties = detail::parse_on_off(sweep_flags.sticky);
        sweep_config.max_iters = sweep_flags.max_iters;
        sweep_config.seed = sweep_flags.seed;
        const auto report = run_mixing_sweep(sweep_config);
        detail::write_sweep_outputs(dir, report, sweep_format, manifest);
        std::cout << "mixing trend rho " << format_double(report.trends.mixing.statistic)
                  << " (p " << format_double(report.trends.mixing.pvalue) << "), multiplier trend rho "
                  << format_double(report.trends.multiplier.statistic) << " (p "
                  << format_double(report.trends.multiplier.pvalue) << ")\n";
    });
    if (status >= 0) return status;

    status = run(bench, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        BenchConfig config;
        for (double p_in : detail::parse_double_list(bench_p_in)) {
            SbmConfig sbm;
            sbm.communities = bench_communities;
            sbm.size = bench_size;
            sbm.p_in = p_in;
            sbm.p_out = bench_p_out;
            sbm.sampling = edge_sampling_from_string(bench_sampling);
            if (!sbm.assortative())
                std::cerr << "warning: p_out exceeds p_in; benchmark is not assortative\n";
            config.grid.push_back(sbm);
        }
        config.trials = bench_trials;
        config.jobs = bench_jobs;
        config.seed = bench_flags.seed;
        config.mode = update_mode_from_string(bench_flags.mode);
        config.weight = weight_kind_from_string(bench_flags.weight);
        config.sticky_ties = detail::parse_on_off(bench_flags.sticky);
        config.max_iters = bench_flags.max_iters;
        const auto report = run_sbm_benchmark(config);
        detail::write_bench_outputs(dir, report, manifest);
        std::cout << "benchmarked " << config.grid.size() << " configurations x "
                  << config.trials << " trials\n";
    });
    if (status >= 0) return status;

    status = run(ingest, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        const auto table = parse_ratings(ml_data, ml_items);
        const auto spec = read_subset_file(ml_subset);
        const auto subset = resolve_subset(table, spec);
        const auto similarity = build_rating_similarity(table, subset);
        const auto graph = threshold_graph(similarity, ml_epsilon);
        write_edge_list(dir / "graph.edges", graph);
        write_graph_sidecar(dir / "graph.json", graph);
        manifest.add_output(dir / "graph.edges");
        manifest.add_output(dir / "graph.json");
        if (ml_dump_similarity) {
            write_similarity_csv(dir / "similarity.csv", similarity);
            manifest.add_output(dir / "similarity.csv");
        }
        const auto outcome = detail::run_detection(graph, ml_flags);
        write_assignment_csv(dir / "partition.csv", "community", outcome.partition.community);
        detail::write_json(dir / "run.json", detail::detection_json(outcome, graph, ml_flags));
        manifest.add_output(dir / "partition.csv");
        manifest.add_output(dir / "run.json");
        {
            std::ofstream out(dir / "categories.txt");
            for (int c = 0; c < outcome.partition.num_communities; ++c) {
                out << "category " << c << ":\n";
                for (int i = 0; i < subset.size(); ++i) {
                    if (outcome.partition.community[static_cast<std::size_t>(i)] == c)
                        out << "  " << subset.titles[static_cast<std::size_t>(i)] << '\n';
                }
            }
            manifest.add_output(dir / "categories.txt");
        }
        std::cout << subset.size() << " movies, edge ratio "
                  << format_double(graph.edge_ratio()) << ", "
                  << outcome.partition.num_communities << " categories\n";
    });
    if (status >= 0) return status;

    status = run(pipeline, [&](const fs::path& dir, detail::ManifestWriter& manifest) {
        pipe_config.seed = derive_seed(pipe_flags.seed, 0xf1);
        const auto [matrix, truth] = generate_rankings(pipe_config);
        write_rankings_csv(dir / "rankings.csv", matrix);
        write_assignment_csv(dir / "truth.csv", "category", truth.category);
        const auto similarity = build_similarity_matrix(matrix);
        const double epsilon =
            *pipe_eps_opt ? pipe_epsilon : expected_overall_similarity(matrix.items);
        const auto graph = threshold_graph(similarity, epsilon);
        write_edge_list(dir / "graph.edges", graph);
        write_graph_sidecar(dir / "graph.json", graph);
        detail::DetectFlags detection = pipe_flags;
        detection.seed = derive_seed(pipe_flags.seed, 0xf2);
        const auto outcome = detail::run_detection(graph, detection);
        write_assignment_csv(dir / "partition.csv", "community", outcome.partition.community);
        detail::write_json(dir / "run.json", detail::detection_json(outcome, graph, detection));
        const auto score = nmi(outcome.partition, to_partition(truth));
        nlohmann::json report;
        report["nmi"] = score.value;
        report["num_communities"] = outcome.partition.num_communities;
        report["epsilon"] = epsilon;
        report["edge_ratio"] = graph.edge_ratio();
        if (graph.edge_count() > 0)
            report["modularity"] = modularity(graph, outcome.partition);
        detail::write_json(dir / "eval.json", report);
        for (const char* f : {"rankings.csv", "truth.csv", "graph.edges", "graph.json",
                              "partition.csv", "run.json", "eval.json"})
            manifest.add_output(dir / f);
        std::cout << "nmi " << format_double(score.value) << " with "
                  << outcome.partition.num_communities << " communities\n";
    });
    if (status >= 0) return status;

    return 0;
}

}  // namespace rankcluster::cli
