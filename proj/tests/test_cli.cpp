#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankcluster/cli.hpp"
#include "rankcluster/io.hpp"

using rankcluster::cli::run_cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "rankcluster_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json load_json(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in);
    return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("pipeline separates unmixed categories perfectly") {
    const auto dir = scratch_dir("pipeline");
    double nmi_total = 0.0;
    const int seeds = 20;
    for (int seed = 0; seed < seeds; ++seed) {
        const fs::path out = dir / ("run" + std::to_string(seed));
        const int status = run_cli({"pipeline", "--C", "2", "--S", "20", "--p", "0", "--voters",
                                    "400", "--seed", std::to_string(seed), "--out", out.string()});
        REQUIRE(status == 0);
        const auto eval = load_json(out / "eval.json");
        nmi_total += eval.at("nmi").get<double>();
        CHECK(eval.at("nmi").get<double>() >= 0.9);
    }
    CHECK(nmi_total / seeds >= 0.99);
}

TEST_CASE("expect emits the expected curve") {
    const auto dir = scratch_dir("expect");
    const int status =
        run_cli({"expect", "--S", "20", "--C", "2", "--p-max", "12", "--out", dir.string()});
    REQUIRE(status == 0);
    const auto curve = rankcluster::read_expectation_csv(dir / "expectation.csv");
    REQUIRE(curve.rows.size() == 13);
    CHECK(curve.rows[0].intra == 7.0);
    CHECK(curve.rows[0].overall == 41.0 / 3.0);
    CHECK(curve.rows[0].inter == 20.0);
    const auto meta = load_json(dir / "expect.json");
    CHECK(meta.at("crossing_p").get<int>() == 9);
}

TEST_CASE("detect on a two-triangle edge list") {
    const auto dir = scratch_dir("detect");
    {
        std::ofstream out(dir / "g.edges");
        out << "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n";
    }
    for (const std::string algo : {"wlp", "lp", "cnm"}) {
        const fs::path out = dir / algo;
        const int status = run_cli({"detect", "--graph", (dir / "g.edges").string(), "--algo",
                                    algo, "--seed", "11", "--out", out.string()});
        REQUIRE(status == 0);
        const auto run = load_json(out / "run.json");
        CHECK(run.at("num_communities").get<int>() == 2);
        const auto partition = rankcluster::read_assignment_csv(out / "partition.csv");
        REQUIRE(partition.size() == 6);
        CHECK(partition[0] == partition[1]);
        CHECK(partition[3] == partition[4]);
        CHECK(partition[0] != partition[3]);
    }
}

TEST_CASE("same seed reproduces byte-identical outputs") {
    const auto dir = scratch_dir("deterministic");
    for (const std::string run : {"a", "b"}) {
        const int status = run_cli({"generate", "--C", "3", "--S", "4", "--p", "1", "--voters",
                                    "6", "--seed", "42", "--out", (dir / run).string()});
        REQUIRE(status == 0);
    }
    for (const std::string file : {"rankings.csv", "truth.csv", "config.json"}) {
        CAPTURE(file);
        CHECK(slurp(dir / "a" / file) == slurp(dir / "b" / file));
    }
}

TEST_CASE("replaying a manifest reproduces the data files") {
    const auto dir = scratch_dir("replay");
    REQUIRE(run_cli({"pipeline", "--C", "2", "--S", "6", "--p", "1", "--voters", "24", "--seed",
                     "5", "--out", (dir / "orig").string()}) == 0);
    REQUIRE(run_cli({"replay", "--manifest", (dir / "orig" / "manifest.json").string(), "--out",
                     (dir / "redo").string()}) == 0);
    const auto manifest = load_json(dir / "orig" / "manifest.json");
    for (const auto& name : manifest.at("outputs")) {
        const std::string file = name.get<std::string>();
        CAPTURE(file);
        CHECK(slurp(dir / "orig" / file) == slurp(dir / "redo" / file));
    }
}

TEST_CASE("replaying a parallel benchmark is byte-identical") {
    const auto dir = scratch_dir("replay_bench");
    REQUIRE(run_cli({"bench-sbm", "--p-in-list", "0.8", "--p-out", "0.02", "--communities", "4",
                     "--size", "5", "--trials", "6", "--seed", "12", "--jobs", "2", "--out",
                     (dir / "orig").string()}) == 0);
    REQUIRE(run_cli({"replay", "--manifest", (dir / "orig" / "manifest.json").string(), "--out",
                     (dir / "redo").string()}) == 0);
    for (const std::string file : {"trials.csv", "aggregate.csv", "report.md"}) {
        CAPTURE(file);
        CHECK(slurp(dir / "orig" / file) == slurp(dir / "redo" / file));
    }
}

TEST_CASE("build-graph and eval chain on files") {
    const auto dir = scratch_dir("chain");
    REQUIRE(run_cli({"generate", "--C", "2", "--S", "5", "--voters", "50", "--seed", "8", "--out",
                     (dir / "gen").string()}) == 0);
    REQUIRE(run_cli({"build-graph", "--rankings", (dir / "gen" / "rankings.csv").string(),
                     "--dump-similarity", "--out", (dir / "graph").string()}) == 0);
    CHECK(fs::exists(dir / "graph" / "graph.edges"));
    CHECK(fs::exists(dir / "graph" / "graph.json"));
    CHECK(fs::exists(dir / "graph" / "similarity.csv"));
    REQUIRE(run_cli({"detect", "--graph", (dir / "graph" / "graph.edges").string(), "--seed", "3",
                     "--out", (dir / "det").string()}) == 0);
    REQUIRE(run_cli({"eval", "--partition", (dir / "det" / "partition.csv").string(), "--truth",
                     (dir / "gen" / "truth.csv").string(), "--graph",
                     (dir / "graph" / "graph.edges").string(), "--out",
                     (dir / "eval").string()}) == 0);
    const auto eval = load_json(dir / "eval" / "eval.json");
    CHECK(eval.at("nmi").get<double>() == 1.0);
    CHECK(eval.contains("modularity"));
}

TEST_CASE("usage errors exit with status two") {
    CHECK(run_cli({"generate", "--no-such-flag"}) == 2);
    CHECK(run_cli({"no-such-subcommand"}) == 2);
}

TEST_CASE("missing input files exit with status one") {
    const auto dir = scratch_dir("missing");
    CHECK(run_cli({"build-graph", "--rankings", (dir / "absent.csv").string(), "--out",
                   (dir / "out").string()}) == 1);
    CHECK(run_cli({"detect", "--graph", (dir / "absent.edges").string(), "--out",
                   (dir / "out2").string()}) == 1);
}

TEST_CASE("every run writes a manifest with the run metadata") {
    const auto dir = scratch_dir("manifest");
    REQUIRE(run_cli({"expect", "--S", "6", "--C", "2", "--out", dir.string()}) == 0);
    const auto manifest = load_json(dir / "manifest.json");
    CHECK(manifest.at("tool") == "rankcluster");
    CHECK(manifest.at("subcommand") == "expect");
    CHECK(manifest.at("duration_seconds").get<double>() >= 0.0);
    const std::set<std::string> outputs(manifest.at("outputs").begin(),
                                        manifest.at("outputs").end());
    CHECK(outputs.count("expectation.csv") == 1);
}

TEST_CASE("ingest-movielens splits an obvious two-genre fixture") {
    const auto dir = scratch_dir("ingest");
    {
        std::ofstream items(dir / "u.item");
        items << "1|Robot Saga I (1990)|\n2|Robot Saga II (1992)|\n3|Robot Saga III (1994)|\n"
                 "4|Quiet Garden (1991)|\n5|Quiet Meadow (1993)|\n6|Quiet Pond (1995)|\n";
    }
    {
        // Two user camps: robot fans rate robots 5 and gardens 1, the quiet
        // camp does the opposite. Within-genre similarity 1, across 0.2.
        std::ofstream data(dir / "u.data");
        int timestamp = 1;
        for (int user = 1; user <= 6; ++user) {
            const bool robot_fan = user <= 3;
            for (int item = 1; item <= 6; ++item) {
                const bool robot_movie = item <= 3;
                const int rating = robot_fan == robot_movie ? 5 : 1;
                data << user << '\t' << item << '\t' << rating << '\t' << timestamp++ << '\n';
            }
        }
    }
    {
        std::ofstream subset(dir / "subset.txt");
        subset << "robot saga\nquiet\n";
    }
    const fs::path out = dir / "out";
    REQUIRE(run_cli({"ingest-movielens", "--data", (dir / "u.data").string(), "--items",
                     (dir / "u.item").string(), "--subset-file", (dir / "subset.txt").string(),
                     "--epsilon", "0.9", "--seed", "4", "--dump-similarity", "--out",
                     out.string()}) == 0);
    const auto run = load_json(out / "run.json");
    CHECK(run.at("num_communities").get<int>() == 2);
    const auto partition = rankcluster::read_assignment_csv(out / "partition.csv");
    REQUIRE(partition.size() == 6);
    CHECK(partition[0] == partition[1]);
    CHECK(partition[1] == partition[2]);
    CHECK(partition[3] == partition[4]);
    CHECK(partition[4] == partition[5]);
    CHECK(partition[0] != partition[3]);
    const std::string categories = slurp(out / "categories.txt");
    CHECK(categories.find("Quiet Garden (1991)") != std::string::npos);
    CHECK(fs::exists(out / "similarity.csv"));
    CHECK(fs::exists(out / "graph.json"));
}

TEST_CASE("small sweep and benchmark run end to end") {
    const auto dir = scratch_dir("experiments");
    REQUIRE(run_cli({"sweep", "--S", "4", "--C", "2", "--p-list", "0,1", "--multipliers", "1,4",
                     "--trials", "3", "--seed", "2", "--out", (dir / "sweep").string()}) == 0);
    CHECK(fs::exists(dir / "sweep" / "trials.csv"));
    CHECK(fs::exists(dir / "sweep" / "points.csv"));
    CHECK(fs::exists(dir / "sweep" / "trends.json"));

    REQUIRE(run_cli({"bench-sbm", "--p-in-list", "0.8", "--p-out", "0.02", "--communities", "4",
                     "--size", "5", "--trials", "4", "--seed", "3", "--out",
                     (dir / "bench").string()}) == 0);
    CHECK(fs::exists(dir / "bench" / "trials.csv"));
    CHECK(fs::exists(dir / "bench" / "aggregate.csv"));
    CHECK(fs::exists(dir / "bench" / "report.md"));
}
