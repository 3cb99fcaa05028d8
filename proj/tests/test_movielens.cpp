#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "rankcluster/movielens.hpp"

using namespace rankcluster;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "rankcluster_ml_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out);
    out << text;
}

fs::path fixture_items(const fs::path& dir) {
    write_file(dir / "u.item",
               "1|Alpha Story (1995)|x|x\n"
               "2|Beta Story (1996)|x|x\n"
               "3|Gamma Tale (1990)|x|x\n"
               "4|Delta Tale (1991)|x|x\n");
    return dir / "u.item";
}

}  // namespace

TEST_CASE("empty ratings file parses to an empty table") {
    const auto dir = scratch_dir("empty");
    write_file(dir / "u.data", "");
    const auto items = fixture_items(dir);
    const auto table = parse_ratings(dir / "u.data", items);
    CHECK(table.records.empty());
    CHECK(table.titles.size() == 4);
}

TEST_CASE("golden three-line fixture") {
    const auto dir = scratch_dir("golden");
    write_file(dir / "u.data",
               "7\t1\t5\t875071561\n"
               "7\t2\t3\t875071562\n"
               "9\t1\t4\t875071563\n");
    const auto table = parse_ratings(dir / "u.data", fixture_items(dir));
    REQUIRE(table.records.size() == 3);
    CHECK(table.records[0].user == 7);
    CHECK(table.records[0].item == 1);
    CHECK(table.records[0].rating == 5.0);
    CHECK(table.records[0].timestamp == 875071561);
    CHECK(table.records[2].user == 9);
    CHECK(table.titles.at(1) == "Alpha Story (1995)");
}

TEST_CASE("duplicate ratings are rejected with both line numbers") {
    const auto dir = scratch_dir("dup");
    write_file(dir / "u.data",
               "7\t1\t5\t1\n"
               "8\t1\t4\t2\n"
               "7\t1\t3\t3\n");
    try {
        parse_ratings(dir / "u.data", fixture_items(dir));
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.find(":3") != std::string::npos);
        CHECK(what.find("line 1") != std::string::npos);
    }
}

TEST_CASE("malformed lines name the offending field") {
    const auto dir = scratch_dir("malformed");
    const auto items = fixture_items(dir);

    write_file(dir / "a.data", "7\t1\tx\t1\n");
    CHECK_THROWS_WITH(parse_ratings(dir / "a.data", items),
                      Catch::Contains("rating") && Catch::Contains(":1"));

    write_file(dir / "b.data", "7\t1\t5\n");
    CHECK_THROWS_WITH(parse_ratings(dir / "b.data", items), Catch::Contains("expected"));

    write_file(dir / "c.data", "7\t1\t9\t1\n");
    CHECK_THROWS_WITH(parse_ratings(dir / "c.data", items), Catch::Contains("outside [0, 5]"));
}

TEST_CASE("subset resolution") {
    const auto dir = scratch_dir("subset");
    write_file(dir / "u.data", "7\t1\t5\t1\n");
    const auto table = parse_ratings(dir / "u.data", fixture_items(dir));

    SECTION("case-insensitive substring") {
        SubsetSpec spec;
        spec.patterns = {"story"};
        const auto subset = resolve_subset(table, spec);
        REQUIRE(subset.size() == 2);
        CHECK(subset.titles[0] == "Alpha Story (1995)");
        CHECK(subset.titles[1] == "Beta Story (1996)");
    }
    SECTION("exact titles extend the pattern matches") {
        SubsetSpec spec;
        spec.patterns = {"story"};
        spec.exact_titles = {"Gamma Tale (1990)"};
        const auto subset = resolve_subset(table, spec);
        CHECK(subset.size() == 3);
    }
    SECTION("too small a subset is rejected") {
        SubsetSpec spec;
        spec.patterns = {"gamma"};
        CHECK_THROWS_AS(resolve_subset(table, spec), std::runtime_error);
    }
}

TEST_CASE("subset file format") {
    const auto dir = scratch_dir("subset_file");
    write_file(dir / "subset.txt",
               "# kid movies\n"
               "story\n"
               "=Gamma Tale (1990)\n"
               "\n");
    const auto spec = read_subset_file(dir / "subset.txt");
    REQUIRE(spec.patterns.size() == 1);
    CHECK(spec.patterns[0] == "story");
    REQUIRE(spec.exact_titles.size() == 1);
    CHECK(spec.exact_titles[0] == "Gamma Tale (1990)");
}

TEST_CASE("rating similarity over co-rating users") {
    const auto dir = scratch_dir("similarity");
    const auto items = fixture_items(dir);
    SubsetSpec all;
    all.patterns = {"story", "tale"};

    SECTION("matching ratings give similarity one") {
        write_file(dir / "u.data",
                   "1\t1\t4\t1\n"
                   "1\t2\t4\t2\n");
        const auto table = parse_ratings(dir / "u.data", items);
        const auto matrix = build_rating_similarity(table, all);
        CHECK(matrix.at(0, 1) == 1.0);
        CHECK(matrix.count(0, 1) == 1);
    }
    SECTION("extreme disagreement gives zero") {
        write_file(dir / "u.data",
                   "1\t1\t5\t1\n"
                   "1\t2\t0\t2\n");
        const auto table = parse_ratings(dir / "u.data", items);
        const auto matrix = build_rating_similarity(table, all);
        CHECK(matrix.at(0, 1) == 0.0);
        CHECK(matrix.count(0, 1) == 1);
    }
    SECTION("pairs without co-raters stay at zero with zero count") {
        write_file(dir / "u.data",
                   "1\t1\t5\t1\n"
                   "2\t3\t5\t2\n");
        const auto table = parse_ratings(dir / "u.data", items);
        const auto matrix = build_rating_similarity(table, all);
        CHECK(matrix.at(0, 2) == 0.0);
        CHECK(matrix.count(0, 2) == 0);
    }
    SECTION("mean over multiple co-raters") {
        write_file(dir / "u.data",
                   "1\t1\t5\t1\n"
                   "1\t2\t3\t2\n"
                   "2\t1\t4\t3\n"
                   "2\t2\t4\t4\n");
        const auto table = parse_ratings(dir / "u.data", items);
        const auto matrix = build_rating_similarity(table, all);
        CHECK(matrix.at(0, 1) == Approx(((1.0 - 2.0 / 5.0) + 1.0) / 2.0).epsilon(1e-12));
        CHECK(matrix.count(0, 1) == 2);
    }
}

TEST_CASE("removing a user never increases co-rater counts") {
    const auto dir = scratch_dir("monotone");
    const auto items = fixture_items(dir);
    write_file(dir / "u.data",
               "1\t1\t5\t1\n1\t2\t3\t2\n1\t3\t1\t3\n"
               "2\t1\t4\t4\n2\t2\t4\t5\n"
               "3\t2\t2\t6\n3\t3\t5\t7\n3\t4\t4\t8\n");
    const auto table = parse_ratings(dir / "u.data", items);
    SubsetSpec all;
    all.patterns = {"story", "tale"};
    const auto subset = resolve_subset(table, all);
    const auto full = build_rating_similarity(table, subset);
    for (int drop_user : {1, 2, 3}) {
        RatingsTable reduced;
        reduced.titles = table.titles;
        for (const auto& record : table.records)
            if (record.user != drop_user) reduced.records.push_back(record);
        const auto matrix = build_rating_similarity(reduced, subset);
        for (int i = 0; i < subset.size(); ++i)
            for (int j = i + 1; j < subset.size(); ++j) {
                CAPTURE(drop_user, i, j);
                CHECK(matrix.count(i, j) <= full.count(i, j));
            }
    }
}

TEST_CASE("ingest is deterministic") {
    const auto dir = scratch_dir("deterministic");
    const auto items = fixture_items(dir);
    write_file(dir / "u.data",
               "1\t1\t5\t1\n1\t2\t3\t2\n2\t1\t4\t3\n2\t2\t4\t4\n");
    const auto a = parse_ratings(dir / "u.data", items);
    const auto b = parse_ratings(dir / "u.data", items);
    SubsetSpec all;
    all.patterns = {"story"};
    const auto ma = build_rating_similarity(a, all);
    const auto mb = build_rating_similarity(b, all);
    CHECK(ma.mean_sim == mb.mean_sim);
    CHECK(ma.voters_counted == mb.voters_counted);
}
