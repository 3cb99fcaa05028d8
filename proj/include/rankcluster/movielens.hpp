#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rankcluster/similarity.hpp"

namespace rankcluster {

// One user's rating of one movie. MovieLens ships ratings as integers but
// the scale is treated as [0, 5] throughout.
struct Rating {
    int user = 0;
    int item = 0;
    double rating = 0.0;
    long long timestamp = 0;
};

struct RatingsTable {
    std::vector<Rating> records;
    std::map<int, std::string> titles;
};

// Which movies make up the analysis universe: case-insensitive substring
// patterns plus exact-title overrides (for titles the patterns overreach).
struct SubsetSpec {
    std::vector<std::string> patterns;
    std::vector<std::string> exact_titles;
};

namespace detail {

inline std::string lowercase(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return text;
}

inline std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, delimiter)) fields.push_back(field);
    return fields;
}

}  // namespace detail

constexpr double kRatingScale = 5.0;

// Parse the ratings file (tab separated: user, item, rating, timestamp) and
// the item metadata file (pipe separated: id, title, ...). Every malformed
// line is reported with its file, line number and offending field; duplicate
// (user, item) pairs are rejected with both line numbers.
inline RatingsTable parse_ratings(const std::filesystem::path& data_file,
                                  const std::filesystem::path& item_file) {
    RatingsTable table;

    std::ifstream items(item_file);
    if (!items) throw std::runtime_error("cannot open items file: " + item_file.string());
    std::string line;
    int line_number = 0;
    while (std::getline(items, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto fields = detail::split(line, '|');
        if (fields.size() < 2)
            throw std::runtime_error(item_file.string() + ":" + std::to_string(line_number) +
                                     ": expected at least id|title");
        try {
            table.titles[std::stoi(fields[0])] = fields[1];
        } catch (const std::exception&) {
            throw std::runtime_error(item_file.string() + ":" + std::to_string(line_number) +
                                     ": field 'id' is not an integer: '" + fields[0] + "'");
        }
    }

    std::ifstream data(data_file);
    if (!data) throw std::runtime_error("cannot open ratings file: " + data_file.string());
    std::map<std::pair<int, int>, int> seen;  // (user, item) -> line
    line_number = 0;
    while (std::getline(data, line)) {
        ++line_number;
        if (line.empty()) continue;
        const std::string where = data_file.string() + ":" + std::to_string(line_number);
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 4)
            throw std::runtime_error(where + ": expected user, item, rating, timestamp");
        Rating record;
        try {
            record.user = std::stoi(fields[0]);
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": field 'user' is not an integer");
        }
        try {
            record.item = std::stoi(fields[1]);
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": field 'item' is not an integer");
        }
        try {
            record.rating = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": field 'rating' is not a number");
        }
        try {
            record.timestamp = std::stoll(fields[3]);
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": field 'timestamp' is not an integer");
        }
        if (record.rating < 0.0 || record.rating > kRatingScale)
            throw std::runtime_error(where + ": rating " + fields[2] + " outside [0, 5]");
        const auto [it, inserted] = seen.try_emplace({record.user, record.item}, line_number);
        if (!inserted)
            throw std::runtime_error(where + ": duplicate rating for user " +
                                     std::to_string(record.user) + ", item " +
                                     std::to_string(record.item) + " (first at line " +
                                     std::to_string(it->second) + ")");
        table.records.push_back(record);
    }
    return table;
}

// Movies selected by a SubsetSpec, sorted by item id.
struct MovieSubset {
    std::vector<int> item_ids;
    std::vector<std::string> titles;

    int size() const { return static_cast<int>(item_ids.size()); }
};

inline MovieSubset resolve_subset(const RatingsTable& table, const SubsetSpec& spec) {
    std::vector<std::string> patterns;
    patterns.reserve(spec.patterns.size());
    for (const auto& p : spec.patterns) patterns.push_back(detail::lowercase(p));

    MovieSubset subset;
    for (const auto& [id, title] : table.titles) {
        const std::string lower = detail::lowercase(title);
        bool selected = std::find(spec.exact_titles.begin(), spec.exact_titles.end(), title) !=
                        spec.exact_titles.end();
        for (const auto& pattern : patterns) {
            if (selected) break;
            selected = lower.find(pattern) != std::string::npos;
        }
        if (selected) {
            subset.item_ids.push_back(id);
            subset.titles.push_back(title);
        }
    }
    if (subset.size() < 2)
        throw std::runtime_error("subset resolves to fewer than two movies");
    return subset;
}

// Load a subset spec from a text file: one case-insensitive substring pattern
// per line; lines starting with '=' name an exact title; '#' comments.
inline SubsetSpec read_subset_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open subset file: " + path.string());
    SubsetSpec spec;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line[0] == '=')
            spec.exact_titles.push_back(line.substr(1));
        else
            spec.patterns.push_back(line);
    }
    return spec;
}

// Mean similarity over co-rating users only: each user who rated both movies
// contributes 1 - |r_a - r_b| / 5. Pairs nobody co-rated keep similarity 0
// and a zero co-rater count, so they can never become edges.
inline SimilarityMatrix build_rating_similarity(const RatingsTable& table,
                                                const MovieSubset& subset) {
    const int n = subset.size();
    std::map<int, int> index_of;
    for (int i = 0; i < n; ++i) index_of[subset.item_ids[static_cast<std::size_t>(i)]] = i;

    // Group each user's ratings restricted to the subset.
    std::map<int, std::vector<std::pair<int, double>>> by_user;
    for (const auto& record : table.records) {
        const auto it = index_of.find(record.item);
        if (it != index_of.end()) by_user[record.user].emplace_back(it->second, record.rating);
    }

    std::vector<double> sums(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<int> counts(static_cast<std::size_t>(n) * n, 0);
    for (const auto& [user, rated] : by_user) {
        for (std::size_t a = 0; a < rated.size(); ++a) {
            for (std::size_t b = a + 1; b < rated.size(); ++b) {
                int i = rated[a].first, j = rated[b].first;
                if (i > j) std::swap(i, j);
                sums[static_cast<std::size_t>(i) * n + j] +=
                    1.0 - std::abs(rated[a].second - rated[b].second) / kRatingScale;
                counts[static_cast<std::size_t>(i) * n + j] += 1;
            }
        }
    }

    SimilarityMatrix matrix = SimilarityMatrix::identity(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int count = counts[static_cast<std::size_t>(i) * n + j];
            const double value =
                count > 0 ? sums[static_cast<std::size_t>(i) * n + j] / count : 0.0;
            matrix.set(i, j, value, count);
        }
    }
    return matrix;
}

inline SimilarityMatrix build_rating_similarity(const RatingsTable& table,
                                                const SubsetSpec& spec) {
    return build_rating_similarity(table, resolve_subset(table, spec));
}

}  // namespace rankcluster
