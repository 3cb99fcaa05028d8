#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankcluster/expectation.hpp"
#include "rankcluster/graph.hpp"
#include "rankcluster/ranking.hpp"
#include "rankcluster/similarity.hpp"

namespace rankcluster {

// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc())
        throw std::runtime_error("failed to format floating point value");
    return std::string(buffer, ptr);
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline int parse_int(const std::string& text, const std::string& context) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::runtime_error("expected an integer for " + context + ", got '" + text + "'");
    return value;
}

}  // namespace detail

// --- rankings -------------------------------------------------------------

// CSV with header item_0..item_{N-1}, one row of integer ranks per voter.
inline void write_rankings_csv(const std::filesystem::path& path, const RankingMatrix& matrix) {
    auto out = detail::open_output(path);
    for (int i = 0; i < matrix.items; ++i) out << (i ? "," : "") << "item_" << i;
    out << '\n';
    for (int v = 0; v < matrix.voters; ++v) {
        const auto row = matrix.row(v);
        for (int i = 0; i < matrix.items; ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

inline RankingMatrix read_rankings_csv(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty rankings file: " + path.string());
    const auto header = detail::split_csv_line(line);
    const int items = static_cast<int>(header.size());
    for (int i = 0; i < items; ++i) {
        if (header[static_cast<std::size_t>(i)] != "item_" + std::to_string(i))
            throw std::runtime_error("unexpected rankings header column " + std::to_string(i) +
                                     " in " + path.string());
    }
    RankingMatrix matrix;
    matrix.items = items;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (static_cast<int>(fields.size()) != items)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_number) +
                                     ": expected " + std::to_string(items) + " fields");
        for (const auto& field : fields)
            matrix.ranks.push_back(
                detail::parse_int(field, path.string() + ":" + std::to_string(line_number)));
        ++matrix.voters;
    }
    return matrix;
}

// --- item/label assignments ------------------------------------------------

// CSV `item_id,<value_column>` with items listed 0..n-1 in order.
inline void write_assignment_csv(const std::filesystem::path& path,
                                 const std::string& value_column,
                                 const std::vector<int>& values) {
    auto out = detail::open_output(path);
    out << "item_id," << value_column << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << values[i] << '\n';
}

inline std::vector<int> read_assignment_csv(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty assignment file: " + path.string());
    std::vector<int> values;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 2)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_number) +
                                     ": expected two fields");
        const std::string context = path.string() + ":" + std::to_string(line_number);
        const int item = detail::parse_int(fields[0], context);
        if (item != static_cast<int>(values.size()))
            throw std::runtime_error(context + ": items must be listed in order");
        values.push_back(detail::parse_int(fields[1], context));
    }
    return values;
}

// --- graphs -----------------------------------------------------------------

// Edge list, one `i j` pair per line, 0-based.
inline void write_edge_list(const std::filesystem::path& path, const SimilarityGraph& graph) {
    auto out = detail::open_output(path);
    for (const auto& [a, b] : graph.edges()) out << a << ' ' << b << '\n';
}

inline nlohmann::json graph_sidecar(const SimilarityGraph& graph) {
    nlohmann::json sidecar;
    sidecar["n"] = graph.vertex_count();
    if (graph.epsilon())
        sidecar["epsilon"] = *graph.epsilon();
    else
        sidecar["epsilon"] = nullptr;
    sidecar["edge_ratio"] = graph.edge_ratio();
    sidecar["edges"] = graph.edge_count();
    sidecar["source"] = to_string(graph.source());
    return sidecar;
}

inline void write_graph_sidecar(const std::filesystem::path& path, const SimilarityGraph& graph) {
    auto out = detail::open_output(path);
    out << graph_sidecar(graph).dump(2) << '\n';
}

// Reads an edge list; vertex count comes from the sidecar when present,
// otherwise from the largest endpoint.
inline SimilarityGraph read_edge_list(const std::filesystem::path& path,
                                      std::optional<int> vertex_count = std::nullopt) {
    auto in = detail::open_input(path);
    std::vector<std::pair<int, int>> edges;
    int max_vertex = -1;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream stream(line);
        int a = 0, b = 0;
        if (!(stream >> a >> b))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_number) +
                                     ": expected two vertex ids");
        edges.emplace_back(a, b);
        max_vertex = std::max({max_vertex, a, b});
    }
    const int n = vertex_count.value_or(max_vertex + 1);
    return SimilarityGraph(n, std::move(edges), GraphSource::file);
}

inline SimilarityGraph read_graph(const std::filesystem::path& edge_path) {
    std::filesystem::path sidecar_path = edge_path;
    sidecar_path.replace_extension(".json");
    if (std::filesystem::exists(sidecar_path)) {
        auto in = detail::open_input(sidecar_path);
        nlohmann::json sidecar = nlohmann::json::parse(in);
        auto graph = read_edge_list(edge_path, sidecar.at("n").get<int>());
        return graph;
    }
    return read_edge_list(edge_path);
}

// --- similarity matrices -----------------------------------------------------

// Dense CSV dump for inspection: header item_0.., one row per item.
inline void write_similarity_csv(const std::filesystem::path& path,
                                 const SimilarityMatrix& matrix) {
    auto out = detail::open_output(path);
    for (int i = 0; i < matrix.items; ++i) out << (i ? "," : "") << "item_" << i;
    out << '\n';
    for (int i = 0; i < matrix.items; ++i) {
        for (int j = 0; j < matrix.items; ++j)
            out << (j ? "," : "") << format_double(matrix.at(i, j));
        out << '\n';
    }
}

// --- expectation curves -------------------------------------------------------

inline void write_expectation_csv(const std::filesystem::path& path,
                                  const ExpectationCurve& curve) {
    auto out = detail::open_output(path);
    out << "p,intra,overall,inter\n";
    for (const auto& row : curve.rows) {
        out << row.p << ',' << format_double(row.intra) << ',' << format_double(row.overall)
            << ',' << format_double(row.inter) << '\n';
    }
}

inline ExpectationCurve read_expectation_csv(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    std::string line;
    if (!std::getline(in, line) || line != "p,intra,overall,inter")
        throw std::runtime_error("unexpected expectation header in " + path.string());
    ExpectationCurve curve;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 4)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_number) +
                                     ": expected four fields");
        ExpectationCurveRow row;
        row.p = detail::parse_int(fields[0], "p");
        row.intra = std::stod(fields[1]);
        row.overall = std::stod(fields[2]);
        row.inter = std::stod(fields[3]);
        curve.rows.push_back(row);
    }
    return curve;
}

}  // namespace rankcluster
