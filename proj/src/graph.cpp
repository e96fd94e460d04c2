#include "sgb/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace sgb {

namespace {

// Hash for an undirected edge with both endpoints already dense and u < v.
struct EdgeHash {
    std::size_t operator()(const std::pair<int, int>& e) const {
        return std::hash<std::int64_t>{}(
            (static_cast<std::int64_t>(e.first) << 32) ^ static_cast<std::int64_t>(e.second));
    }
};

bool parse_id(const std::string& token, std::int64_t& out) {
    if (token.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(token, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == token.size();
}

} // namespace

EdgeListResult load_edge_list(std::istream& in) {
    EdgeListResult result;
    std::unordered_map<std::int64_t, int> remap;
    std::unordered_set<std::pair<int, int>, EdgeHash> seen;
    std::vector<std::pair<int, int>> edges;

    auto dense_id = [&](std::int64_t original) {
        auto it = remap.find(original);
        if (it != remap.end()) return it->second;
        const int id = static_cast<int>(result.original_ids.size());
        remap.emplace(original, id);
        result.original_ids.push_back(original);
        return id;
    };

    std::string line;
    std::int64_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string cleaned;
        cleaned.reserve(line.size());
        for (char c : line) {
            if (c == '#') break;
            cleaned.push_back(c == ',' ? ' ' : c);
        }
        std::vector<std::string> tokens;
        std::size_t i = 0;
        while (i < cleaned.size()) {
            while (i < cleaned.size() && std::isspace(static_cast<unsigned char>(cleaned[i]))) ++i;
            std::size_t start = i;
            while (i < cleaned.size() && !std::isspace(static_cast<unsigned char>(cleaned[i]))) ++i;
            if (i > start) tokens.push_back(cleaned.substr(start, i - start));
        }
        if (tokens.empty()) continue;

        std::int64_t u_orig, v_orig;
        if (tokens.size() != 2 || !parse_id(tokens[0], u_orig) || !parse_id(tokens[1], v_orig))
            throw std::runtime_error("edge list parse error at line " + std::to_string(line_number) +
                                     ": expected two integer node ids");

        const int u = dense_id(u_orig);
        const int v = dense_id(v_orig);
        if (u == v) {
            ++result.dropped_self_loops;
            continue;
        }
        const auto key = std::minmax(u, v);
        if (!seen.insert(key).second) {
            ++result.dropped_duplicates;
            continue;
        }
        edges.push_back(key);
    }

    const int n = static_cast<int>(result.original_ids.size());
    if (n == 0) throw std::runtime_error("edge list contains no nodes");

    Graph& g = result.graph;
    g.node_count = n;
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : edges) {
        ++degree[static_cast<std::size_t>(u)];
        ++degree[static_cast<std::size_t>(v)];
    }
    g.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int u = 0; u < n; ++u)
        g.offsets[static_cast<std::size_t>(u) + 1] =
            g.offsets[static_cast<std::size_t>(u)] + degree[static_cast<std::size_t>(u)];
    g.neighbors.resize(static_cast<std::size_t>(g.offsets.back()));
    std::vector<std::int64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (const auto& [u, v] : edges) {
        g.neighbors[static_cast<std::size_t>(cursor[static_cast<std::size_t>(u)]++)] = v;
        g.neighbors[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] = u;
    }
    for (int u = 0; u < n; ++u) {
        auto begin = g.neighbors.begin() + g.offsets[static_cast<std::size_t>(u)];
        auto end = g.neighbors.begin() + g.offsets[static_cast<std::size_t>(u) + 1];
        std::sort(begin, end);
    }
    return result;
}

void save_edge_list(const Graph& graph, std::ostream& out) {
    for (int u = 0; u < graph.node_count; ++u) {
        bool isolated = true;
        for (int v : graph.row(u)) {
            if (v > u) out << u << " " << v << "\n";
            isolated = false;
        }
        if (isolated) out << u << " " << u << "\n";
    }
}

} // namespace sgb
