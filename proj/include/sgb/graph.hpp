#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sgb {

// Undirected simple graph in compressed sparse row form. Node ids are dense
// 0..node_count-1; each edge appears in both adjacency rows.
struct Graph {
    int node_count = 0;
    std::vector<std::int64_t> offsets;  // node_count + 1 entries
    std::vector<int> neighbors;         // sorted within each row

    std::span<const int> row(int node) const {
        return {neighbors.data() + offsets[static_cast<std::size_t>(node)],
                neighbors.data() + offsets[static_cast<std::size_t>(node) + 1]};
    }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(neighbors.size()) / 2; }
    int degree(int node) const { return static_cast<int>(row(node).size()); }
};

struct EdgeListResult {
    Graph graph;
    std::vector<std::int64_t> original_ids; // original id of each dense node id
    std::int64_t dropped_self_loops = 0;
    std::int64_t dropped_duplicates = 0;
};

// Parses "u v" edge lines (whitespace or comma separated, `#` comments). Node
// ids are remapped densely in first-appearance order; self-loops and repeated
// edges are dropped and counted. Malformed lines raise a runtime_error naming
// the line number; a stream with no nodes at all is an error.
EdgeListResult load_edge_list(std::istream& in);

// Writes each edge once (lower dense id first). Isolated nodes are kept
// loadable by emitting them as self-loop lines, which the loader drops after
// registering the id.
void save_edge_list(const Graph& graph, std::ostream& out);

} // namespace sgb
