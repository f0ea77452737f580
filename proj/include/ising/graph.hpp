#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ising {

/// Unordered vertex pair; stored with u < v after normalization.
struct Edge {
    int u = 0;
    int v = 0;
};

inline Edge make_edge(int a, int b) {
    return a < b ? Edge{a, b} : Edge{b, a};
}

inline bool operator==(const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v;
}

/// Simple undirected graph: no self-loops, no parallel edges.
/// Edge indices 0..E-1 are stable and used as coupling indices everywhere.
struct Graph {
    int n = 0;
    std::vector<Edge> edges;

    Graph() = default;
    Graph(int vertex_count, std::vector<Edge> edge_list);

    int edge_count() const { return static_cast<int>(edges.size()); }

    /// Throws InvalidInput on self-loops, duplicates, or out-of-range ids.
    void validate() const;

    int find_edge(int a, int b) const; // -1 if absent
    bool has_edge(int a, int b) const { return find_edge(a, b) >= 0; }
};

/// Multigraph with parallel edges permitted. Edges carry a label telling
/// whether they are real or virtual; a virtual edge's id is shared by the
/// two split components created by the same split operation.
struct MultiEdge {
    int u = 0;
    int v = 0;
    int virtual_id = -1; // -1: real edge
    bool is_virtual() const { return virtual_id >= 0; }
};

struct Multigraph {
    int n = 0;
    std::vector<MultiEdge> edges;

    int edge_count() const { return static_cast<int>(edges.size()); }
    void validate() const; // no self-loops
};

/// Per-vertex incidence lists, built once from a Graph.
class Adjacency {
public:
    struct Arc {
        int to;
        int edge;
    };

    explicit Adjacency(const Graph& g);
    Adjacency(int n, const std::vector<Edge>& edges);

    const std::vector<Arc>& operator[](int v) const { return lists_[v]; }
    int degree(int v) const { return static_cast<int>(lists_[v].size()); }
    int size() const { return static_cast<int>(lists_.size()); }

private:
    std::vector<std::vector<Arc>> lists_;
};

std::vector<std::vector<int>> connected_components(const Graph& g);
bool is_connected(const Graph& g);

/// Block-cut decomposition. Each block lists the edge ids it owns (every
/// edge lands in exactly one block); cut vertices are reported separately.
struct BlockCut {
    std::vector<std::vector<int>> block_edges;
    std::vector<int> cut_vertices;
};

BlockCut biconnected_components(const Graph& g);
bool is_biconnected(const Graph& g);

/// Subgraph induced on `vertices`; returns the graph plus the old-id map.
struct InducedSubgraph {
    Graph graph;
    std::vector<int> to_parent;             // local vertex -> parent vertex
    std::vector<int> edge_to_parent;        // local edge -> parent edge
};

InducedSubgraph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

} // namespace ising
