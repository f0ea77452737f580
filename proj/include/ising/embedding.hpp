#pragma once

#include "ising/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ising {

/// Combinatorial planar embedding: a rotation system over darts.
/// Dart 2e runs edges[e].u -> edges[e].v, dart 2e+1 the reverse.
/// rotation[v] lists the darts whose tail is v, in cyclic order.
struct EmbeddedGraph {
    Graph graph;
    std::vector<std::vector<int>> rotation;

    int dart_edge(int d) const { return d >> 1; }
    int dart_tail(int d) const {
        const Edge& e = graph.edges[d >> 1];
        return (d & 1) ? e.v : e.u;
    }
    int dart_head(int d) const {
        const Edge& e = graph.edges[d >> 1];
        return (d & 1) ? e.u : e.v;
    }
    static int twin(int d) { return d ^ 1; }

    int dart_between(int a, int b) const; // dart a->b, -1 if absent

    /// Orbits of the face permutation; each face is a dart cycle.
    std::vector<std::vector<int>> faces() const;

    /// Euler test: V - E + F == 2 * (number of connected components),
    /// counting every component's faces separately (equivalent to the
    /// one-plane form V - E + F = 1 + C).
    bool euler_ok() const;

    void validate() const;
};

/// Indication that no planar embedding exists: an edge-minimal nonplanar
/// subgraph, which is a K5 or K33 subdivision.
struct NonPlanarWitness {
    enum class Kind { K5, K33 };
    Kind kind;
    std::vector<Edge> subdivision_edges;
    std::vector<int> branch_vertices;
};

struct EmbedResult {
    std::optional<EmbeddedGraph> embedding;
    std::optional<NonPlanarWitness> witness;

    bool planar() const { return embedding.has_value(); }
};

/// Planarity test + embedding via face-by-face path insertion
/// (Demoucron-Malgrange-Pertuiset), run per biconnected block and merged
/// at cut vertices. Deterministic. On failure the witness is extracted by
/// edge-minimalization.
EmbedResult planar_embed(const Graph& g);

bool is_planar(const Graph& g);

struct TriangulationResult {
    EmbeddedGraph embedded;
    std::vector<int> added_edges; // edge ids in embedded.graph, all >= old E
};

/// Adds chords until every face is a triangle. The result stays simple;
/// original edge ids are preserved as a prefix. Requires a connected
/// embedding on >= 3 vertices.
TriangulationResult triangulate(const EmbeddedGraph& embedding);

struct ContractionResult {
    EmbeddedGraph embedded;
    std::vector<int> vertex_map; // old vertex -> new vertex
    std::vector<int> edge_map;   // old edge -> new edge (-1: removed)
};

/// Contracts one edge, splicing the two rotations; parallel edges created
/// by the contraction are merged (their old ids map to one new id).
ContractionResult contract_edge(const EmbeddedGraph& embedding, int edge_id);

/// Contracts a connected vertex set into one vertex in a single pass. The
/// merged rotation is the boundary walk of the set; internal edges vanish,
/// parallel survivors merge.
ContractionResult contract_set(const EmbeddedGraph& embedding,
                               const std::vector<int>& set);

/// Contracts a set of vertex-disjoint edges (a matching) in one pass.
ContractionResult contract_matching(const EmbeddedGraph& embedding,
                                    const std::vector<int>& matching_edges);

/// Restriction to the vertices with keep[v] == true.
ContractionResult restrict_embedding(const EmbeddedGraph& embedding,
                                     const std::vector<bool>& keep);

/// Inserts edge {a, b} inside a face containing both, if one exists.
/// Returns the new edge id, or -1 when a and b never share a face.
int add_edge_in_common_face(EmbeddedGraph& embedding, int a, int b);

std::string embedding_to_json(const EmbeddedGraph& e);
EmbeddedGraph embedding_from_json(const std::string& text);

} // namespace ising
