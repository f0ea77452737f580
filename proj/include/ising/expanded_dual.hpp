#pragma once

#include "ising/embedding.hpp"

namespace ising {

/// Expanded dual G* of a triangulated embedded graph. Every face becomes a
/// K3 "city" whose corners are the face's darts; each primal edge yields one
/// intercity edge between the cities of its two darts.
///
/// Star edge ids 0..E-1 are the intercity edges, aligned with primal edge
/// ids (the bijection g is the identity on indices); city edges follow.
/// Star vertex ids are primal dart ids.
struct ExpandedDual {
    EmbeddedGraph star;
    int primal_edge_count = 0;  // = number of intercity edges
    int primal_vertex_count = 0;

    bool is_intercity(int star_edge) const { return star_edge < primal_edge_count; }
    int g_map(int star_edge) const { return star_edge; } // intercity -> primal edge
    int intercity_of(int primal_edge) const { return primal_edge; }

    /// Vertices of the intercity edge for a primal edge: its two darts.
    std::pair<int, int> intercity_endpoints(int primal_edge) const {
        return {2 * primal_edge, 2 * primal_edge + 1};
    }
};

/// Requires every face of `embedding` to be a triangle.
ExpandedDual expanded_dual(const EmbeddedGraph& embedding);

} // namespace ising
