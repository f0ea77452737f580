#pragma once

#include "ising/embedding.hpp"

#include <vector>

namespace ising {

/// Separation of a planar graph: no edge joins part1 to part2,
/// max(|part1|, |part2|) <= (2/3) n and |separator| <= 2^{3/2} sqrt(n).
struct Separation {
    std::vector<int> part1, part2, separator;
};

/// Lipton-Tarjan style separation. Candidates tried in order: a single BFS
/// level, a fundamental cycle of a BFS tree in the triangulated graph, and
/// the full middle-shrink construction (levels l0/l2 plus a cycle in the
/// contracted band), which is the guaranteed fallback.
Separation planar_separation(const EmbeddedGraph& embedding);

/// Recursive separations recorded while ordering (for invariant checks).
struct SeparatorTree {
    struct Node {
        int subgraph_size;
        std::vector<int> part1, part2, separator; // original vertex ids
    };
    std::vector<Node> nodes;
};

/// Nested dissection: parts first, separators last, recursively. Vertices
/// listed in `forced_last` are excluded from the recursion and appended at
/// the very end (used to pin a sampling separator at the tail).
std::vector<int> nested_dissection_order(const EmbeddedGraph& embedding,
                                         const std::vector<int>& forced_last = {},
                                         SeparatorTree* tree = nullptr);

} // namespace ising
