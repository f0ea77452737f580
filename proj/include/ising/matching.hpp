#pragma once

#include "ising/graph.hpp"

#include <vector>

namespace ising {

/// Maximum matching in a general graph (blossom-contracting augmenting
/// search, O(V E) per augmentation). `seed` optionally supplies a partial
/// matching to extend: seed[v] = partner or -1.
/// Returns match[v] = partner or -1.
std::vector<int> maximum_matching(const Graph& g, std::vector<int> seed = {});

/// Perfect matching as edge ids; throws NoPerfectMatching if none exists.
std::vector<int> perfect_matching_edges(const Graph& g, std::vector<int> seed = {});

} // namespace ising
