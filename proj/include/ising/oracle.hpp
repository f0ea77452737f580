#pragma once

#include "ising/model.hpp"

#include <cstdint>
#include <vector>

namespace ising {
namespace oracle {

/// Dense distribution over all 2^N spin configurations. Configuration k
/// assigns vertex v the spin +1 when bit v of k is set, else -1.
struct ExactDistribution {
    int n = 0;
    std::vector<double> probabilities; // size 2^n, sums to 1

    void validate() const;
};

inline int spin_of(std::uint32_t config, int v) {
    return (config >> v) & 1u ? +1 : -1;
}

/// Literal log-sum over all 2^N Boltzmann weights; nonzero fields allowed.
/// Rejects N > 24 with TooLarge.
double brute_force_log_Z(const IsingModel& model);

struct Marginals {
    std::vector<double> edge;   // E[x_v x_w] per edge
    std::vector<double> vertex; // E[x_v] per vertex
};

Marginals brute_force_marginals(const IsingModel& model);

ExactDistribution brute_force_distribution(const IsingModel& model);

/// Conditional distribution given fixed spins (vertex, spin) pairs;
/// configurations violating the condition get probability zero.
ExactDistribution brute_force_conditional_distribution(
    const IsingModel& model, const std::vector<std::pair<int, int>>& fixed);

/// Exhaustive weighted perfect-matching enumeration.
struct PmEnumeration {
    double log_weight_sum; // log of sum over PMs of prod c_e
    std::vector<std::vector<int>> matchings; // each a sorted list of edge ids
};

PmEnumeration enumerate_pms(const Graph& g, const std::vector<double>& weights);

/// Exact log Z of an H x W grid with arbitrary fields and couplings via
/// column-to-column transfer with log-domain rescaling. Vertex (r, c) has
/// index r * W + c. Rejects H > 14.
double grid_transfer_log_Z(int height, int width,
                           const std::vector<double>& couplings,
                           const std::vector<double>& fields,
                           const Graph& grid);

/// Square-grid convenience wrapper: builds the H x H grid itself.
Graph grid_graph(int height, int width);
int grid_vertex(int width, int row, int col);

/// KL(empirical || exact) with the 0 log 0 = 0 convention. `samples` holds
/// one configuration bitmask per draw.
double empirical_kl(const ExactDistribution& exact,
                    const std::vector<std::uint32_t>& samples);

/// Total variation distance between the empirical histogram and `exact`.
double empirical_tv(const ExactDistribution& exact,
                    const std::vector<std::uint32_t>& samples);

std::uint32_t config_bits(const std::vector<int>& spins);

} // namespace oracle
} // namespace ising
