#pragma once

#include "ising/graph.hpp"

#include <string>
#include <vector>

namespace ising {

/// Pairwise-interaction binary model over a simple graph. Spins take
/// values in {-1,+1}; couplings are indexed like graph.edges and fields
/// like vertices. The exact planar/decomposition engines require all
/// fields to be zero; only the oracles and the apex reduction accept
/// nonzero fields.
struct IsingModel {
    Graph graph;
    std::vector<double> couplings; // J_e
    std::vector<double> fields;    // mu_v

    IsingModel() = default;
    IsingModel(Graph g, std::vector<double> j, std::vector<double> mu = {});

    void validate() const;
    bool zero_field() const;
    double coupling_sum() const;
};

IsingModel zero_field_model(Graph g, std::vector<double> j);

std::string model_to_json(const IsingModel& m);
IsingModel model_from_json(const std::string& text);

} // namespace ising
