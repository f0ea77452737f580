#include "ising/model.hpp"

#include "ising/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numeric>

namespace ising {

IsingModel::IsingModel(Graph g, std::vector<double> j, std::vector<double> mu)
    : graph(std::move(g)), couplings(std::move(j)), fields(std::move(mu)) {
    if (fields.empty()) fields.assign(graph.n, 0.0);
}

void IsingModel::validate() const {
    graph.validate();
    if (static_cast<int>(couplings.size()) != graph.edge_count())
        fail(ErrorCode::InvalidInput, "coupling vector length != edge count");
    if (static_cast<int>(fields.size()) != graph.n)
        fail(ErrorCode::InvalidInput, "field vector length != vertex count");
    for (double x : couplings)
        if (!std::isfinite(x)) fail(ErrorCode::InvalidInput, "non-finite coupling");
    for (double x : fields)
        if (!std::isfinite(x)) fail(ErrorCode::InvalidInput, "non-finite field");
}

bool IsingModel::zero_field() const {
    for (double x : fields)
        if (x != 0.0) return false;
    return true;
}

double IsingModel::coupling_sum() const {
    return std::accumulate(couplings.begin(), couplings.end(), 0.0);
}

IsingModel zero_field_model(Graph g, std::vector<double> j) {
    return IsingModel(std::move(g), std::move(j));
}

std::string model_to_json(const IsingModel& m) {
    nlohmann::json j;
    j["n"] = m.graph.n;
    auto arr = nlohmann::json::array();
    for (const auto& e : m.graph.edges) arr.push_back({e.u, e.v});
    j["edges"] = arr;
    j["J"] = m.couplings;
    j["mu"] = m.fields;
    return j.dump();
}

IsingModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    IsingModel m;
    m.graph.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges"))
        m.graph.edges.push_back(make_edge(e[0].get<int>(), e[1].get<int>()));
    m.couplings = j.at("J").get<std::vector<double>>();
    if (j.contains("mu"))
        m.fields = j.at("mu").get<std::vector<double>>();
    else
        m.fields.assign(m.graph.n, 0.0);
    m.validate();
    return m;
}

} // namespace ising
