#include "ising/graph.hpp"

#include "ising/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>
#include <stack>

namespace ising {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonPlanar: return "NonPlanar";
    case ErrorCode::NonZeroField: return "NonZeroField";
    case ErrorCode::DisconnectedConditionSet: return "DisconnectedConditionSet";
    case ErrorCode::NoPerfectMatching: return "NoPerfectMatching";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::NotBiconnected: return "NotBiconnected";
    case ErrorCode::NotK33Free: return "NotK33Free";
    case ErrorCode::NotK5Free: return "NotK5Free";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::InfeasibleFamily: return "InfeasibleFamily";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

Graph::Graph(int vertex_count, std::vector<Edge> edge_list)
    : n(vertex_count), edges(std::move(edge_list)) {
    for (auto& e : edges) e = make_edge(e.u, e.v);
}

void Graph::validate() const {
    if (n < 0) fail(ErrorCode::InvalidInput, "negative vertex count");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e.u == e.v) fail(ErrorCode::InvalidInput, "self-loop");
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            fail(ErrorCode::InvalidInput, "edge endpoint out of range");
        if (!seen.insert({e.u, e.v}).second)
            fail(ErrorCode::InvalidInput, "duplicate edge");
    }
}

int Graph::find_edge(int a, int b) const {
    const Edge key = make_edge(a, b);
    for (int i = 0; i < edge_count(); ++i)
        if (edges[i] == key) return i;
    return -1;
}

void Multigraph::validate() const {
    for (const auto& e : edges)
        if (e.u == e.v) fail(ErrorCode::InvalidInput, "self-loop in multigraph");
}

Adjacency::Adjacency(const Graph& g) : Adjacency(g.n, g.edges) {}

Adjacency::Adjacency(int n, const std::vector<Edge>& edges) : lists_(n) {
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        lists_[edges[i].u].push_back({edges[i].v, i});
        lists_[edges[i].v].push_back({edges[i].u, i});
    }
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
    Adjacency adj(g);
    std::vector<int> comp(g.n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < g.n; ++s) {
        if (comp[s] >= 0) continue;
        const int id = static_cast<int>(out.size());
        out.emplace_back();
        std::stack<int> st;
        st.push(s);
        comp[s] = id;
        while (!st.empty()) {
            int v = st.top();
            st.pop();
            out[id].push_back(v);
            for (const auto& arc : adj[v]) {
                if (comp[arc.to] < 0) {
                    comp[arc.to] = id;
                    st.push(arc.to);
                }
            }
        }
    }
    return out;
}

bool is_connected(const Graph& g) {
    return g.n <= 1 || connected_components(g).size() == 1;
}

BlockCut biconnected_components(const Graph& g) {
    // Iterative Tarjan lowpoint search over edges.
    Adjacency adj(g);
    BlockCut result;
    std::vector<int> num(g.n, -1), low(g.n, 0), parent_edge(g.n, -1);
    std::vector<int> child_count(g.n, 0);
    std::vector<bool> is_cut(g.n, false);
    std::stack<int> edge_stack;
    int counter = 0;

    struct Frame {
        int v;
        std::size_t next;
    };

    for (int root = 0; root < g.n; ++root) {
        if (num[root] >= 0) continue;
        std::stack<Frame> st;
        num[root] = low[root] = counter++;
        st.push({root, 0});
        while (!st.empty()) {
            Frame& f = st.top();
            int v = f.v;
            if (f.next < adj[v].size()) {
                const auto arc = adj[v][f.next++];
                if (arc.edge == parent_edge[v]) continue;
                if (num[arc.to] < 0) {
                    edge_stack.push(arc.edge);
                    num[arc.to] = low[arc.to] = counter++;
                    parent_edge[arc.to] = arc.edge;
                    if (v == root) ++child_count[root];
                    st.push({arc.to, 0});
                } else if (num[arc.to] < num[v]) {
                    edge_stack.push(arc.edge);
                    low[v] = std::min(low[v], num[arc.to]);
                }
            } else {
                st.pop();
                if (st.empty()) break;
                int p = st.top().v;
                low[p] = std::min(low[p], low[v]);
                if (low[v] >= num[p]) {
                    // p closes a block; pop edges up to the (p, v) tree edge.
                    if (p != root || child_count[root] > 1) is_cut[p] = true;
                    std::vector<int> block;
                    while (true) {
                        int e = edge_stack.top();
                        edge_stack.pop();
                        block.push_back(e);
                        if (e == parent_edge[v]) break;
                    }
                    result.block_edges.push_back(std::move(block));
                }
            }
        }
    }
    for (int v = 0; v < g.n; ++v)
        if (is_cut[v]) result.cut_vertices.push_back(v);
    return result;
}

bool is_biconnected(const Graph& g) {
    if (g.n < 3) return false;
    if (!is_connected(g)) return false;
    return biconnected_components(g).block_edges.size() == 1;
}

InducedSubgraph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
    InducedSubgraph out;
    out.to_parent = vertices;
    std::vector<int> local(g.n, -1);
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
        local[vertices[i]] = i;
    out.graph.n = static_cast<int>(vertices.size());
    for (int e = 0; e < g.edge_count(); ++e) {
        int a = local[g.edges[e].u], b = local[g.edges[e].v];
        if (a >= 0 && b >= 0) {
            out.graph.edges.push_back(make_edge(a, b));
            out.edge_to_parent.push_back(e);
        }
    }
    return out;
}

std::string graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.n;
    auto arr = nlohmann::json::array();
    for (const auto& e : g.edges) arr.push_back({e.u, e.v});
    j["edges"] = arr;
    return j.dump();
}

Graph graph_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Graph g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            fail(ErrorCode::InvalidInput, "edge entries must be pairs");
        g.edges.push_back(make_edge(e[0].get<int>(), e[1].get<int>()));
    }
    g.validate();
    return g;
}

} // namespace ising
