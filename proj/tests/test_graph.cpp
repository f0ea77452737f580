#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/error.hpp"
#include "ising/graph.hpp"
#include "ising/rng.hpp"

using namespace ising;

namespace {

Graph complete_graph(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
    return g;
}

} // namespace

TEST_CASE("graph validation catches bad input") {
    Graph g(3, {{0, 1}, {1, 2}});
    CHECK_NOTHROW(g.validate());

    Graph loop(2, {{1, 1}});
    CHECK_THROWS_AS(loop.validate(), Error);

    Graph dup(3, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(dup.validate(), Error);

    Graph range(2, {{0, 2}});
    CHECK_THROWS_AS(range.validate(), Error);
}

TEST_CASE("connected and biconnected components") {
    // Two triangles sharing one vertex: one component, two blocks, one cut.
    Graph bowtie(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}});
    CHECK(is_connected(bowtie));
    auto bc = biconnected_components(bowtie);
    CHECK(bc.block_edges.size() == 2);
    REQUIRE(bc.cut_vertices.size() == 1);
    CHECK(bc.cut_vertices[0] == 2);
    CHECK_FALSE(is_biconnected(bowtie));

    CHECK(is_biconnected(complete_graph(4)));

    Graph two_parts(4, {{0, 1}, {2, 3}});
    CHECK(connected_components(two_parts).size() == 2);

    // Path: every edge is its own block, interior vertices are cuts.
    Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
    auto pc = biconnected_components(path);
    CHECK(pc.block_edges.size() == 3);
    CHECK(pc.cut_vertices == std::vector<int>{1, 2});
}

TEST_CASE("induced subgraph keeps ids consistent") {
    Graph g = complete_graph(5);
    auto sub = induced_subgraph(g, {1, 3, 4});
    CHECK(sub.graph.n == 3);
    CHECK(sub.graph.edge_count() == 3);
    for (int e = 0; e < sub.graph.edge_count(); ++e) {
        const auto& le = sub.graph.edges[e];
        const auto& ge = g.edges[sub.edge_to_parent[e]];
        CHECK(make_edge(sub.to_parent[le.u], sub.to_parent[le.v]) == ge);
    }
}

TEST_CASE("graph json round trip") {
    Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    Graph back = graph_from_json(graph_to_json(g));
    CHECK(back.n == g.n);
    CHECK(back.edges == g.edges);
}

TEST_CASE("rng streams are deterministic and splittable") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng parent(7);
    Rng c1 = parent.split(1);
    parent.next_u64();
    Rng c1_again = parent.split(1); // split ignores parent position
    CHECK(c1.next_u64() == c1_again.next_u64());

    // Uniformity smoke check.
    Rng r(3);
    double mean = 0.0;
    const int m = 20000;
    for (int i = 0; i < m; ++i) mean += r.next_double();
    mean /= m;
    CHECK(std::abs(mean - 0.5) < 0.02);

    Rng rn(5);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < m; ++i) {
        double x = rn.next_normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::abs(s / m) < 0.03);
    CHECK(std::abs(s2 / m - 1.0) < 0.05);
}
