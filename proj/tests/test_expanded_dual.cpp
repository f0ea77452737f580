#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/error.hpp"
#include "ising/expanded_dual.hpp"
#include "ising/oracle.hpp"
#include "ising/rng.hpp"

#include <set>

using namespace ising;

namespace {

Graph complete_graph(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
    return g;
}

ExpandedDual dual_of(const Graph& g) {
    auto r = planar_embed(g);
    REQUIRE(r.planar());
    auto t = triangulate(*r.embedding);
    return expanded_dual(t.embedded);
}

void check_invariants(const ExpandedDual& d) {
    CHECK_NOTHROW(d.star.validate());
    // Every vertex of G* has degree exactly 3.
    Adjacency adj(d.star.graph);
    for (int v = 0; v < d.star.graph.n; ++v) CHECK(adj.degree(v) == 3);
    // |V(G*)| = 2 |E*_I|.
    CHECK(d.star.graph.n == 2 * d.primal_edge_count);
    // E*_I is a perfect matching of G*.
    std::set<int> covered;
    for (int e = 0; e < d.primal_edge_count; ++e) {
        auto [a, b] = d.intercity_endpoints(e);
        CHECK(covered.insert(a).second);
        CHECK(covered.insert(b).second);
    }
    CHECK(static_cast<int>(covered.size()) == d.star.graph.n);
    // Each city triangle vertex is incident to exactly one intercity edge
    // (degree 3 = 1 intercity + 2 city edges), and every G* face is either
    // a city triangle or alternates city/intercity edges around a primal
    // vertex, meeting one city per incident face.
    for (const auto& face : d.star.faces()) {
        int inter = 0;
        for (int dart : face) inter += d.is_intercity(dart >> 1) ? 1 : 0;
        if (face.size() == 3 && inter == 0) continue; // Fisher city
        CHECK(face.size() % 2 == 0);
        CHECK(inter == static_cast<int>(face.size()) / 2);
    }
}

} // namespace

TEST_CASE("expanded dual of K3 is the triangular prism") {
    auto d = dual_of(complete_graph(3));
    CHECK(d.star.graph.n == 6);
    CHECK(d.star.graph.edge_count() == 9);
    CHECK(d.primal_edge_count == 3);
    CHECK(d.star.faces().size() == 5);
    check_invariants(d);
}

TEST_CASE("expanded dual of K4 has 12 vertices") {
    auto d = dual_of(complete_graph(4));
    CHECK(d.star.graph.n == 12);
    check_invariants(d);
}

TEST_CASE("expanded dual invariants on random planar graphs") {
    Rng rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        Graph g;
        const int n = 5 + static_cast<int>(rng.next_below(25));
        g.n = n;
        for (int v = 1; v < n; ++v)
            g.edges.push_back(make_edge(v, static_cast<int>(rng.next_below(v))));
        for (int t = 0; t < 60; ++t) {
            int a = static_cast<int>(rng.next_below(n));
            int b = static_cast<int>(rng.next_below(n));
            if (a == b || g.has_edge(a, b)) continue;
            g.edges.push_back(make_edge(a, b));
            if (!is_planar(g)) g.edges.pop_back();
        }
        auto d = dual_of(g);
        check_invariants(d);
        // g map is a bijection onto primal edges (identity on indices).
        const auto t = triangulate(*planar_embed(g).embedding);
        CHECK(d.primal_edge_count == t.embedded.graph.edge_count());
    }
}

TEST_CASE("expanded dual rejects non-triangulated input") {
    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto r = planar_embed(c4);
    CHECK_THROWS_AS(expanded_dual(*r.embedding), Error);
}

TEST_CASE("PM count of the K3 expanded dual") {
    // Spin configurations of K3 up to global flip: 4; PMs of G* must also be 4.
    auto d = dual_of(complete_graph(3));
    std::vector<double> unit(d.star.graph.edge_count(), 1.0);
    auto pms = oracle::enumerate_pms(d.star.graph, unit);
    CHECK(pms.matchings.size() == 4);
}
