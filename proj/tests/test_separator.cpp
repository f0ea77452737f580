#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/separator.hpp"
#include "ising/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace ising;

namespace {

Graph grid(int h, int w) {
    Graph g;
    g.n = h * w;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (c + 1 < w) g.edges.push_back(make_edge(r * w + c, r * w + c + 1));
            if (r + 1 < h) g.edges.push_back(make_edge(r * w + c, (r + 1) * w + c));
        }
    return g;
}

/// Random tree, embedded, then fully triangulated: small diameter, the
/// adversarial case for level separators.
EmbeddedGraph triangulated_random_tree(int n, Rng& rng) {
    Graph g;
    g.n = n;
    for (int v = 1; v < n; ++v)
        g.edges.push_back(make_edge(v, static_cast<int>(rng.next_below(v))));
    auto r = planar_embed(g);
    REQUIRE(r.planar());
    return triangulate(*r.embedding).embedded;
}

void check_separation(const EmbeddedGraph& e, const Separation& s) {
    const int n = e.graph.n;
    // Partition of the vertex set.
    std::set<int> seen;
    for (int v : s.part1) CHECK(seen.insert(v).second);
    for (int v : s.part2) CHECK(seen.insert(v).second);
    for (int v : s.separator) CHECK(seen.insert(v).second);
    CHECK(static_cast<int>(seen.size()) == n);
    // No edges between the parts.
    std::vector<int> side(n, 0);
    for (int v : s.part1) side[v] = 1;
    for (int v : s.part2) side[v] = 2;
    for (const auto& ed : e.graph.edges)
        CHECK(side[ed.u] * side[ed.v] != 2);
    // Balance and size bounds.
    CHECK(3 * std::max(s.part1.size(), s.part2.size()) <= 2 * static_cast<std::size_t>(n));
    CHECK(static_cast<double>(s.separator.size()) <=
          2.0 * std::sqrt(2.0) * std::sqrt(static_cast<double>(n)) + 1e-9);
}

} // namespace

TEST_CASE("grid separations satisfy the sqrt bound") {
    for (int side : {5, 9, 14, 20}) {
        auto r = planar_embed(grid(side, side));
        REQUIRE(r.planar());
        auto s = planar_separation(*r.embedding);
        check_separation(*r.embedding, s);
        // Grid-like case: a single level already achieves O(side).
        CHECK(static_cast<int>(s.separator.size()) <= 2 * side);
    }
}

TEST_CASE("separations of triangulated random trees (small diameter)") {
    Rng rng(31337);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 30 + static_cast<int>(rng.next_below(400));
        auto e = triangulated_random_tree(n, rng);
        auto s = planar_separation(e);
        check_separation(e, s);
    }
}

TEST_CASE("separation of stars, paths, and tiny graphs") {
    // Star: hub + n-1 leaves.
    Graph star;
    star.n = 40;
    for (int v = 1; v < 40; ++v) star.edges.push_back(make_edge(0, v));
    auto rs = planar_embed(star);
    auto ss = planar_separation(*rs.embedding);
    check_separation(*rs.embedding, ss);

    Graph path(50, {});
    for (int v = 0; v + 1 < 50; ++v) path.edges.push_back(make_edge(v, v + 1));
    auto rp = planar_embed(path);
    check_separation(*rp.embedding, planar_separation(*rp.embedding));

    for (int n = 1; n <= 6; ++n) {
        Graph k;
        k.n = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n && n <= 4; ++j) k.edges.push_back(make_edge(i, j));
        auto r = planar_embed(k);
        check_separation(*r.embedding, planar_separation(*r.embedding));
    }
}

TEST_CASE("separation of disconnected graphs") {
    Graph g(12, {{0, 1}, {1, 2}, {3, 4}, {5, 6}, {6, 7}, {7, 5}});
    auto r = planar_embed(g);
    auto s = planar_separation(*r.embedding);
    check_separation(*r.embedding, s);
    CHECK(s.separator.empty()); // components pack without cutting
}

TEST_CASE("nested dissection order is a permutation; tree nodes in bounds") {
    Rng rng(99);
    auto e = triangulated_random_tree(300, rng);
    SeparatorTree tree;
    auto order = nested_dissection_order(e, {}, &tree);
    CHECK(static_cast<int>(order.size()) == e.graph.n);
    std::set<int> uniq(order.begin(), order.end());
    CHECK(static_cast<int>(uniq.size()) == e.graph.n);
    CHECK_FALSE(tree.nodes.empty());
    for (const auto& node : tree.nodes) {
        CHECK(3 * std::max(node.part1.size(), node.part2.size()) <=
              2 * static_cast<std::size_t>(node.subgraph_size));
        CHECK(static_cast<double>(node.separator.size()) <=
              2.0 * std::sqrt(2.0) * std::sqrt(static_cast<double>(node.subgraph_size)) + 1e-9);
    }
}

TEST_CASE("nested dissection respects forced-last vertices") {
    auto r = planar_embed(grid(8, 8));
    std::vector<int> forced{10, 20, 30};
    auto order = nested_dissection_order(*r.embedding, forced);
    CHECK(static_cast<int>(order.size()) == 64);
    CHECK(order[63] == 30);
    CHECK(order[62] == 20);
    CHECK(order[61] == 10);
}
