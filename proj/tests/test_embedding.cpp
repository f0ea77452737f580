#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/embedding.hpp"
#include "ising/error.hpp"
#include "ising/rng.hpp"

#include <algorithm>
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

Graph k33() {
    Graph g;
    g.n = 6;
    for (int i = 0; i < 3; ++i)
        for (int j = 3; j < 6; ++j) g.edges.push_back({i, j});
    return g;
}

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

/// Random connected planar graph: random tree plus chords accepted only
/// when they keep the graph planar (rejection by re-embedding).
Graph random_planar_graph(int n, int extra_attempts, Rng& rng) {
    Graph g;
    g.n = n;
    for (int v = 1; v < n; ++v)
        g.edges.push_back(make_edge(v, static_cast<int>(rng.next_below(v))));
    for (int t = 0; t < extra_attempts; ++t) {
        int a = static_cast<int>(rng.next_below(n));
        int b = static_cast<int>(rng.next_below(n));
        if (a == b || g.has_edge(a, b)) continue;
        g.edges.push_back(make_edge(a, b));
        if (!is_planar(g)) g.edges.pop_back();
    }
    return g;
}

} // namespace

TEST_CASE("planar_embed on K4 yields 4 faces") {
    auto result = planar_embed(complete_graph(4));
    REQUIRE(result.planar());
    CHECK(result.embedding->faces().size() == 4);
    CHECK(result.embedding->euler_ok());
    CHECK_NOTHROW(result.embedding->validate());
}

TEST_CASE("planar_embed rejects K5 and K33 with a witness") {
    auto r5 = planar_embed(complete_graph(5));
    REQUIRE_FALSE(r5.planar());
    CHECK(r5.witness->kind == NonPlanarWitness::Kind::K5);
    CHECK(r5.witness->subdivision_edges.size() == 10);
    CHECK(r5.witness->branch_vertices.size() == 5);

    auto r33 = planar_embed(k33());
    REQUIRE_FALSE(r33.planar());
    CHECK(r33.witness->kind == NonPlanarWitness::Kind::K33);
    CHECK(r33.witness->subdivision_edges.size() == 9);

    // K33 subdivision: still K33 type.
    Graph sub = k33();
    sub.n = 7;
    sub.edges[0] = make_edge(0, 6);
    sub.edges.push_back(make_edge(6, 3));
    auto rs = planar_embed(sub);
    REQUIRE_FALSE(rs.planar());
    CHECK(rs.witness->kind == NonPlanarWitness::Kind::K33);
}

TEST_CASE("planar_embed handles trees, disconnected graphs, grids") {
    Graph path(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    auto rp = planar_embed(path);
    REQUIRE(rp.planar());
    CHECK(rp.embedding->euler_ok());

    Graph two(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    auto rt = planar_embed(two);
    REQUIRE(rt.planar());
    CHECK(rt.embedding->euler_ok());

    auto rg = planar_embed(grid(5, 5));
    REQUIRE(rg.planar());
    CHECK(rg.embedding->faces().size() == 17); // F = 2 - V + E
}

TEST_CASE("planar_embed accepts random planar graphs") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = random_planar_graph(30, 120, rng);
        auto r = planar_embed(g);
        REQUIRE(r.planar());
        CHECK(r.embedding->euler_ok());
        CHECK_NOTHROW(r.embedding->validate());
    }
}

TEST_CASE("triangulate: K3 unchanged, 4-cycle gains one chord") {
    auto k3 = planar_embed(complete_graph(3));
    auto t3 = triangulate(*k3.embedding);
    CHECK(t3.added_edges.empty());

    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto e4 = planar_embed(c4);
    auto t4 = triangulate(*e4.embedding);
    // The outer face is triangulated like any other, so C4 becomes K4.
    CHECK(t4.added_edges.size() == 2);
    CHECK(t4.embedded.graph.edge_count() == 6);
    auto faces = t4.embedded.faces();
    CHECK(faces.size() == 4);
    for (const auto& f : faces) CHECK(f.size() == 3);
    CHECK_NOTHROW(t4.embedded.validate());

    // Idempotent on a triangulated input.
    auto t4b = triangulate(t4.embedded);
    CHECK(t4b.added_edges.empty());
}

TEST_CASE("triangulate paths and random planar graphs fully") {
    Graph path(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    auto ep = planar_embed(path);
    auto tp = triangulate(*ep.embedding);
    for (const auto& f : tp.embedded.faces()) CHECK(f.size() == 3);
    CHECK_NOTHROW(tp.embedded.validate());

    Rng rng(4242);
    for (int trial = 0; trial < 12; ++trial) {
        Graph g = random_planar_graph(6 + static_cast<int>(rng.next_below(30)), 80, rng);
        auto r = planar_embed(g);
        REQUIRE(r.planar());
        auto t = triangulate(*r.embedding);
        CHECK_NOTHROW(t.embedded.validate());
        for (const auto& f : t.embedded.faces()) CHECK(f.size() == 3);
        // Original edges preserved with their ids.
        for (int e = 0; e < g.edge_count(); ++e)
            CHECK(t.embedded.graph.edges[e] == g.edges[e]);
        CHECK(t.embedded.graph.edge_count() ==
              g.edge_count() + static_cast<int>(t.added_edges.size()));
        Graph simple_check = t.embedded.graph;
        CHECK_NOTHROW(simple_check.validate()); // no multi-edges added
    }

    Graph tiny(2, {{0, 1}});
    auto et = planar_embed(tiny);
    CHECK_THROWS_AS(triangulate(*et.embedding), Error);
}

TEST_CASE("contract_edge keeps a valid planar embedding") {
    // Triangle with a pendant: contracting the pendant edge.
    Graph g(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    auto r = planar_embed(g);
    auto c = contract_edge(*r.embedding, 3);
    CHECK(c.embedded.graph.n == 3);
    CHECK(c.embedded.graph.edge_count() == 3);
    CHECK_NOTHROW(c.embedded.validate());
    CHECK(c.edge_map[3] == -1);

    // Contracting a triangle edge merges the two side edges.
    auto c2 = contract_edge(*r.embedding, 0); // edge {0,1}
    CHECK(c2.embedded.graph.n == 3);
    CHECK(c2.edge_map[1] == c2.edge_map[2]); // {1,2} and {0,2} collapse
    CHECK_NOTHROW(c2.embedded.validate());

    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        Graph rg = random_planar_graph(20, 60, rng);
        auto er = planar_embed(rg);
        REQUIRE(er.planar());
        const int e = static_cast<int>(rng.next_below(rg.edge_count()));
        auto cr = contract_edge(*er.embedding, e);
        CHECK_NOTHROW(cr.embedded.validate());
    }
}

TEST_CASE("restrict_embedding drops vertices cleanly") {
    auto r = planar_embed(grid(4, 4));
    std::vector<bool> keep(16, true);
    keep[5] = keep[6] = keep[10] = false;
    auto sub = restrict_embedding(*r.embedding, keep);
    CHECK(sub.embedded.graph.n == 13);
    CHECK_NOTHROW(sub.embedded.validate());
}

TEST_CASE("add_edge_in_common_face") {
    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto r = planar_embed(c4);
    EmbeddedGraph e = *r.embedding;
    int id = add_edge_in_common_face(e, 0, 2);
    CHECK(id == 4);
    CHECK_NOTHROW(e.validate());
    // 1 and 3 still share the other face.
    int id2 = add_edge_in_common_face(e, 1, 3);
    CHECK(id2 == 5);
    CHECK_NOTHROW(e.validate());
}

TEST_CASE("embedding json round trip") {
    auto r = planar_embed(complete_graph(4));
    auto text = embedding_to_json(*r.embedding);
    auto back = embedding_from_json(text);
    CHECK(back.graph.n == 4);
    CHECK(back.faces().size() == 4);
}
