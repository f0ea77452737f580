#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/error.hpp"
#include "ising/matching.hpp"
#include "ising/rng.hpp"

#include <functional>

using namespace ising;

namespace {

int brute_max_matching(const Graph& g) {
    // Exponential reference: best matching size by edge subsets via recursion.
    int best = 0;
    std::vector<bool> used(g.n, false);
    std::function<void(int, int)> go = [&](int e, int size) {
        best = std::max(best, size);
        if (e >= g.edge_count()) return;
        go(e + 1, size);
        if (!used[g.edges[e].u] && !used[g.edges[e].v]) {
            used[g.edges[e].u] = used[g.edges[e].v] = true;
            go(e + 1, size + 1);
            used[g.edges[e].u] = used[g.edges[e].v] = false;
        }
    };
    go(0, 0);
    return best;
}

int matched_count(const std::vector<int>& match) {
    int c = 0;
    for (int v : match)
        if (v >= 0) ++c;
    return c / 2;
}

} // namespace

TEST_CASE("matching on odd cycles needs blossoms") {
    Graph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    CHECK(matched_count(maximum_matching(c5)) == 2);

    // Two triangles joined by an edge: a perfect matching exists.
    Graph gg(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
    auto pm = perfect_matching_edges(gg);
    CHECK(pm.size() == 3);
}

TEST_CASE("matching matches the brute force reference on random graphs") {
    Rng rng(555);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_below(7));
        Graph g;
        g.n = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.next_double() < 0.4) g.edges.push_back(make_edge(i, j));
        CHECK(matched_count(maximum_matching(g)) == brute_max_matching(g));
    }
}

TEST_CASE("seeded matching repairs to perfect") {
    // 8-cycle with the partial matching {0-1, 4-5}: repairable to perfect.
    Graph c8(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}});
    std::vector<int> seed(8, -1);
    seed[0] = 1;
    seed[1] = 0;
    seed[4] = 5;
    seed[5] = 4;
    auto pm = perfect_matching_edges(c8, seed);
    CHECK(pm.size() == 4);
    // The seed pairs must survive (they are never unmatched by augmenting).
    bool has01 = false;
    for (int e : pm) has01 |= (c8.edges[e].u == 0 && c8.edges[e].v == 1);
    CHECK(has01);
}

TEST_CASE("no perfect matching is reported") {
    Graph odd(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_AS(perfect_matching_edges(odd), Error);

    Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK_THROWS_AS(perfect_matching_edges(star), Error);
}
