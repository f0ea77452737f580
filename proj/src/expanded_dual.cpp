#include "ising/expanded_dual.hpp"

#include "ising/error.hpp"

namespace ising {

ExpandedDual expanded_dual(const EmbeddedGraph& embedding) {
    const Graph& g = embedding.graph;
    const auto faces = embedding.faces();
    for (const auto& f : faces)
        if (f.size() != 3)
            fail(ErrorCode::InvalidInput, "expanded dual requires a triangulated embedding");

    ExpandedDual out;
    out.primal_edge_count = g.edge_count();
    out.primal_vertex_count = g.n;

    Graph star;
    star.n = 2 * g.edge_count(); // one city vertex per dart
    for (int e = 0; e < g.edge_count(); ++e)
        star.edges.push_back(make_edge(2 * e, 2 * e + 1)); // intercity

    // City triangles plus, per dart, its (prev, next) city neighbours.
    const int dart_count = 2 * g.edge_count();
    std::vector<int> next_city(dart_count, -1), prev_city(dart_count, -1);
    std::vector<int> edge_to_next(dart_count, -1), edge_to_prev(dart_count, -1);
    for (const auto& f : faces) {
        for (int k = 0; k < 3; ++k) {
            const int d = f[k], dn = f[(k + 1) % 3];
            next_city[d] = dn;
            prev_city[dn] = d;
            edge_to_next[d] = star.edge_count();
            edge_to_prev[dn] = star.edge_count();
            star.edges.push_back(make_edge(d, dn));
        }
    }

    out.star.graph = std::move(star);
    out.star.rotation.assign(dart_count, {});
    for (int d = 0; d < dart_count; ++d) {
        const int inter = d >> 1; // intercity edge id = primal edge id
        auto dart_of = [&](int e, int tail) {
            return out.star.graph.edges[e].u == tail ? 2 * e : 2 * e + 1;
        };
        out.star.rotation[d] = {dart_of(inter, d), dart_of(edge_to_next[d], d),
                                dart_of(edge_to_prev[d], d)};
    }
    if (!out.star.euler_ok())
        fail(ErrorCode::Internal, "expanded dual rotation is not planar");
    return out;
}

} // namespace ising
