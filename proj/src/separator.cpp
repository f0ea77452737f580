#include "ising/separator.hpp"

#include "ising/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace ising {

namespace {

double size_bound(int n) { return 2.0 * std::sqrt(2.0) * std::sqrt(static_cast<double>(n)); }

struct Bfs {
    std::vector<int> level;       // -1 if unreached
    std::vector<int> parent;      // parent vertex, -1 at root
    std::vector<int> parent_edge; // edge to parent
    std::vector<std::vector<int>> by_level;
    std::vector<int> order;
};

Bfs bfs_from(const Adjacency& adj, int n, int root) {
    Bfs b;
    b.level.assign(n, -1);
    b.parent.assign(n, -1);
    b.parent_edge.assign(n, -1);
    std::queue<int> q;
    q.push(root);
    b.level[root] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        b.order.push_back(v);
        if (static_cast<int>(b.by_level.size()) <= b.level[v]) b.by_level.emplace_back();
        b.by_level[b.level[v]].push_back(v);
        for (const auto& arc : adj[v]) {
            if (b.level[arc.to] >= 0) continue;
            b.level[arc.to] = b.level[v] + 1;
            b.parent[arc.to] = v;
            b.parent_edge[arc.to] = arc.edge;
            q.push(arc.to);
        }
    }
    return b;
}

/// Greedy largest-first packing of vertex groups into two parts. Safe as
/// long as every group is at most 2/3 of the total.
void pack_two_parts(std::vector<std::vector<int>> groups,
                    std::vector<int>& part1, std::vector<int>& part2) {
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    std::size_t s1 = 0, s2 = 0;
    for (auto& g : groups) {
        auto& target = (s1 <= s2) ? part1 : part2;
        auto& size = (s1 <= s2) ? s1 : s2;
        size += g.size();
        target.insert(target.end(), g.begin(), g.end());
    }
}

struct Candidate {
    bool valid = false;
    std::vector<int> part1, part2, separator;
};

/// Builds a candidate from an explicit separator set: components of the
/// rest are packed greedily; validity means both bounds hold.
Candidate candidate_from_separator(const Graph& g, const std::vector<int>& sep) {
    const int n = g.n;
    std::vector<bool> in_sep(n, false);
    for (int v : sep) in_sep[v] = true;
    Adjacency adj(g);
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> groups;
    for (int s = 0; s < n; ++s) {
        if (in_sep[s] || comp[s] >= 0) continue;
        groups.emplace_back();
        std::queue<int> q;
        q.push(s);
        comp[s] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            groups.back().push_back(v);
            for (const auto& arc : adj[v])
                if (!in_sep[arc.to] && comp[arc.to] < 0) {
                    comp[arc.to] = 1;
                    q.push(arc.to);
                }
        }
    }
    Candidate c;
    c.separator = sep;
    for (const auto& grp : groups)
        if (3 * grp.size() > 2 * static_cast<std::size_t>(n)) return c; // oversized group
    pack_two_parts(std::move(groups), c.part1, c.part2);
    c.valid = 3 * std::max(c.part1.size(), c.part2.size()) <= 2 * static_cast<std::size_t>(n) &&
              static_cast<double>(sep.size()) <= size_bound(n) + 1e-9;
    return c;
}

// ── Fundamental-cycle search ─────────────────────────────────────────

struct CycleCut {
    bool found = false;
    std::vector<int> cycle;    // vertex ids in the searched graph
    std::vector<char> side;    // per vertex: 0 on cycle, 1 inside, 2 outside
};

/// Finds a non-tree edge of the triangulated graph whose fundamental cycle
/// leaves at most 2/3 of the weight strictly on each side. `zero_vertex`
/// (weight 0) must be the tree root, or -1 when all weights are one.
CycleCut fundamental_cycle_cut(const EmbeddedGraph& gt, const Bfs& tree, int zero_vertex) {
    const Graph& g = gt.graph;
    const int n = g.n;
    CycleCut result;

    const double total_weight = n - (zero_vertex >= 0 ? 1 : 0);

    // LCA via binary lifting on the BFS tree.
    int log_n = 1;
    while ((1 << log_n) < n) ++log_n;
    std::vector<std::vector<int>> up(log_n + 1, std::vector<int>(n, -1));
    for (int v = 0; v < n; ++v) up[0][v] = tree.parent[v];
    for (int k = 1; k <= log_n; ++k)
        for (int v = 0; v < n; ++v)
            up[k][v] = up[k - 1][v] < 0 ? -1 : up[k - 1][up[k - 1][v]];
    auto lca = [&](int u, int v) {
        int du = tree.level[u], dv = tree.level[v];
        if (du < dv) {
            std::swap(u, v);
            std::swap(du, dv);
        }
        for (int k = log_n; k >= 0; --k)
            if (du - (1 << k) >= dv) {
                u = up[k][u];
                du -= 1 << k;
            }
        if (u == v) return u;
        for (int k = log_n; k >= 0; --k)
            if (up[k][u] != up[k][v]) {
                u = up[k][u];
                v = up[k][v];
            }
        return tree.parent[u];
    };

    std::vector<bool> is_tree_edge(g.edge_count(), false);
    for (int v = 0; v < n; ++v)
        if (tree.parent_edge[v] >= 0) is_tree_edge[tree.parent_edge[v]] = true;

    // Dual tree on non-tree edges (interdigitating trees).
    const auto faces = gt.faces();
    const int face_count = static_cast<int>(faces.size());
    std::vector<int> face_of_dart(2 * g.edge_count(), -1);
    for (int f = 0; f < face_count; ++f)
        for (int d : faces[f]) face_of_dart[d] = f;

    std::vector<std::vector<std::pair<int, int>>> dual_adj(face_count); // (face, edge)
    for (int e = 0; e < g.edge_count(); ++e) {
        if (is_tree_edge[e]) continue;
        dual_adj[face_of_dart[2 * e]].push_back({face_of_dart[2 * e + 1], e});
        dual_adj[face_of_dart[2 * e + 1]].push_back({face_of_dart[2 * e], e});
    }
    std::vector<int> dparent(face_count, -1), dparent_edge(face_count, -1);
    std::vector<int> tin(face_count, -1), tout(face_count, -1), subtree_faces(face_count, 1);
    {
        std::vector<int> dfs_order;
        std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
        int timer = 0;
        tin[0] = timer++;
        while (!stack.empty()) {
            auto& [f, it] = stack.back();
            if (it < dual_adj[f].size()) {
                auto [to, via] = dual_adj[f][it++];
                if (tin[to] >= 0) continue;
                tin[to] = timer++;
                dparent[to] = f;
                dparent_edge[to] = via;
                stack.push_back({to, 0});
            } else {
                tout[f] = timer;
                dfs_order.push_back(f);
                stack.pop_back();
            }
        }
        for (int f : dfs_order)
            if (dparent[f] >= 0) subtree_faces[dparent[f]] += subtree_faces[f];
    }
    std::vector<int> child_face_of_edge(g.edge_count(), -1);
    for (int f = 0; f < face_count; ++f)
        if (dparent_edge[f] >= 0) child_face_of_edge[dparent_edge[f]] = f;

    // A face incident to the zero-weight vertex, for side classification.
    int zero_face = -1;
    if (zero_vertex >= 0 && !gt.rotation[zero_vertex].empty())
        zero_face = face_of_dart[gt.rotation[zero_vertex][0]];

    int best_edge = -1, best_cycle_size = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (is_tree_edge[e] || child_face_of_edge[e] < 0) continue;
        const int u = g.edges[e].u, v = g.edges[e].v;
        const int l = lca(u, v);
        const int b = tree.level[u] + tree.level[v] - 2 * tree.level[l] + 1;
        const int child = child_face_of_edge[e];
        const int inside_vertices = (subtree_faces[child] - b) / 2 + 1;

        bool zero_on_cycle = false, zero_inside = false;
        if (zero_vertex >= 0) {
            zero_on_cycle = (l == zero_vertex); // zero vertex is the root
            if (!zero_on_cycle && zero_face >= 0)
                zero_inside = tin[zero_face] >= tin[child] && tin[zero_face] < tout[child];
        }
        const double w_cycle = b - (zero_on_cycle ? 1 : 0);
        const double w_in = inside_vertices - (zero_inside ? 1 : 0);
        const double w_out = total_weight - w_in - w_cycle;
        if (w_in < -0.5 || w_out < -0.5) fail(ErrorCode::Internal, "cycle weight bookkeeping");
        if (3.0 * w_in <= 2.0 * total_weight + 1e-9 &&
            3.0 * w_out <= 2.0 * total_weight + 1e-9) {
            const int cycle_size = b - (zero_on_cycle ? 1 : 0);
            if (best_edge < 0 || cycle_size < best_cycle_size) {
                best_edge = e;
                best_cycle_size = cycle_size;
            }
        }
    }
    if (best_edge < 0) return result;

    const int u = g.edges[best_edge].u, v = g.edges[best_edge].v;
    const int l = lca(u, v);
    result.side.assign(n, 2);
    for (int x = u; x != l; x = tree.parent[x]) {
        result.cycle.push_back(x);
        result.side[x] = 0;
    }
    for (int x = v; x != l; x = tree.parent[x]) {
        result.cycle.push_back(x);
        result.side[x] = 0;
    }
    result.cycle.push_back(l);
    result.side[l] = 0;

    const int child = child_face_of_edge[best_edge];
    for (int x = 0; x < n; ++x) {
        if (result.side[x] == 0 || gt.rotation[x].empty()) continue;
        const int f = face_of_dart[gt.rotation[x][0]];
        if (tin[f] >= tin[child] && tin[f] < tout[child]) result.side[x] = 1;
    }
    result.found = true;
    return result;
}

Candidate separation_connected(const EmbeddedGraph& embedding);

/// The guaranteed construction: BFS levels l0/l2 with the middle band
/// contracted onto a super-root, then a fundamental cycle in the band.
Candidate middle_shrink(const EmbeddedGraph& embedding, const Bfs& bfs) {
    const Graph& g = embedding.graph;
    const int n = g.n;
    const int max_level = static_cast<int>(bfs.by_level.size()) - 1;

    std::vector<long long> cum(max_level + 1, 0);
    for (int l = 0; l <= max_level; ++l)
        cum[l] = (l ? cum[l - 1] : 0) + static_cast<long long>(bfs.by_level[l].size());

    int l1 = 0;
    while (2 * cum[l1] <= n) ++l1;
    const double k = static_cast<double>(cum[l1]);

    auto level_size = [&](int l) {
        return (l >= 0 && l <= max_level) ? static_cast<int>(bfs.by_level[l].size()) : 0;
    };

    int l0 = -1;
    for (int l = l1; l >= 0; --l)
        if (level_size(l) + 2.0 * (l1 - l) <= 2.0 * std::sqrt(k) + 1e-9) {
            l0 = l;
            break;
        }
    int l2 = -1;
    for (int l = l1 + 1;; ++l)
        if (level_size(l) + 2.0 * (l - l1 - 1) <= 2.0 * std::sqrt(n - k) + 1e-9) {
            l2 = l;
            break;
        }
    if (l0 < 0) fail(ErrorCode::Internal, "no l0 level");

    std::vector<int> band, d1, d3, sep0;
    for (int l = 0; l <= max_level; ++l)
        for (int v : bfs.by_level[l]) {
            if (l < l0) d1.push_back(v);
            else if (l == l0 || l == l2) sep0.push_back(v);
            else if (l < l2) band.push_back(v);
            else if (l > l2) d3.push_back(v);
        }

    const std::size_t limit = 2 * static_cast<std::size_t>(n);
    if (3 * std::max({d1.size(), band.size(), d3.size()}) <= limit) {
        Candidate c;
        c.separator = sep0;
        pack_two_parts({d1, band, d3}, c.part1, c.part2);
        c.valid = 3 * std::max(c.part1.size(), c.part2.size()) <= limit &&
                  static_cast<double>(sep0.size()) <= size_bound(n) + 1e-9;
        if (c.valid) return c;
    }

    // Band too heavy: contract levels <= l0 to a root and cut with a cycle.
    std::vector<bool> keep(n, false);
    for (int l = 0; l < l2 && l <= max_level; ++l)
        for (int v : bfs.by_level[l]) keep[v] = true;
    auto restricted = restrict_embedding(embedding, keep);

    std::vector<int> contract_ids;
    for (int l = 0; l <= l0; ++l)
        for (int v : bfs.by_level[l]) contract_ids.push_back(restricted.vertex_map[v]);
    auto shrunk = contract_set(restricted.embedded, contract_ids);

    // Original vertex behind each shrunk vertex (super-root: -1).
    std::vector<int> origin(shrunk.embedded.graph.n, -1);
    const int super_root = shrunk.vertex_map[contract_ids[0]];
    for (int v = 0; v < n; ++v) {
        if (!keep[v] || bfs.level[v] <= l0) continue;
        origin[shrunk.vertex_map[restricted.vertex_map[v]]] = v;
    }

    auto gt = triangulate(shrunk.embedded);
    const Bfs tree = bfs_from(Adjacency(shrunk.embedded.graph), shrunk.embedded.graph.n,
                              super_root);
    auto cut = fundamental_cycle_cut(gt.embedded, tree, super_root);
    if (!cut.found) fail(ErrorCode::Internal, "band admits no balanced cycle");

    std::vector<int> inside, outside;
    for (int v = 0; v < shrunk.embedded.graph.n; ++v) {
        if (origin[v] < 0) continue; // super-root
        if (cut.side[v] == 0) sep0.push_back(origin[v]);
        else if (cut.side[v] == 1) inside.push_back(origin[v]);
        else outside.push_back(origin[v]);
    }

    Candidate c;
    c.separator = sep0;
    auto& heavy = (inside.size() >= outside.size()) ? inside : outside;
    auto& light = (inside.size() >= outside.size()) ? outside : inside;
    c.part1 = heavy;
    c.part2 = light;
    c.part2.insert(c.part2.end(), d1.begin(), d1.end());
    c.part2.insert(c.part2.end(), d3.begin(), d3.end());
    if (c.part1.size() < c.part2.size()) std::swap(c.part1, c.part2);
    c.valid = 3 * std::max(c.part1.size(), c.part2.size()) <= limit &&
              static_cast<double>(c.separator.size()) <= size_bound(n) + 1e-9;
    return c;
}

Candidate separation_connected(const EmbeddedGraph& embedding) {
    const Graph& g = embedding.graph;
    const int n = g.n;
    const Adjacency adj(g);

    if (n <= 8) {
        // Exhaustive small case: smallest separator first.
        std::vector<int> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        for (int size = 0; size <= n; ++size) {
            std::vector<int> pick;
            auto attempt = [&](auto&& self, int start) -> Candidate {
                if (static_cast<int>(pick.size()) == size) {
                    auto c = candidate_from_separator(g, pick);
                    return c;
                }
                for (int v = start; v < n; ++v) {
                    pick.push_back(v);
                    auto c = self(self, v + 1);
                    if (c.valid) return c;
                    pick.pop_back();
                }
                return {};
            };
            auto c = attempt(attempt, 0);
            if (c.valid) return c;
        }
        fail(ErrorCode::Internal, "no small separation found");
    }

    Candidate best;
    auto consider = [&](const Candidate& c) {
        if (!c.valid) return;
        if (!best.valid || c.separator.size() < best.separator.size()) best = c;
    };

    // BFS-level candidates from a few roots.
    const Bfs b0 = bfs_from(adj, n, 0);
    std::vector<int> roots{0};
    if (!b0.order.empty() && b0.order.back() != 0) roots.push_back(b0.order.back());
    for (int root : roots) {
        const Bfs b = bfs_from(adj, n, root);
        long long below = 0;
        for (const auto& lvl : b.by_level) {
            const long long above = n - below - static_cast<long long>(lvl.size());
            if (3 * below <= 2LL * n && 3 * above <= 2LL * n &&
                static_cast<double>(lvl.size()) <= size_bound(n) + 1e-9)
                consider(candidate_from_separator(g, lvl));
            below += static_cast<long long>(lvl.size());
        }
    }

    // Fundamental cycle over the whole (triangulated) graph.
    if (!best.valid) {
        auto gt = triangulate(embedding);
        auto cut = fundamental_cycle_cut(gt.embedded, b0, -1);
        if (cut.found && static_cast<double>(cut.cycle.size()) <= size_bound(n) + 1e-9)
            consider(candidate_from_separator(g, cut.cycle));
    }

    // Guaranteed fallback.
    if (!best.valid) {
        auto c = middle_shrink(embedding, b0);
        if (!c.valid) fail(ErrorCode::Internal, "middle-shrink separation out of bounds");
        best = c;
    }
    return best;
}

} // namespace

Separation planar_separation(const EmbeddedGraph& embedding) {
    const Graph& g = embedding.graph;
    const int n = g.n;
    Separation out;
    if (n == 0) return out;

    const auto comps = connected_components(g);
    std::size_t largest = 0, largest_idx = 0;
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (comps[i].size() > largest) {
            largest = comps[i].size();
            largest_idx = i;
        }

    if (3 * largest <= 2 * static_cast<std::size_t>(n)) {
        std::vector<std::vector<int>> groups(comps.begin(), comps.end());
        pack_two_parts(std::move(groups), out.part1, out.part2);
        return out;
    }
    if (comps.size() == 1) {
        Candidate c = separation_connected(embedding);
        out.part1 = std::move(c.part1);
        out.part2 = std::move(c.part2);
        out.separator = std::move(c.separator);
        return out;
    }

    // Separate the big component; pack the others around it.
    std::vector<bool> keep(n, false);
    for (int v : comps[largest_idx]) keep[v] = true;
    auto sub = restrict_embedding(embedding, keep);
    Candidate c = separation_connected(sub.embedded);
    std::vector<std::vector<int>> groups;
    std::vector<int> back(sub.embedded.graph.n);
    for (int v = 0; v < n; ++v)
        if (keep[v]) back[sub.vertex_map[v]] = v;
    auto lift_ids = [&](std::vector<int>& ids) {
        for (int& v : ids) v = back[v];
    };
    lift_ids(c.part1);
    lift_ids(c.part2);
    lift_ids(c.separator);
    groups.push_back(std::move(c.part1));
    groups.push_back(std::move(c.part2));
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (i != largest_idx) groups.push_back(comps[i]);
    out.separator = std::move(c.separator);
    pack_two_parts(std::move(groups), out.part1, out.part2);
    return out;
}

std::vector<int> nested_dissection_order(const EmbeddedGraph& embedding,
                                         const std::vector<int>& forced_last,
                                         SeparatorTree* tree) {
    std::vector<int> order;
    order.reserve(embedding.graph.n);

    auto recurse = [&](auto&& self, const EmbeddedGraph& emb,
                       const std::vector<int>& labels) -> void {
        const int n = emb.graph.n;
        if (n == 0) return;
        if (n <= 24) {
            for (int v = 0; v < n; ++v) order.push_back(labels[v]);
            return;
        }
        Separation sep = planar_separation(emb);
        if (tree != nullptr && !sep.separator.empty()) {
            SeparatorTree::Node node;
            node.subgraph_size = n;
            for (int v : sep.part1) node.part1.push_back(labels[v]);
            for (int v : sep.part2) node.part2.push_back(labels[v]);
            for (int v : sep.separator) node.separator.push_back(labels[v]);
            tree->nodes.push_back(std::move(node));
        }
        for (const auto* part : {&sep.part1, &sep.part2}) {
            if (part->empty()) continue;
            std::vector<bool> keep(n, false);
            for (int v : *part) keep[v] = true;
            auto sub = restrict_embedding(emb, keep);
            std::vector<int> sub_labels(sub.embedded.graph.n);
            for (int v = 0; v < n; ++v)
                if (keep[v]) sub_labels[sub.vertex_map[v]] = labels[v];
            self(self, sub.embedded, sub_labels);
        }
        for (int v : sep.separator) order.push_back(labels[v]);
    };

    const int n = embedding.graph.n;
    std::vector<int> identity(n);
    std::iota(identity.begin(), identity.end(), 0);

    if (forced_last.empty()) {
        recurse(recurse, embedding, identity);
        return order;
    }
    std::vector<bool> keep(n, true);
    for (int v : forced_last) keep[v] = false;
    auto sub = restrict_embedding(embedding, keep);
    std::vector<int> labels(sub.embedded.graph.n);
    for (int v = 0; v < n; ++v)
        if (keep[v]) labels[sub.vertex_map[v]] = v;
    recurse(recurse, sub.embedded, labels);
    for (int v : forced_last) order.push_back(v);
    return order;
}

} // namespace ising
