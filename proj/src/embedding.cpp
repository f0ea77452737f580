#include "ising/embedding.hpp"

#include "ising/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stack>

namespace ising {

namespace {

/// pos[d] = index of dart d within rotation[tail(d)].
std::vector<int> dart_positions(const EmbeddedGraph& e) {
    std::vector<int> pos(2 * e.graph.edge_count(), -1);
    for (int v = 0; v < e.graph.n; ++v)
        for (int i = 0; i < static_cast<int>(e.rotation[v].size()); ++i)
            pos[e.rotation[v][i]] = i;
    return pos;
}

/// Builds per-vertex rotations from a complete face set, using
/// sigma(x) = phi(twin(x)).
std::vector<std::vector<int>> rotations_from_faces(
    int n, const std::vector<Edge>& edges,
    const std::vector<std::vector<int>>& faces) {
    const int dart_count = 2 * static_cast<int>(edges.size());
    std::vector<int> phi(dart_count, -1);
    for (const auto& face : faces) {
        for (std::size_t i = 0; i < face.size(); ++i) {
            int d = face[i];
            int nd = face[(i + 1) % face.size()];
            if (phi[d] != -1) fail(ErrorCode::Internal, "dart in two faces");
            phi[d] = nd;
        }
    }
    std::vector<std::vector<int>> rotation(n);
    std::vector<bool> placed(dart_count, false);
    auto tail = [&](int d) {
        const Edge& e = edges[d >> 1];
        return (d & 1) ? e.v : e.u;
    };
    for (int d0 = 0; d0 < dart_count; ++d0) {
        if (placed[d0] || phi[d0] == -1) continue;
        int v = tail(d0);
        int d = d0;
        while (!placed[d]) {
            placed[d] = true;
            rotation[v].push_back(d);
            d = phi[d ^ 1]; // sigma
            if (tail(d) != v) fail(ErrorCode::Internal, "broken rotation orbit");
        }
    }
    return rotation;
}

// ── Demoucron face-by-face insertion on one biconnected block ────────

struct Bridge {
    std::vector<int> edges;       // non-embedded edge ids
    std::vector<int> attachments; // embedded vertices touched
    std::vector<int> interior;    // non-embedded vertices
};

/// Embeds a biconnected simple graph (>= 3 vertices); returns its faces
/// as dart lists, or nullopt when nonplanar.
std::optional<std::vector<std::vector<int>>> demoucron_block(const Graph& g) {
    const Adjacency adj(g);
    const int n = g.n;
    const int m = g.edge_count();

    // Initial cycle by DFS.
    std::vector<int> parent_vertex(n, -1), parent_edge(n, -1), state(n, 0);
    std::vector<int> cycle_vertices;
    {
        std::stack<std::pair<int, std::size_t>> st;
        st.push({0, 0});
        state[0] = 1;
        int cycle_from = -1, cycle_to = -1, cycle_edge = -1;
        while (!st.empty() && cycle_from < 0) {
            auto& [v, it] = st.top();
            if (it >= adj[v].size()) {
                state[v] = 2;
                st.pop();
                continue;
            }
            const auto arc = adj[v][it++];
            if (arc.edge == parent_edge[v]) continue;
            if (state[arc.to] == 0) {
                state[arc.to] = 1;
                parent_vertex[arc.to] = v;
                parent_edge[arc.to] = arc.edge;
                st.push({arc.to, 0});
            } else if (state[arc.to] == 1) {
                cycle_from = v;
                cycle_to = arc.to;
                cycle_edge = arc.edge;
            }
        }
        if (cycle_from < 0) fail(ErrorCode::Internal, "biconnected block has no cycle");
        for (int v = cycle_from; v != cycle_to; v = parent_vertex[v])
            cycle_vertices.push_back(v);
        cycle_vertices.push_back(cycle_to);
        std::reverse(cycle_vertices.begin(), cycle_vertices.end()); // to..from
        (void)cycle_edge;
    }

    std::vector<bool> edge_embedded(m, false), vertex_embedded(n, false);
    auto edge_between = [&](int a, int b) {
        for (const auto& arc : adj[a])
            if (arc.to == b) return arc.edge;
        return -1;
    };
    auto dart_from_to = [&](int a, int b) {
        int e = edge_between(a, b);
        return g.edges[e].u == a ? 2 * e : 2 * e + 1;
    };

    std::vector<std::vector<int>> faces;
    {
        std::vector<int> fwd, bwd;
        const int k = static_cast<int>(cycle_vertices.size());
        for (int i = 0; i < k; ++i) {
            int a = cycle_vertices[i], b = cycle_vertices[(i + 1) % k];
            fwd.push_back(dart_from_to(a, b));
            bwd.push_back(dart_from_to(b, a));
            edge_embedded[edge_between(a, b)] = true;
            vertex_embedded[a] = true;
        }
        std::reverse(bwd.begin(), bwd.end());
        faces.push_back(std::move(fwd));
        faces.push_back(std::move(bwd));
    }
    int embedded_count = static_cast<int>(cycle_vertices.size());

    while (embedded_count < m) {
        // Bridges relative to the embedded subgraph.
        std::vector<Bridge> bridges;
        std::vector<int> comp(n, -1);
        for (int s = 0; s < n; ++s) {
            if (vertex_embedded[s] || comp[s] >= 0) continue;
            const int id = static_cast<int>(bridges.size());
            bridges.emplace_back();
            std::queue<int> q;
            q.push(s);
            comp[s] = id;
            std::set<int> att, edges_seen;
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                bridges[id].interior.push_back(v);
                for (const auto& arc : adj[v]) {
                    edges_seen.insert(arc.edge);
                    if (vertex_embedded[arc.to]) {
                        att.insert(arc.to);
                    } else if (comp[arc.to] < 0) {
                        comp[arc.to] = id;
                        q.push(arc.to);
                    }
                }
            }
            bridges[id].edges.assign(edges_seen.begin(), edges_seen.end());
            bridges[id].attachments.assign(att.begin(), att.end());
        }
        for (int e = 0; e < m; ++e) {
            if (edge_embedded[e]) continue;
            int a = g.edges[e].u, b = g.edges[e].v;
            if (vertex_embedded[a] && vertex_embedded[b])
                bridges.push_back({{e}, {std::min(a, b), std::max(a, b)}, {}});
        }

        // Admissible faces per bridge; pick the most constrained bridge.
        std::vector<std::set<int>> face_vertices(faces.size());
        for (std::size_t f = 0; f < faces.size(); ++f)
            for (int d : faces[f])
                face_vertices[f].insert((d & 1) ? g.edges[d >> 1].v : g.edges[d >> 1].u);

        int best_bridge = -1, best_face = -1, best_count = -1;
        for (std::size_t bi = 0; bi < bridges.size(); ++bi) {
            int count = 0, first_face = -1;
            for (std::size_t f = 0; f < faces.size(); ++f) {
                bool ok = true;
                for (int a : bridges[bi].attachments)
                    if (!face_vertices[f].count(a)) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    ++count;
                    if (first_face < 0) first_face = static_cast<int>(f);
                }
            }
            if (count == 0) return std::nullopt; // stuck: nonplanar
            if (best_count < 0 || count < best_count) {
                best_count = count;
                best_bridge = static_cast<int>(bi);
                best_face = first_face;
            }
        }

        // Path through the chosen bridge between two attachment vertices.
        const Bridge& bridge = bridges[best_bridge];
        std::vector<int> path_vertices, path_edges;
        if (bridge.interior.empty()) {
            path_vertices = {g.edges[bridge.edges[0]].u, g.edges[bridge.edges[0]].v};
            path_edges = {bridge.edges[0]};
        } else {
            if (bridge.attachments.size() < 2)
                fail(ErrorCode::Internal, "bridge of a biconnected block with < 2 attachments");
            const int a = bridge.attachments[0], b = bridge.attachments[1];
            std::set<int> allowed_edges(bridge.edges.begin(), bridge.edges.end());
            std::vector<int> prev_v(n, -1), prev_e(n, -1);
            std::queue<int> q;
            q.push(a);
            prev_v[a] = a;
            while (!q.empty() && prev_v[b] < 0) {
                int v = q.front();
                q.pop();
                for (const auto& arc : adj[v]) {
                    if (!allowed_edges.count(arc.edge)) continue;
                    if (vertex_embedded[arc.to] && arc.to != b) continue;
                    if (v != a && vertex_embedded[v]) continue;
                    if (prev_v[arc.to] >= 0) continue;
                    prev_v[arc.to] = v;
                    prev_e[arc.to] = arc.edge;
                    q.push(arc.to);
                }
            }
            if (prev_v[b] < 0) fail(ErrorCode::Internal, "no path through bridge");
            for (int v = b; v != a; v = prev_v[v]) {
                path_vertices.push_back(v);
                path_edges.push_back(prev_e[v]);
            }
            path_vertices.push_back(a);
            std::reverse(path_vertices.begin(), path_vertices.end());
            std::reverse(path_edges.begin(), path_edges.end());
        }

        for (int e : path_edges) {
            edge_embedded[e] = true;
            ++embedded_count;
        }
        for (int v : path_vertices) vertex_embedded[v] = true;

        // Split the host face along the path.
        const int pa = path_vertices.front(), pb = path_vertices.back();
        std::vector<int>& host = faces[best_face];
        int pos_a = -1, pos_b = -1;
        for (std::size_t i = 0; i < host.size(); ++i) {
            int tail = (host[i] & 1) ? g.edges[host[i] >> 1].v : g.edges[host[i] >> 1].u;
            if (tail == pa && pos_a < 0) pos_a = static_cast<int>(i);
            if (tail == pb && pos_b < 0) pos_b = static_cast<int>(i);
        }
        if (pos_a < 0 || pos_b < 0) fail(ErrorCode::Internal, "attachment not on chosen face");

        std::vector<int> fwd, bwd;
        for (std::size_t i = 0; i + 1 < path_vertices.size(); ++i)
            fwd.push_back(dart_from_to(path_vertices[i], path_vertices[i + 1]));
        for (std::size_t i = path_vertices.size() - 1; i > 0; --i)
            bwd.push_back(dart_from_to(path_vertices[i], path_vertices[i - 1]));

        const std::vector<int> old = host;
        const int len = static_cast<int>(old.size());
        std::vector<int> face1 = fwd; // pa .. pb, then old darts pb .. pa
        for (int i = pos_b; i != pos_a; i = (i + 1) % len) face1.push_back(old[i]);
        std::vector<int> face2 = bwd; // pb .. pa, then old darts pa .. pb
        for (int i = pos_a; i != pos_b; i = (i + 1) % len) face2.push_back(old[i]);
        faces[best_face] = std::move(face1);
        faces.push_back(std::move(face2));
    }
    return faces;
}

bool embed_attempt(const Graph& g, EmbeddedGraph* out);

/// Edge-minimal nonplanar subgraph by greedy deletion; the remainder is a
/// Kuratowski subdivision.
NonPlanarWitness extract_kuratowski(const Graph& g) {
    std::vector<Edge> edges = g.edges;
    std::size_t i = 0;
    while (i < edges.size()) {
        std::vector<Edge> trial = edges;
        trial.erase(trial.begin() + i);
        if (!embed_attempt(Graph(g.n, trial), nullptr))
            edges = std::move(trial); // still nonplanar without this edge
        else
            ++i;
    }
    NonPlanarWitness w;
    w.subdivision_edges = edges;
    std::vector<int> degree(g.n, 0);
    for (const auto& e : edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    int deg3 = 0, deg4 = 0;
    for (int v = 0; v < g.n; ++v) {
        if (degree[v] >= 3) w.branch_vertices.push_back(v);
        if (degree[v] == 3) ++deg3;
        if (degree[v] == 4) ++deg4;
    }
    w.kind = (deg4 == 5) ? NonPlanarWitness::Kind::K5 : NonPlanarWitness::Kind::K33;
    return w;
}

bool embed_attempt(const Graph& g, EmbeddedGraph* out) {
    if (g.n >= 3 && g.edge_count() > 3 * g.n - 6) return false;

    std::vector<std::vector<int>> rotation(g.n);
    const BlockCut blocks = biconnected_components(g);
    for (const auto& block_edge_ids : blocks.block_edges) {
        if (block_edge_ids.size() == 1) {
            const int e = block_edge_ids[0];
            rotation[g.edges[e].u].push_back(2 * e);
            rotation[g.edges[e].v].push_back(2 * e + 1);
            continue;
        }
        // Local block graph; remember orientation of each local edge.
        std::vector<int> verts;
        for (int e : block_edge_ids) {
            verts.push_back(g.edges[e].u);
            verts.push_back(g.edges[e].v);
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        std::vector<int> local_of(g.n, -1);
        for (std::size_t i = 0; i < verts.size(); ++i) local_of[verts[i]] = static_cast<int>(i);

        Graph local;
        local.n = static_cast<int>(verts.size());
        std::vector<int> global_edge;
        std::vector<bool> swapped;
        for (int e : block_edge_ids) {
            int lu = local_of[g.edges[e].u], lv = local_of[g.edges[e].v];
            local.edges.push_back(make_edge(lu, lv));
            global_edge.push_back(e);
            swapped.push_back(local.edges.back().u != lu);
        }

        auto faces = demoucron_block(local);
        if (!faces) return false;
        if (out == nullptr) continue;

        auto local_rot = rotations_from_faces(local.n, local.edges, *faces);
        for (int lv = 0; lv < local.n; ++lv) {
            for (int d : local_rot[lv]) {
                const int le = d >> 1;
                const int bit = (d & 1) ^ (swapped[le] ? 1 : 0);
                rotation[verts[lv]].push_back(2 * global_edge[le] + bit);
            }
        }
    }
    if (out != nullptr) {
        out->graph = g;
        out->rotation = std::move(rotation);
        if (!out->euler_ok()) fail(ErrorCode::Internal, "embedding failed Euler check");
    }
    return true;
}

} // namespace

int EmbeddedGraph::dart_between(int a, int b) const {
    for (int d : rotation[a])
        if (dart_head(d) == b) return d;
    return -1;
}

std::vector<std::vector<int>> EmbeddedGraph::faces() const {
    const auto pos = dart_positions(*this);
    const int dart_count = 2 * graph.edge_count();
    std::vector<bool> seen(dart_count, false);
    std::vector<std::vector<int>> out;
    auto next = [&](int d) {
        const int t = twin(d);
        const auto& rot = rotation[dart_tail(t)];
        return rot[(pos[t] + 1) % rot.size()];
    };
    for (int d0 = 0; d0 < dart_count; ++d0) {
        if (seen[d0]) continue;
        std::vector<int> face;
        int d = d0;
        while (!seen[d]) {
            seen[d] = true;
            face.push_back(d);
            d = next(d);
        }
        out.push_back(std::move(face));
    }
    return out;
}

bool EmbeddedGraph::euler_ok() const {
    const auto comps = connected_components(graph);
    int isolated = 0;
    for (const auto& c : comps)
        if (c.size() == 1) ++isolated;
    const int f = static_cast<int>(faces().size()) + isolated;
    return graph.n - graph.edge_count() + f == 2 * static_cast<int>(comps.size());
}

void EmbeddedGraph::validate() const {
    graph.validate();
    if (static_cast<int>(rotation.size()) != graph.n)
        fail(ErrorCode::InvalidInput, "rotation size mismatch");
    std::vector<int> seen(2 * graph.edge_count(), 0);
    for (int v = 0; v < graph.n; ++v)
        for (int d : rotation[v]) {
            if (d < 0 || d >= 2 * graph.edge_count())
                fail(ErrorCode::InvalidInput, "dart out of range");
            if (dart_tail(d) != v) fail(ErrorCode::InvalidInput, "dart at wrong vertex");
            if (seen[d]++) fail(ErrorCode::InvalidInput, "dart repeated");
        }
    for (int d = 0; d < 2 * graph.edge_count(); ++d)
        if (!seen[d]) fail(ErrorCode::InvalidInput, "dart missing from rotation");
    if (!euler_ok()) fail(ErrorCode::InvalidInput, "rotation system fails Euler check");
}

EmbedResult planar_embed(const Graph& g) {
    g.validate();
    EmbedResult result;
    EmbeddedGraph embedding;
    if (embed_attempt(g, &embedding)) {
        result.embedding = std::move(embedding);
    } else {
        result.witness = extract_kuratowski(g);
    }
    return result;
}

bool is_planar(const Graph& g) { return embed_attempt(g, nullptr); }

TriangulationResult triangulate(const EmbeddedGraph& embedding) {
    if (embedding.graph.n < 3)
        fail(ErrorCode::InvalidInput, "triangulation needs at least 3 vertices");
    if (!is_connected(embedding.graph))
        fail(ErrorCode::InvalidInput, "triangulation needs a connected graph");

    TriangulationResult result;
    Graph graph = embedding.graph;
    std::set<std::pair<int, int>> edge_set;
    for (const auto& e : graph.edges) edge_set.insert({e.u, e.v});

    std::vector<std::vector<int>> pending = embedding.faces();
    std::vector<std::vector<int>> done;
    auto tail_of = [&](int d) {
        const Edge& e = graph.edges[d >> 1];
        return (d & 1) ? e.v : e.u;
    };

    while (!pending.empty()) {
        std::vector<int> face = std::move(pending.back());
        pending.pop_back();
        const int len = static_cast<int>(face.size());
        if (len <= 3) {
            done.push_back(std::move(face));
            continue;
        }
        int pos_i = -1, pos_j = -1;
        for (int span = 2; span <= len - 2 && pos_i < 0; ++span) {
            for (int i = 0; i < len && pos_i < 0; ++i) {
                const int j = (i + span) % len;
                const int a = tail_of(face[i]), b = tail_of(face[j]);
                if (a == b) continue;
                if (edge_set.count({std::min(a, b), std::max(a, b)})) continue;
                pos_i = i;
                pos_j = j;
            }
        }
        if (pos_i < 0)
            fail(ErrorCode::Internal, "face admits no chord");

        const int a = tail_of(face[pos_i]), b = tail_of(face[pos_j]);
        const int e = graph.edge_count();
        graph.edges.push_back(make_edge(a, b));
        edge_set.insert({graph.edges.back().u, graph.edges.back().v});
        result.added_edges.push_back(e);
        const int fwd = (graph.edges.back().u == a) ? 2 * e : 2 * e + 1;

        std::vector<int> face1{fwd}, face2{fwd ^ 1};
        for (int i = pos_j; i != pos_i; i = (i + 1) % len) face1.push_back(face[i]);
        for (int i = pos_i; i != pos_j; i = (i + 1) % len) face2.push_back(face[i]);
        pending.push_back(std::move(face1));
        pending.push_back(std::move(face2));
    }

    result.embedded.graph = std::move(graph);
    result.embedded.rotation =
        rotations_from_faces(result.embedded.graph.n, result.embedded.graph.edges, done);
    return result;
}

namespace {

/// Pair splice: a's rotation with the (a->b) dart replaced by b's darts in
/// cyclic order starting after (b->a). Old dart ids throughout.
std::vector<int> splice_pair(const EmbeddedGraph& embedding, int edge_id) {
    const int a = embedding.graph.edges[edge_id].u, b = embedding.graph.edges[edge_id].v;
    const auto& ra = embedding.rotation[a];
    const auto& rb = embedding.rotation[b];
    const int dab = 2 * edge_id, dba = 2 * edge_id + 1;
    int ia = -1, ib = -1;
    for (std::size_t i = 0; i < ra.size(); ++i)
        if (ra[i] == dab) ia = static_cast<int>(i);
    for (std::size_t i = 0; i < rb.size(); ++i)
        if (rb[i] == dba) ib = static_cast<int>(i);
    std::vector<int> spliced;
    spliced.reserve(ra.size() + rb.size() - 2);
    for (int i = 0; i < static_cast<int>(ra.size()); ++i) {
        if (i == ia) {
            for (int k = 1; k < static_cast<int>(rb.size()); ++k)
                spliced.push_back(rb[(ib + k) % rb.size()]);
        } else {
            spliced.push_back(ra[i]);
        }
    }
    return spliced;
}

/// Rebuilds an embedding after vertex merging. rep[v] names the surviving
/// old vertex representing v; replacement rotations (old dart ids) are
/// supplied for every representative whose list changed. Internal edges
/// vanish; parallel survivors merge onto the first copy.
ContractionResult rebuild_merged(const EmbeddedGraph& src,
                                 const std::vector<int>& rep,
                                 const std::vector<int>* replacement) {
    const Graph& g = src.graph;
    ContractionResult out;

    std::vector<int> new_id(g.n, -1);
    int next_vertex = 0;
    for (int v = 0; v < g.n; ++v)
        if (rep[v] == v) new_id[v] = next_vertex++;
    out.vertex_map.resize(g.n);
    for (int v = 0; v < g.n; ++v) out.vertex_map[v] = new_id[rep[v]];

    out.edge_map.assign(g.edge_count(), -1);
    std::map<std::pair<int, int>, int> canonical;
    std::vector<bool> dropped(g.edge_count(), false);
    std::vector<bool> swapped(g.edge_count(), false);
    Graph ng;
    ng.n = next_vertex;
    for (int e = 0; e < g.edge_count(); ++e) {
        const int x = out.vertex_map[g.edges[e].u], y = out.vertex_map[g.edges[e].v];
        if (x == y) {
            dropped[e] = true; // contracted away
            continue;
        }
        const auto key = std::minmax(x, y);
        auto it = canonical.find({key.first, key.second});
        if (it != canonical.end()) {
            out.edge_map[e] = it->second; // parallel copy: merged
            dropped[e] = true;
            continue;
        }
        const int id = ng.edge_count();
        canonical[{key.first, key.second}] = id;
        ng.edges.push_back({key.first, key.second});
        out.edge_map[e] = id;
        swapped[e] = (x != key.first);
    }

    auto translate = [&](int d) -> int {
        const int e = d >> 1;
        if (dropped[e]) return -1;
        return 2 * out.edge_map[e] + ((d & 1) ^ (swapped[e] ? 1 : 0));
    };

    out.embedded.graph = std::move(ng);
    out.embedded.rotation.assign(next_vertex, {});
    for (int v = 0; v < g.n; ++v) {
        if (rep[v] != v) continue;
        const std::vector<int>* use = &src.rotation[v];
        if (replacement != nullptr && !replacement[v].empty()) use = &replacement[v];
        auto& dst = out.embedded.rotation[new_id[v]];
        for (int d : *use) {
            const int nd = translate(d);
            if (nd >= 0) dst.push_back(nd);
        }
    }
    return out;
}

} // namespace

ContractionResult contract_edge(const EmbeddedGraph& embedding, int edge_id) {
    const Graph& g = embedding.graph;
    const int a = g.edges[edge_id].u, b = g.edges[edge_id].v;
    std::vector<int> rep(g.n);
    for (int v = 0; v < g.n; ++v) rep[v] = v;
    rep[b] = a;
    std::vector<std::vector<int>> replacement(g.n);
    replacement[a] = splice_pair(embedding, edge_id);
    return rebuild_merged(embedding, rep, replacement.data());
}

ContractionResult contract_matching(const EmbeddedGraph& embedding,
                                    const std::vector<int>& matching_edges) {
    const Graph& g = embedding.graph;
    std::vector<int> rep(g.n);
    for (int v = 0; v < g.n; ++v) rep[v] = v;
    std::vector<std::vector<int>> replacement(g.n);
    for (int e : matching_edges) {
        const int a = g.edges[e].u, b = g.edges[e].v;
        if (rep[a] != a || rep[b] != b)
            fail(ErrorCode::InvalidInput, "contract_matching: edges share vertices");
        rep[b] = a;
        replacement[a] = splice_pair(embedding, e);
    }
    return rebuild_merged(embedding, rep, replacement.data());
}

ContractionResult contract_set(const EmbeddedGraph& embedding, const std::vector<int>& set) {
    const Graph& g = embedding.graph;
    if (set.empty()) fail(ErrorCode::InvalidInput, "contract_set: empty set");
    std::vector<bool> in_set(g.n, false);
    for (int v : set) in_set[v] = true;
    const int root = *std::min_element(set.begin(), set.end());

    const auto pos = dart_positions(embedding);
    auto sigma_next = [&](int d) {
        const auto& r = embedding.rotation[embedding.dart_tail(d)];
        return r[(pos[d] + 1) % r.size()];
    };

    // Boundary walk: visits every outgoing dart of the set once, in the
    // cyclic order a sequence of single contractions would produce.
    std::vector<int> boundary;
    int d0 = -1, expected = 0;
    for (int v : set)
        for (int d : embedding.rotation[v])
            if (!in_set[embedding.dart_head(d)]) {
                if (d0 < 0) d0 = d;
                ++expected;
            }
    if (d0 >= 0) {
        int d = d0;
        do {
            boundary.push_back(d);
            int e = sigma_next(d);
            while (in_set[embedding.dart_head(e)])
                e = sigma_next(EmbeddedGraph::twin(e));
            d = e;
        } while (d != d0 && static_cast<int>(boundary.size()) <= expected);
        if (static_cast<int>(boundary.size()) != expected || d != d0)
            fail(ErrorCode::Internal, "contract_set: set is not connected");
    }

    std::vector<int> rep(g.n);
    for (int v = 0; v < g.n; ++v) rep[v] = in_set[v] ? root : v;
    std::vector<std::vector<int>> replacement(g.n);
    replacement[root] = boundary.empty() ? std::vector<int>{} : boundary;
    if (boundary.empty()) {
        // Isolated merged vertex: plain rebuild with an empty rotation.
        std::vector<std::vector<int>> repl(g.n);
        auto out = rebuild_merged(embedding, rep, repl.data());
        return out;
    }
    return rebuild_merged(embedding, rep, replacement.data());
}

ContractionResult restrict_embedding(const EmbeddedGraph& embedding,
                                     const std::vector<bool>& keep) {
    const Graph& g = embedding.graph;
    ContractionResult out;
    out.vertex_map.assign(g.n, -1);
    int next_id = 0;
    for (int v = 0; v < g.n; ++v)
        if (keep[v]) out.vertex_map[v] = next_id++;

    out.edge_map.assign(g.edge_count(), -1);
    Graph ng;
    ng.n = next_id;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!keep[g.edges[e].u] || !keep[g.edges[e].v]) continue;
        out.edge_map[e] = ng.edge_count();
        ng.edges.push_back({out.vertex_map[g.edges[e].u], out.vertex_map[g.edges[e].v]});
    }
    out.embedded.graph = std::move(ng);
    out.embedded.rotation.assign(next_id, {});
    for (int v = 0; v < g.n; ++v) {
        if (!keep[v]) continue;
        for (int d : embedding.rotation[v]) {
            const int e = d >> 1;
            if (out.edge_map[e] < 0) continue;
            out.embedded.rotation[out.vertex_map[v]].push_back(2 * out.edge_map[e] + (d & 1));
        }
    }
    return out;
}

int add_edge_in_common_face(EmbeddedGraph& embedding, int a, int b) {
    if (a == b || embedding.graph.has_edge(a, b))
        fail(ErrorCode::InvalidInput, "add_edge_in_common_face: bad endpoints");
    auto faces = embedding.faces();
    auto tail_of = [&](int d) { return embedding.dart_tail(d); };
    for (auto& face : faces) {
        int pos_a = -1, pos_b = -1;
        for (std::size_t i = 0; i < face.size(); ++i) {
            const int t = tail_of(face[i]);
            if (t == a && pos_a < 0) pos_a = static_cast<int>(i);
            if (t == b && pos_b < 0) pos_b = static_cast<int>(i);
        }
        if (pos_a < 0 || pos_b < 0) continue;

        const int e = embedding.graph.edge_count();
        embedding.graph.edges.push_back(make_edge(a, b));
        const int fwd = (embedding.graph.edges.back().u == a) ? 2 * e : 2 * e + 1;
        const int len = static_cast<int>(face.size());
        std::vector<int> face1{fwd}, face2{fwd ^ 1};
        for (int i = pos_b; i != pos_a; i = (i + 1) % len) face1.push_back(face[i]);
        for (int i = pos_a; i != pos_b; i = (i + 1) % len) face2.push_back(face[i]);
        face = std::move(face1);
        faces.push_back(std::move(face2));
        embedding.rotation =
            rotations_from_faces(embedding.graph.n, embedding.graph.edges, faces);
        return e;
    }
    return -1;
}

std::string embedding_to_json(const EmbeddedGraph& e) {
    nlohmann::json j;
    j["n"] = e.graph.n;
    auto arr = nlohmann::json::array();
    for (const auto& ed : e.graph.edges) arr.push_back({ed.u, ed.v});
    j["edges"] = arr;
    auto rot = nlohmann::json::array();
    for (int v = 0; v < e.graph.n; ++v) {
        auto lst = nlohmann::json::array();
        for (int d : e.rotation[v]) lst.push_back(d >> 1);
        rot.push_back(lst);
    }
    j["rotation"] = rot;
    return j.dump();
}

EmbeddedGraph embedding_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    EmbeddedGraph e;
    e.graph.n = j.at("n").get<int>();
    for (const auto& ed : j.at("edges"))
        e.graph.edges.push_back(make_edge(ed[0].get<int>(), ed[1].get<int>()));
    e.rotation.assign(e.graph.n, {});
    const auto& rot = j.at("rotation");
    for (int v = 0; v < e.graph.n; ++v)
        for (const auto& idx : rot.at(v)) {
            const int edge = idx.get<int>();
            const int d = (e.graph.edges[edge].u == v) ? 2 * edge : 2 * edge + 1;
            e.rotation[v].push_back(d);
        }
    e.validate();
    return e;
}

} // namespace ising
