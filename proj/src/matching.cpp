#include "ising/matching.hpp"

#include "ising/error.hpp"

#include <algorithm>
#include <queue>

namespace ising {

namespace {

/// Classic blossom search: BFS forest of even vertices, odd cycles
/// contracted onto their base via the `base` array.
class Matcher {
public:
    explicit Matcher(const Graph& g) : adj_(g), n_(g.n) {
        match_.assign(n_, -1);
        parent_.assign(n_, -1);
        base_.assign(n_, 0);
    }

    std::vector<int>& match() { return match_; }

    bool augment_from(int root) {
        parent_.assign(n_, -1);
        in_tree_.assign(n_, false);
        for (int v = 0; v < n_; ++v) base_[v] = v;
        std::queue<int> queue;
        queue.push(root);
        in_tree_[root] = true;

        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop();
            for (const auto& arc : adj_[v]) {
                const int to = arc.to;
                if (base_[v] == base_[to] || match_[v] == to) continue;
                if (to == root || (match_[to] >= 0 && parent_[match_[to]] >= 0)) {
                    // Odd cycle: contract the blossom.
                    const int cur = lowest_common_base(v, to);
                    blossom_.assign(n_, false);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int u = 0; u < n_; ++u)
                        if (blossom_[base_[u]]) {
                            base_[u] = cur;
                            if (!in_tree_[u]) {
                                in_tree_[u] = true;
                                queue.push(u);
                            }
                        }
                } else if (parent_[to] < 0) {
                    parent_[to] = v;
                    if (match_[to] < 0) {
                        augment_along(to);
                        return true;
                    }
                    in_tree_[match_[to]] = true;
                    queue.push(match_[to]);
                }
            }
        }
        return false;
    }

private:
    int lowest_common_base(int a, int b) {
        seen_.assign(n_, false);
        int v = a;
        while (true) {
            v = base_[v];
            seen_[v] = true;
            if (match_[v] < 0) break;
            v = parent_[match_[v]];
        }
        int u = b;
        while (true) {
            u = base_[u];
            if (seen_[u]) return u;
            u = parent_[match_[u]];
        }
    }

    void mark_path(int v, int stop, int child) {
        while (base_[v] != stop) {
            blossom_[base_[v]] = true;
            blossom_[base_[match_[v]]] = true;
            parent_[v] = child;
            child = match_[v];
            v = parent_[match_[v]];
        }
    }

    void augment_along(int v) {
        while (v >= 0) {
            const int pv = parent_[v], ppv = match_[pv];
            match_[v] = pv;
            match_[pv] = v;
            v = ppv;
        }
    }

    Adjacency adj_;
    int n_;
    std::vector<int> match_, parent_, base_;
    std::vector<bool> in_tree_, blossom_, seen_;
};

} // namespace

std::vector<int> maximum_matching(const Graph& g, std::vector<int> seed) {
    Matcher matcher(g);
    if (!seed.empty()) {
        if (static_cast<int>(seed.size()) != g.n)
            fail(ErrorCode::InvalidInput, "matching seed has wrong length");
        matcher.match() = std::move(seed);
    }
    for (int v = 0; v < g.n; ++v)
        if (matcher.match()[v] < 0) matcher.augment_from(v);
    return matcher.match();
}

std::vector<int> perfect_matching_edges(const Graph& g, std::vector<int> seed) {
    const auto match = maximum_matching(g, std::move(seed));
    std::vector<int> edges;
    for (int v = 0; v < g.n; ++v) {
        if (match[v] < 0) fail(ErrorCode::NoPerfectMatching, "graph has no perfect matching");
        if (match[v] > v) {
            const int e = g.find_edge(v, match[v]);
            if (e < 0) fail(ErrorCode::Internal, "matching uses a missing edge");
            edges.push_back(e);
        }
    }
    return edges;
}

} // namespace ising
