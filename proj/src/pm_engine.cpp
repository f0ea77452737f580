#include "ising/pm_engine.hpp"

#include "ising/error.hpp"
#include "ising/matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ising {

using detail::Mat2;
using detail::Vec2;

namespace {

constexpr int kEnumerationCutoff = 32;

std::vector<int> matching_edges_from(const Graph& g, const std::vector<int>& match) {
    Adjacency adj(g);
    std::vector<int> edges;
    for (int v = 0; v < g.n; ++v) {
        if (match[v] < 0) fail(ErrorCode::NoPerfectMatching, "matching is not perfect");
        if (match[v] < v) continue;
        int found = -1;
        for (const auto& arc : adj[v])
            if (arc.to == match[v]) {
                found = arc.edge;
                break;
            }
        if (found < 0) fail(ErrorCode::Internal, "matching uses missing edge");
        edges.push_back(found);
    }
    return edges;
}

} // namespace

double Mat2::max_abs() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

void PMModel::validate() const {
    embedded.validate();
    if (static_cast<int>(weights.size()) != embedded.graph.edge_count())
        fail(ErrorCode::InvalidInput, "weight vector length mismatch");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            fail(ErrorCode::InvalidInput, "PM weights must be positive finite");
    Adjacency adj(embedded.graph);
    for (int v = 0; v < embedded.graph.n; ++v)
        if (adj.degree(v) > 3)
            fail(ErrorCode::InvalidInput, "PM engine requires maximum degree 3");
}

std::vector<bool> pfaffian_orient(const EmbeddedGraph& embedded) {
    const Graph& g = embedded.graph;
    const auto faces = embedded.faces();
    const int face_count = static_cast<int>(faces.size());
    std::vector<int> face_of_dart(2 * g.edge_count(), -1);
    for (int f = 0; f < face_count; ++f)
        for (int d : faces[f]) face_of_dart[d] = f;

    std::vector<bool> oriented(g.edge_count(), true);
    std::vector<int> parent_edge(face_count, -1);
    std::vector<int> bfs_order;
    std::vector<bool> visited(face_count, false);

    // Dual BFS forest; each non-root face is entered through one edge.
    for (int root = 0; root < face_count; ++root) {
        if (visited[root]) continue;
        visited[root] = true;
        std::vector<int> queue{root};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int f = queue[head];
            bfs_order.push_back(f);
            for (int d : faces[f]) {
                const int g2 = face_of_dart[d ^ 1];
                if (!visited[g2]) {
                    visited[g2] = true;
                    parent_edge[g2] = d >> 1;
                    queue.push_back(g2);
                }
            }
        }
    }

    auto aligned = [&](int d) {
        const int e = d >> 1;
        return ((d & 1) == 0) == oriented[e];
    };
    for (auto it = bfs_order.rbegin(); it != bfs_order.rend(); ++it) {
        const int f = *it;
        if (parent_edge[f] < 0) continue; // one free face per component
        int count = 0;
        for (int d : faces[f])
            if ((d >> 1) != parent_edge[f] && aligned(d)) ++count;
        // Choose the undecided edge's direction to make the face odd.
        const int e = parent_edge[f];
        int dart_in_face = -1;
        for (int d : faces[f])
            if ((d >> 1) == e) dart_in_face = d;
        const bool align_needed = (count % 2 == 0);
        oriented[e] = ((dart_in_face & 1) == 0) ? align_needed : !align_needed;
    }
    return oriented;
}

// ── KasteleynSolver ──────────────────────────────────────────────────

KasteleynSolver::KasteleynSolver(const EmbeddedGraph& embedded,
                                 const std::vector<double>& weights,
                                 const std::vector<bool>& oriented,
                                 const std::vector<int>& base_pm,
                                 const std::vector<int>& forced_last) {
    n_ = embedded.graph.n;
    if (n_ % 2 != 0) fail(ErrorCode::NoPerfectMatching, "odd vertex count");
    m_ = n_ / 2;
    if (n_ == 0) return;
    build_structure(embedded, base_pm, forced_last);
    build_matrix(embedded, weights, oriented);
    symbolic();
    factorize();
}

void KasteleynSolver::build_matrix(const EmbeddedGraph& embedded,
                                   const std::vector<double>& weights,
                                   const std::vector<bool>& oriented) {
    const Graph& g = embedded.graph;
    double mean_log = 0.0;
    for (double w : weights) mean_log += std::log(w);
    log_scale_ = weights.empty() ? 0.0 : -mean_log / static_cast<double>(weights.size());

    std::vector<std::map<int, Mat2>> cols(m_);
    auto add = [&](int row, int col, double value) {
        Mat2& blk = cols[col >> 1][row >> 1];
        double* cell[2][2] = {{&blk.a, &blk.b}, {&blk.c, &blk.d}};
        *cell[row & 1][col & 1] += value;
    };
    for (int e = 0; e < g.edge_count(); ++e) {
        const double w = std::exp(std::log(weights[e]) + log_scale_);
        const double sgn = oriented[e] ? 1.0 : -1.0;
        const int pu = pos_[g.edges[e].u], pv = pos_[g.edges[e].v];
        add(pu, pv ^ 1, sgn * w);
        add(pv, pu ^ 1, -sgn * w);
    }
    a_rows_.assign(m_, {});
    a_vals_.assign(m_, {});
    for (int j = 0; j < m_; ++j)
        for (const auto& [i, blk] : cols[j]) {
            a_rows_[j].push_back(i);
            a_vals_[j].push_back(blk);
        }
}

void KasteleynSolver::build_structure(const EmbeddedGraph& embedded,
                                      const std::vector<int>& base_pm,
                                      const std::vector<int>& forced_last) {
    const Graph& g = embedded.graph;
    if (static_cast<int>(base_pm.size()) != m_)
        fail(ErrorCode::InvalidInput, "base PM has wrong size");

    auto blocks = contract_matching(embedded, base_pm);
    const std::vector<int>& block_of = blocks.vertex_map;

    std::vector<int> pm_edge_of_block(m_, -1);
    for (int e : base_pm) {
        const int b = block_of[g.edges[e].u];
        if (b != block_of[g.edges[e].v] || pm_edge_of_block[b] >= 0)
            fail(ErrorCode::InvalidInput, "base PM is not a perfect matching");
        pm_edge_of_block[b] = e;
    }

    std::vector<int> forced_blocks;
    {
        std::vector<bool> seen(m_, false);
        for (int v : forced_last) {
            const int b = block_of[v];
            if (!seen[b]) {
                seen[b] = true;
                forced_blocks.push_back(b);
            }
        }
    }

    forced_tail_size_ = 2 * static_cast<int>(forced_blocks.size());
    const auto block_order = nested_dissection_order(blocks.embedded, forced_blocks);
    order_.resize(n_);
    pos_.resize(n_);
    for (int k = 0; k < m_; ++k) {
        const int e = pm_edge_of_block[block_order[k]];
        order_[2 * k] = g.edges[e].u;
        order_[2 * k + 1] = g.edges[e].v;
    }
    for (int p = 0; p < n_; ++p) pos_[order_[p]] = p;
}

void KasteleynSolver::symbolic() {
    // Below-diagonal block adjacency (symmetric pattern).
    std::vector<std::vector<int>> below(m_);
    for (int j = 0; j < m_; ++j)
        for (int i : a_rows_[j])
            if (i > j) below[j].push_back(i);

    lpat_.assign(m_, {});
    upper_.assign(m_, {});
    std::vector<std::vector<int>> children(m_);
    std::vector<int> stamp(m_, -1);
    for (int j = 0; j < m_; ++j) {
        std::vector<int> pat;
        for (int i : below[j])
            if (stamp[i] != j) {
                stamp[i] = j;
                pat.push_back(i);
            }
        for (int c : children[j])
            for (int i : lpat_[c])
                if (i != j && stamp[i] != j) {
                    stamp[i] = j;
                    pat.push_back(i);
                }
        std::sort(pat.begin(), pat.end());
        lpat_[j] = std::move(pat);
        if (!lpat_[j].empty()) children[lpat_[j][0]].push_back(j);
    }
    for (int k = 0; k < m_; ++k)
        for (int j : lpat_[k]) upper_[j].push_back(k);
}

void KasteleynSolver::factorize() {
    lval_.assign(m_, {});
    uval_.assign(m_, {});
    pivot_inv_.assign(m_, Mat2{});
    urow_.assign(m_, {});

    for (int j = 0; j < m_; ++j) {
        lval_[j].assign(lpat_[j].size(), Mat2{});
        uval_[j].assign(upper_[j].size(), Mat2{});
    }

    std::vector<Mat2> w(m_);
    std::vector<int> stamp(m_, -1);

    for (int j = 0; j < m_; ++j) {
        // Scatter column j of A.
        for (std::size_t t = 0; t < a_rows_[j].size(); ++t) {
            const int i = a_rows_[j][t];
            stamp[i] = j;
            w[i] = a_vals_[j][t];
        }
        double colmax = 0.0;
        for (std::size_t t = 0; t < upper_[j].size(); ++t) {
            const int k = upper_[j][t];
            const Mat2 ukj = (stamp[k] == j) ? w[k] : Mat2{};
            uval_[j][t] = ukj;
            if (ukj.a == 0 && ukj.b == 0 && ukj.c == 0 && ukj.d == 0) continue;
            const auto& rows = lpat_[k];
            const auto& vals = lval_[k];
            for (std::size_t s = 0; s < rows.size(); ++s) {
                const int i = rows[s];
                if (stamp[i] != j) {
                    stamp[i] = j;
                    w[i] = Mat2{};
                }
                w[i] -= vals[s] * ukj;
            }
        }
        if (stamp[j] != j) fail(ErrorCode::NumericalBreakdown, "vanished pivot block");
        const Mat2 pivot = w[j];
        colmax = pivot.max_abs();
        for (int i : lpat_[j])
            if (stamp[i] == j) colmax = std::max(colmax, w[i].max_abs());
        const double dt = pivot.det();
        if (!(std::abs(dt) > 1e-12 * colmax * colmax) || colmax == 0.0)
            fail(ErrorCode::NumericalBreakdown, "singular 2x2 pivot block");
        pivot_inv_[j] = pivot.inverse();
        log_abs_det_ += std::log(std::abs(dt));
        for (std::size_t t = 0; t < lpat_[j].size(); ++t) {
            const int i = lpat_[j][t];
            lval_[j][t] = (stamp[i] == j ? w[i] : Mat2{}) * pivot_inv_[j];
        }
    }
    for (int j = 0; j < m_; ++j)
        for (std::size_t t = 0; t < upper_[j].size(); ++t)
            urow_[upper_[j][t]].push_back({j, static_cast<int>(t)});
}

double KasteleynSolver::log_partition() const {
    return 0.5 * log_abs_det_ - m_ * log_scale_;
}

std::vector<Vec2> KasteleynSolver::solve_column(int position) const {
    std::vector<Vec2> y(m_, Vec2{});
    const int qb = position >> 1;
    if ((position & 1) == 0)
        y[qb].x = 1.0;
    else
        y[qb].y = 1.0;
    for (int k = qb; k < m_; ++k) {
        const Vec2 yk = y[k];
        if (yk.x == 0.0 && yk.y == 0.0) continue;
        const auto& rows = lpat_[k];
        const auto& vals = lval_[k];
        for (std::size_t t = 0; t < rows.size(); ++t) {
            const Vec2 delta = vals[t] * yk;
            y[rows[t]].x -= delta.x;
            y[rows[t]].y -= delta.y;
        }
    }
    for (int j = m_ - 1; j >= 0; --j) {
        Vec2 acc = y[j];
        for (const auto& [jp, idx] : urow_[j]) {
            const Vec2 delta = uval_[jp][idx] * y[jp];
            acc.x -= delta.x;
            acc.y -= delta.y;
        }
        y[j] = pivot_inv_[j] * acc;
    }
    return y;
}

double KasteleynSolver::inverse_entry(int vertex_row, int vertex_col) const {
    const auto col = solve_column(pos_[vertex_col]);
    const int p = pos_[vertex_row] ^ 1;
    return (p & 1) ? col[p >> 1].y : col[p >> 1].x;
}

std::vector<double> KasteleynSolver::trailing_inverse(int t) const {
    const int tb = t / 2;
    const int offb = m_ - tb;
    if (t % 2 != 0 || tb < 0 || offb < 0) fail(ErrorCode::Internal, "bad trailing size");

    std::vector<Mat2> ltt(static_cast<std::size_t>(tb) * tb), utt(ltt.size());
    for (int j = 0; j < tb; ++j) {
        ltt[j * tb + j] = Mat2{1, 0, 0, 1};
        const int col = offb + j;
        for (std::size_t s = 0; s < lpat_[col].size(); ++s) {
            const int i = lpat_[col][s];
            if (i >= offb) ltt[(i - offb) * tb + j] = lval_[col][s];
        }
        for (std::size_t s = 0; s < upper_[col].size(); ++s) {
            const int k = upper_[col][s];
            if (k >= offb) utt[(k - offb) * tb + j] = uval_[col][s];
        }
    }

    std::vector<double> result(static_cast<std::size_t>(t) * t, 0.0);
    std::vector<Vec2> rhs(tb), sol(tb);
    for (int c = 0; c < t; ++c) {
        std::fill(rhs.begin(), rhs.end(), Vec2{});
        if ((c & 1) == 0)
            rhs[c >> 1].x = 1.0;
        else
            rhs[c >> 1].y = 1.0;
        // Forward with unit-lower Ltt.
        for (int k = 0; k < tb; ++k) {
            const Vec2 yk = rhs[k];
            if (yk.x == 0.0 && yk.y == 0.0) continue;
            for (int i = k + 1; i < tb; ++i) {
                const Mat2& lik = ltt[i * tb + k];
                const Vec2 delta = lik * yk;
                rhs[i].x -= delta.x;
                rhs[i].y -= delta.y;
            }
        }
        // Backward with Utt.
        for (int j = tb - 1; j >= 0; --j) {
            Vec2 acc = rhs[j];
            for (int jp = j + 1; jp < tb; ++jp) {
                const Vec2 delta = utt[j * tb + jp] * sol[jp];
                acc.x -= delta.x;
                acc.y -= delta.y;
            }
            sol[j] = pivot_inv_[offb + j] * acc;
        }
        for (int r = 0; r < t; ++r)
            result[static_cast<std::size_t>(r) * t + c] = (r & 1) ? sol[r >> 1].y : sol[r >> 1].x;
    }
    return result;
}

// ── PmEngine ─────────────────────────────────────────────────────────

struct PmEngine::Context {
    EmbeddedGraph emb;
    std::vector<double> weights;
    std::vector<bool> oriented;
    std::vector<int> base_pm; // edge ids in this frame
    std::vector<int> to_top;  // edge id -> caller-visible id
};

PmEngine::PmEngine(PMModel model, std::vector<int> base_pm) : model_(std::move(model)) {
    model_.validate();
    const Graph& g = model_.embedded.graph;
    if (g.n % 2 != 0) fail(ErrorCode::NoPerfectMatching, "odd vertex count");
    oriented_ = pfaffian_orient(model_.embedded);
    if (!base_pm.empty()) {
        base_pm_ = std::move(base_pm);
    } else if (g.n > 0) {
        base_pm_ = matching_edges_from(g, maximum_matching(g));
    }
    edge_prob_.assign(g.edge_count(), 0.0);
    edge_prob_known_.assign(g.edge_count(), false);
}

void PmEngine::ensure_inference() const {
    if (inference_ || model_.embedded.graph.n == 0) return;
    inference_ = std::make_unique<KasteleynSolver>(model_.embedded, model_.weights,
                                                   oriented_, base_pm_);
}

double PmEngine::log_partition() const {
    if (model_.embedded.graph.n == 0) return 0.0;
    ensure_inference();
    return inference_->log_partition();
}

double PmEngine::edge_probability(int edge) const {
    if (!edge_prob_known_[edge]) {
        ensure_inference();
        // One column solve covers every edge at this endpoint.
        const int y = model_.embedded.graph.edges[edge].v;
        Adjacency adj(model_.embedded.graph);
        for (const auto& arc : adj[y]) {
            const double entry = inference_->inverse_entry(arc.to, y);
            const double scaled_w =
                model_.weights[arc.edge] * std::exp(inference_->weight_scale());
            edge_prob_[arc.edge] = std::min(1.0, scaled_w * std::abs(entry));
            edge_prob_known_[arc.edge] = true;
        }
    }
    return edge_prob_[edge];
}

std::vector<double> PmEngine::all_edge_probabilities() const {
    for (int e = 0; e < model_.embedded.graph.edge_count(); ++e) edge_probability(e);
    return edge_prob_;
}

void PmEngine::ensure_sampler() const {
    if (sampler_ready_) return;
    const Graph& g = model_.embedded.graph;
    if (g.n > kEnumerationCutoff) {
        separation_ = planar_separation(model_.embedded);
        if (!separation_.separator.empty()) {
            std::vector<bool> in_w(g.n, false);
            Adjacency adj(g);
            std::vector<int> w_list;
            for (int v : separation_.separator) {
                if (!in_w[v]) {
                    in_w[v] = true;
                    w_list.push_back(v);
                }
                for (const auto& arc : adj[v])
                    if (!in_w[arc.to]) {
                        in_w[arc.to] = true;
                        w_list.push_back(arc.to);
                    }
            }
            sampling_solver_ = std::make_unique<KasteleynSolver>(
                model_.embedded, model_.weights, oriented_, base_pm_, w_list);
            const int t = sampling_solver_->forced_tail_size();
            trailing_ = sampling_solver_->trailing_inverse(t);
            trailing_offset_ = g.n - t;
        }
    }
    sampler_ready_ = true;
}

namespace {

/// Exhaustive weighted PM draw for small frames.
void enumerate_and_draw(const Graph& g, const std::vector<double>& weights,
                        const std::vector<int>& to_top, Rng& rng,
                        std::vector<int>& out) {
    if (g.n == 0) return;
    Adjacency adj(g);
    std::vector<bool> used(g.n, false);
    std::vector<int> chosen;
    std::vector<std::pair<double, std::vector<int>>> pms; // (product, edges)
    double total = 0.0;

    auto recurse = [&](auto&& self, double product) -> void {
        int v = -1;
        for (int i = 0; i < g.n; ++i)
            if (!used[i]) {
                v = i;
                break;
            }
        if (v < 0) {
            pms.push_back({product, chosen});
            total += product;
            return;
        }
        used[v] = true;
        for (const auto& arc : adj[v]) {
            if (used[arc.to]) continue;
            used[arc.to] = true;
            chosen.push_back(arc.edge);
            self(self, product * weights[arc.edge]);
            chosen.pop_back();
            used[arc.to] = false;
        }
        used[v] = false;
    };
    recurse(recurse, 1.0);
    if (pms.empty() || total <= 0.0)
        fail(ErrorCode::Internal, "sampling frame lost all perfect matchings");

    double r = rng.next_double() * total;
    std::size_t pick = pms.size() - 1;
    for (std::size_t i = 0; i < pms.size(); ++i) {
        r -= pms[i].first;
        if (r <= 0.0) {
            pick = i;
            break;
        }
    }
    for (int e : pms[pick].second) out.push_back(to_top[e]);
}

} // namespace

void PmEngine::sample_separator(const Context& ctx, const KasteleynSolver& solver,
                                const std::vector<double>& trailing, int trailing_offset,
                                const std::vector<int>& separator, Rng& rng,
                                std::vector<bool>& saturated, std::vector<int>& out) const {
    const Graph& g = ctx.emb.graph;
    const Adjacency adj(g);
    const int t = static_cast<int>(std::lround(std::sqrt(static_cast<double>(trailing.size()))));
    const double log_s = solver.weight_scale();

    auto entry = [&](int pa, int pb) {
        // K^{-1}(pa, pb) = Kbar^{-1}(partner(pa), pb), scaled system.
        const int r = (pa ^ 1) - trailing_offset;
        const int c = pb - trailing_offset;
        if (r < 0 || c < 0 || r >= t || c >= t)
            fail(ErrorCode::Internal, "separator index outside trailing window");
        return trailing[static_cast<std::size_t>(r) * t + c];
    };

    const int max_rows = 2 * static_cast<int>(separator.size()) + 2;
    std::vector<double> lmat(static_cast<std::size_t>(max_rows) * max_rows, 0.0);
    std::vector<double> umat(static_cast<std::size_t>(max_rows) * max_rows, 0.0);
    auto lm = [&](int r, int c) -> double& { return lmat[static_cast<std::size_t>(r) * max_rows + c]; };
    auto um = [&](int r, int c) -> double& { return umat[static_cast<std::size_t>(r) * max_rows + c]; };
    std::vector<int> drawn; // positions, two per drawn edge

    // Border A_k with positions (pv, pw); returns det z; optionally commits.
    std::vector<double> ycol0(max_rows), ycol1(max_rows), r0(max_rows), r1(max_rows);
    auto border = [&](int pv, int pw, bool commit) -> double {
        const int k2 = static_cast<int>(drawn.size());
        for (int r = 0; r < k2; ++r) {
            ycol0[r] = entry(drawn[r], pv);
            ycol1[r] = entry(drawn[r], pw);
        }
        // Forward: Y = L^{-1} y (unit lower).
        for (int r = 0; r < k2; ++r) {
            double s0 = ycol0[r], s1 = ycol1[r];
            for (int c = 0; c < r; ++c) {
                s0 -= lm(r, c) * ycol0[c];
                s1 -= lm(r, c) * ycol1[c];
            }
            ycol0[r] = s0;
            ycol1[r] = s1;
        }
        // R U = r rows.
        for (int c = 0; c < k2; ++c) {
            double s0 = entry(pv, drawn[c]), s1 = entry(pw, drawn[c]);
            for (int cp = 0; cp < c; ++cp) {
                s0 -= r0[cp] * um(cp, c);
                s1 -= r1[cp] * um(cp, c);
            }
            r0[c] = s0 / um(c, c);
            r1[c] = s1 / um(c, c);
        }
        double z00 = entry(pv, pv), z01 = entry(pv, pw);
        double z10 = entry(pw, pv), z11 = entry(pw, pw);
        for (int c = 0; c < k2; ++c) {
            z00 -= r0[c] * ycol0[c];
            z01 -= r0[c] * ycol1[c];
            z10 -= r1[c] * ycol0[c];
            z11 -= r1[c] * ycol1[c];
        }
        if (commit) {
            for (int c = 0; c < k2; ++c) {
                lm(k2, c) = r0[c];
                lm(k2 + 1, c) = r1[c];
                um(c, k2) = ycol0[c];
                um(c, k2 + 1) = ycol1[c];
            }
            lm(k2, k2) = 1.0;
            lm(k2 + 1, k2 + 1) = 1.0;
            lm(k2, k2 + 1) = lm(k2 + 1, k2) = 0.0;
            um(k2, k2) = z00;
            um(k2, k2 + 1) = z01;
            um(k2 + 1, k2) = z10;
            um(k2 + 1, k2 + 1) = z11;
            drawn.push_back(pv);
            drawn.push_back(pw);
        }
        return z00 * z11 - z01 * z10;
    };

    for (int v : separator) {
        if (saturated[v]) continue;
        double total = 0.0;
        std::vector<std::pair<int, double>> candidates; // (arc index, probability)
        for (std::size_t i = 0; i < adj[v].size(); ++i) {
            const auto& arc = adj[v][i];
            if (saturated[arc.to]) continue;
            const double u = border(solver.position_of(v), solver.position_of(arc.to), false);
            const double p =
                ctx.weights[arc.edge] * std::exp(log_s) * std::sqrt(std::abs(u));
            candidates.push_back({static_cast<int>(i), p});
            total += p;
        }
        if (candidates.empty() || total < 1e-9)
            fail(ErrorCode::NumericalBreakdown, "separator vertex has no viable edge");
        if (std::abs(total - 1.0) > 1e-3)
            fail(ErrorCode::NumericalBreakdown, "separator edge probabilities degenerate");
        double r = rng.next_double() * total;
        int chosen = candidates.back().first;
        for (const auto& [idx, p] : candidates) {
            r -= p;
            if (r <= 0.0) {
                chosen = idx;
                break;
            }
        }
        const auto& arc = adj[v][chosen];
        border(solver.position_of(v), solver.position_of(arc.to), true);
        out.push_back(ctx.to_top[arc.edge]);
        saturated[v] = true;
        saturated[arc.to] = true;
    }
}

void PmEngine::wilson(Context& ctx, Rng& rng, std::vector<int>& out) const {
    const Graph& g = ctx.emb.graph;
    if (g.n == 0) return;
    if (g.n <= kEnumerationCutoff) {
        enumerate_and_draw(g, ctx.weights, ctx.to_top, rng, out);
        return;
    }
    const Separation sep = planar_separation(ctx.emb);
    std::vector<bool> saturated(g.n, false);

    if (!sep.separator.empty()) {
        std::vector<bool> in_w(g.n, false);
        Adjacency adj(g);
        std::vector<int> w_list;
        for (int v : sep.separator) {
            if (!in_w[v]) {
                in_w[v] = true;
                w_list.push_back(v);
            }
            for (const auto& arc : adj[v])
                if (!in_w[arc.to]) {
                    in_w[arc.to] = true;
                    w_list.push_back(arc.to);
                }
        }
        KasteleynSolver solver(ctx.emb, ctx.weights, ctx.oriented, ctx.base_pm, w_list);
        const int t = solver.forced_tail_size();
        const auto trailing = solver.trailing_inverse(t);
        sample_separator(ctx, solver, trailing, g.n - t, sep.separator, rng, saturated, out);
    }

    for (const auto* part : {&sep.part1, &sep.part2}) {
        std::vector<bool> keep(g.n, false);
        int kept = 0;
        for (int v : *part)
            if (!saturated[v]) {
                keep[v] = true;
                ++kept;
            }
        if (kept == 0) continue;
        auto sub = restrict_embedding(ctx.emb, keep);
        Context child;
        child.emb = std::move(sub.embedded);
        const int ec = child.emb.graph.edge_count();
        child.weights.resize(ec);
        child.oriented.resize(ec);
        child.to_top.resize(ec);
        for (int e = 0; e < g.edge_count(); ++e) {
            const int ne = sub.edge_map[e];
            if (ne < 0) continue;
            child.weights[ne] = ctx.weights[e];
            child.oriented[ne] = ctx.oriented[e];
            child.to_top[ne] = ctx.to_top[e];
        }
        // Inherit what is left of the base PM; repair it to perfect.
        std::vector<int> seed(child.emb.graph.n, -1);
        for (int e : ctx.base_pm) {
            const int ne = sub.edge_map[e];
            if (ne < 0) continue;
            seed[child.emb.graph.edges[ne].u] = child.emb.graph.edges[ne].v;
            seed[child.emb.graph.edges[ne].v] = child.emb.graph.edges[ne].u;
        }
        child.base_pm = matching_edges_from(child.emb.graph,
                                            maximum_matching(child.emb.graph, std::move(seed)));
        wilson(child, rng, out);
    }
}

std::vector<int> PmEngine::sample(Rng& rng) const {
    const Graph& g = model_.embedded.graph;
    std::vector<int> out;
    if (g.n == 0) return out;
    ensure_sampler();

    Context top;
    top.emb = model_.embedded;
    top.weights = model_.weights;
    top.oriented = oriented_;
    top.base_pm = base_pm_;
    top.to_top.resize(g.edge_count());
    std::iota(top.to_top.begin(), top.to_top.end(), 0);

    if (g.n <= kEnumerationCutoff) {
        enumerate_and_draw(g, top.weights, top.to_top, rng, out);
        return out;
    }

    std::vector<bool> saturated(g.n, false);
    if (!separation_.separator.empty())
        sample_separator(top, *sampling_solver_, trailing_, trailing_offset_,
                         separation_.separator, rng, saturated, out);

    for (const auto* part : {&separation_.part1, &separation_.part2}) {
        std::vector<bool> keep(g.n, false);
        int kept = 0;
        for (int v : *part)
            if (!saturated[v]) {
                keep[v] = true;
                ++kept;
            }
        if (kept == 0) continue;
        auto sub = restrict_embedding(model_.embedded, keep);
        Context child;
        child.emb = std::move(sub.embedded);
        const int ec = child.emb.graph.edge_count();
        child.weights.resize(ec);
        child.oriented.resize(ec);
        child.to_top.resize(ec);
        for (int e = 0; e < g.edge_count(); ++e) {
            const int ne = sub.edge_map[e];
            if (ne < 0) continue;
            child.weights[ne] = model_.weights[e];
            child.oriented[ne] = oriented_[e];
            child.to_top[ne] = e;
        }
        std::vector<int> seed(child.emb.graph.n, -1);
        for (int e : base_pm_) {
            const int ne = sub.edge_map[e];
            if (ne < 0) continue;
            seed[child.emb.graph.edges[ne].u] = child.emb.graph.edges[ne].v;
            seed[child.emb.graph.edges[ne].v] = child.emb.graph.edges[ne].u;
        }
        child.base_pm = matching_edges_from(child.emb.graph,
                                            maximum_matching(child.emb.graph, std::move(seed)));
        wilson(child, rng, out);
    }
    return out;
}

} // namespace ising
