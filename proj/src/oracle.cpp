#include "ising/oracle.hpp"

#include "ising/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

namespace ising {
namespace oracle {

namespace {

constexpr int kMaxBruteVertices = 24;

/// Streaming log-sum-exp accumulator.
class LogSum {
public:
    void add(double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (log_term > max_) {
            if (max_ == -std::numeric_limits<double>::infinity())
                sum_ = 1.0;
            else
                sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        } else {
            sum_ += std::exp(log_term - max_);
        }
    }

    double value() const {
        if (max_ == -std::numeric_limits<double>::infinity()) return max_;
        return max_ + std::log(sum_);
    }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

/// Visits all 2^n configurations in Gray-code order. The callback receives
/// (configuration bitmask, energy); energies are maintained incrementally.
template <typename F>
void for_each_config(const IsingModel& model, F&& visit) {
    const int n = model.graph.n;
    const Adjacency adj(model.graph);
    std::vector<int> spins(n, -1);

    double energy = 0.0;
    for (int e = 0; e < model.graph.edge_count(); ++e) energy += model.couplings[e];
    for (int v = 0; v < n; ++v) energy -= model.fields[v];

    const std::uint64_t total = 1ull << n;
    std::uint32_t config = 0; // all bits clear = all spins -1
    visit(config, energy);
    for (std::uint64_t i = 1; i < total; ++i) {
        const int v = std::countr_zero(i);
        double local = model.fields[v];
        for (const auto& arc : adj[v]) local += model.couplings[arc.edge] * spins[arc.to];
        energy -= 2.0 * spins[v] * local;
        spins[v] = -spins[v];
        config ^= (1u << v);
        visit(config, energy);
    }
}

void check_brute_size(const IsingModel& model) {
    if (model.graph.n > kMaxBruteVertices)
        fail(ErrorCode::TooLarge, "brute-force oracle limited to 24 spins");
}

} // namespace

void ExactDistribution::validate() const {
    double total = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) fail(ErrorCode::Internal, "negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        fail(ErrorCode::Internal, "distribution does not sum to one");
}

double brute_force_log_Z(const IsingModel& model) {
    model.validate();
    check_brute_size(model);
    LogSum acc;
    for_each_config(model, [&](std::uint32_t, double energy) { acc.add(energy); });
    return acc.value();
}

Marginals brute_force_marginals(const IsingModel& model) {
    model.validate();
    check_brute_size(model);
    const double log_z = brute_force_log_Z(model);
    Marginals out;
    out.edge.assign(model.graph.edge_count(), 0.0);
    out.vertex.assign(model.graph.n, 0.0);
    for_each_config(model, [&](std::uint32_t config, double energy) {
        const double p = std::exp(energy - log_z);
        for (int e = 0; e < model.graph.edge_count(); ++e) {
            const auto& ed = model.graph.edges[e];
            out.edge[e] += p * spin_of(config, ed.u) * spin_of(config, ed.v);
        }
        for (int v = 0; v < model.graph.n; ++v) out.vertex[v] += p * spin_of(config, v);
    });
    return out;
}

ExactDistribution brute_force_distribution(const IsingModel& model) {
    model.validate();
    if (model.graph.n > 20)
        fail(ErrorCode::TooLarge, "dense distribution limited to 20 spins");
    const double log_z = brute_force_log_Z(model);
    ExactDistribution dist;
    dist.n = model.graph.n;
    dist.probabilities.assign(1ull << model.graph.n, 0.0);
    for_each_config(model, [&](std::uint32_t config, double energy) {
        dist.probabilities[config] = std::exp(energy - log_z);
    });
    return dist;
}

ExactDistribution brute_force_conditional_distribution(
    const IsingModel& model, const std::vector<std::pair<int, int>>& fixed) {
    model.validate();
    if (model.graph.n > 20)
        fail(ErrorCode::TooLarge, "dense distribution limited to 20 spins");
    ExactDistribution dist;
    dist.n = model.graph.n;
    dist.probabilities.assign(1ull << model.graph.n, 0.0);
    LogSum norm;
    std::uint32_t mask = 0, want = 0;
    for (auto [v, s] : fixed) {
        mask |= 1u << v;
        if (s > 0) want |= 1u << v;
    }
    for_each_config(model, [&](std::uint32_t config, double energy) {
        if ((config & mask) == want) norm.add(energy);
    });
    const double log_zs = norm.value();
    if (log_zs == -std::numeric_limits<double>::infinity())
        fail(ErrorCode::Internal, "empty conditional support");
    for_each_config(model, [&](std::uint32_t config, double energy) {
        if ((config & mask) == want)
            dist.probabilities[config] = std::exp(energy - log_zs);
    });
    return dist;
}

PmEnumeration enumerate_pms(const Graph& g, const std::vector<double>& weights) {
    if (g.n > kMaxBruteVertices)
        fail(ErrorCode::TooLarge, "PM enumeration limited to 24 vertices");
    if (static_cast<int>(weights.size()) != g.edge_count())
        fail(ErrorCode::InvalidInput, "weight vector length != edge count");

    PmEnumeration out;
    LogSum acc;
    if (g.n % 2 != 0) {
        out.log_weight_sum = -std::numeric_limits<double>::infinity();
        return out;
    }

    Adjacency adj(g);
    std::vector<bool> used(g.n, false);
    std::vector<int> chosen;
    double log_weight = 0.0;

    auto recurse = [&](auto&& self) -> void {
        int v = -1;
        for (int i = 0; i < g.n; ++i)
            if (!used[i]) {
                v = i;
                break;
            }
        if (v < 0) {
            acc.add(log_weight);
            std::vector<int> pm = chosen;
            std::sort(pm.begin(), pm.end());
            out.matchings.push_back(std::move(pm));
            return;
        }
        used[v] = true;
        for (const auto& arc : adj[v]) {
            if (used[arc.to]) continue;
            if (weights[arc.edge] <= 0.0)
                fail(ErrorCode::InvalidInput, "PM weights must be positive");
            used[arc.to] = true;
            chosen.push_back(arc.edge);
            log_weight += std::log(weights[arc.edge]);
            self(self);
            log_weight -= std::log(weights[arc.edge]);
            chosen.pop_back();
            used[arc.to] = false;
        }
        used[v] = false;
    };
    recurse(recurse);
    out.log_weight_sum = acc.value();
    return out;
}

Graph grid_graph(int height, int width) {
    Graph g;
    g.n = height * width;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            if (c + 1 < width) g.edges.push_back(make_edge(r * width + c, r * width + c + 1));
            if (r + 1 < height) g.edges.push_back(make_edge(r * width + c, (r + 1) * width + c));
        }
    return g;
}

int grid_vertex(int width, int row, int col) { return row * width + col; }

double grid_transfer_log_Z(int height, int width,
                           const std::vector<double>& couplings,
                           const std::vector<double>& fields,
                           const Graph& grid) {
    if (height > 14) fail(ErrorCode::TooLarge, "transfer oracle limited to height 14");
    if (static_cast<int>(fields.size()) != height * width ||
        static_cast<int>(couplings.size()) != grid.edge_count())
        fail(ErrorCode::InvalidInput, "parameter sizes do not match the grid");

    std::map<std::pair<int, int>, double> j;
    for (int e = 0; e < grid.edge_count(); ++e)
        j[{grid.edges[e].u, grid.edges[e].v}] = couplings[e];
    auto coupling = [&](int a, int b) {
        auto it = j.find({std::min(a, b), std::max(a, b)});
        if (it == j.end()) fail(ErrorCode::InvalidInput, "missing grid edge");
        return it->second;
    };

    const std::size_t states = std::size_t{1} << height;
    std::vector<double> v(states), next(states);
    double log_scale = 0.0;

    auto column_weight = [&](int c, std::uint32_t s) {
        double energy = 0.0;
        for (int r = 0; r < height; ++r)
            energy += fields[grid_vertex(width, r, c)] * spin_of(s, r);
        for (int r = 0; r + 1 < height; ++r)
            energy += coupling(grid_vertex(width, r, c), grid_vertex(width, r + 1, c)) *
                      spin_of(s, r) * spin_of(s, r + 1);
        return energy;
    };

    for (std::uint32_t s = 0; s < states; ++s) v[s] = std::exp(column_weight(0, s));

    for (int c = 1; c < width; ++c) {
        // One row at a time: single-site horizontal transfer.
        for (int r = 0; r < height; ++r) {
            const double jh = coupling(grid_vertex(width, r, c - 1), grid_vertex(width, r, c));
            const double ep = std::exp(jh), em = std::exp(-jh);
            const std::uint32_t bit = 1u << r;
            for (std::uint32_t s = 0; s < states; ++s) {
                if (s & bit) continue;
                const double lo = v[s], hi = v[s | bit];
                next[s] = lo * ep + hi * em;
                next[s | bit] = lo * em + hi * ep;
            }
            std::swap(v, next);
        }
        double peak = 0.0;
        for (std::uint32_t s = 0; s < states; ++s) {
            v[s] *= std::exp(column_weight(c, s));
            peak = std::max(peak, v[s]);
        }
        if (peak <= 0.0) fail(ErrorCode::NumericalBreakdown, "transfer vector vanished");
        for (auto& x : v) x /= peak;
        log_scale += std::log(peak);
    }

    double total = 0.0;
    for (double x : v) total += x;
    return log_scale + std::log(total);
}

double empirical_kl(const ExactDistribution& exact,
                    const std::vector<std::uint32_t>& samples) {
    if (samples.empty()) return 0.0;
    std::vector<double> counts(exact.probabilities.size(), 0.0);
    for (auto s : samples) counts[s] += 1.0;
    const double m = static_cast<double>(samples.size());
    double kl = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0.0) continue;
        const double p_hat = counts[i] / m;
        if (exact.probabilities[i] <= 0.0)
            return std::numeric_limits<double>::infinity();
        kl += p_hat * std::log(p_hat / exact.probabilities[i]);
    }
    return std::max(kl, 0.0);
}

double empirical_tv(const ExactDistribution& exact,
                    const std::vector<std::uint32_t>& samples) {
    std::vector<double> counts(exact.probabilities.size(), 0.0);
    for (auto s : samples) counts[s] += 1.0;
    const double m = samples.empty() ? 1.0 : static_cast<double>(samples.size());
    double l1 = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        l1 += std::abs(counts[i] / m - exact.probabilities[i]);
    return 0.5 * l1;
}

std::uint32_t config_bits(const std::vector<int>& spins) {
    std::uint32_t bits = 0;
    for (std::size_t v = 0; v < spins.size(); ++v)
        if (spins[v] > 0) bits |= 1u << v;
    return bits;
}

} // namespace oracle
} // namespace ising
