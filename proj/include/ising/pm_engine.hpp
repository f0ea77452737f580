#pragma once

#include "ising/embedding.hpp"
#include "ising/rng.hpp"
#include "ising/separator.hpp"

#include <memory>
#include <vector>

namespace ising {

/// Weighted perfect-matching model over an embedded planar graph with
/// maximum degree 3 and strictly positive edge weights.
struct PMModel {
    EmbeddedGraph embedded;
    std::vector<double> weights;

    void validate() const;
};

/// Orientation with every face (one per component left free) having an odd
/// number of aligned edges; Pfaffian for planar graphs.
/// oriented[e] == true means edges[e].u -> edges[e].v.
std::vector<bool> pfaffian_orient(const EmbeddedGraph& embedded);

namespace detail {

struct Mat2 {
    double a = 0, b = 0, c = 0, d = 0; // [[a b][c d]]

    double det() const { return a * d - b * c; }
    Mat2 inverse() const {
        const double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2& operator-=(const Mat2& o) {
        a -= o.a;
        b -= o.b;
        c -= o.c;
        d -= o.d;
        return *this;
    }
    double max_abs() const;
};

struct Vec2 {
    double x = 0, y = 0;
};

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}

} // namespace detail

/// Kasteleyn system: PM-aligned column-swapped matrix, nested-dissection
/// block order, sparse 2x2-block LU in log-magnitude form.
class KasteleynSolver {
public:
    /// `base_pm` (edge ids) must be a perfect matching; `forced_last`
    /// vertices are pinned to the tail of the elimination order.
    KasteleynSolver(const EmbeddedGraph& embedded, const std::vector<double>& weights,
                    const std::vector<bool>& oriented, const std::vector<int>& base_pm,
                    const std::vector<int>& forced_last = {});

    int vertex_count() const { return n_; }
    double log_partition() const; // log of the weighted PM sum

    /// Entry of the scaled K^{-1} (vertex space); multiply by the scaled
    /// weight to get an edge probability.
    double inverse_entry(int vertex_row, int vertex_col) const;

    /// Trailing t x t block of Kbar^{-1} (position space), row-major.
    std::vector<double> trailing_inverse(int t) const;

    int position_of(int vertex) const { return pos_[vertex]; }
    double weight_scale() const { return log_scale_; } // log s applied per edge
    int forced_tail_size() const { return forced_tail_size_; }

private:
    void build_structure(const EmbeddedGraph& embedded, const std::vector<int>& base_pm,
                         const std::vector<int>& forced_last);
    void build_matrix(const EmbeddedGraph& embedded, const std::vector<double>& weights,
                      const std::vector<bool>& oriented);
    void symbolic();
    void factorize();
    std::vector<detail::Vec2> solve_column(int position) const;

    int n_ = 0, m_ = 0;
    int forced_tail_size_ = 0;
    double log_scale_ = 0.0;
    double log_abs_det_ = 0.0; // of the scaled Kbar
    std::vector<int> order_, pos_;

    std::vector<std::vector<int>> a_rows_;
    std::vector<std::vector<detail::Mat2>> a_vals_;
    std::vector<std::vector<int>> lpat_;
    std::vector<std::vector<detail::Mat2>> lval_;
    std::vector<std::vector<int>> upper_;
    std::vector<std::vector<detail::Mat2>> uval_;
    std::vector<std::vector<std::pair<int, int>>> urow_;
    std::vector<detail::Mat2> pivot_inv_;
};

/// Inference and exact sampling facade over one PM model. Factorizations
/// are cached; sample() implements the separator recursion.
class PmEngine {
public:
    /// base_pm empty: a perfect matching is searched (blossom); absence is
    /// a NoPerfectMatching error.
    explicit PmEngine(PMModel model, std::vector<int> base_pm = {});

    double log_partition() const;
    double edge_probability(int edge) const;
    std::vector<double> all_edge_probabilities() const;
    std::vector<int> sample(Rng& rng) const; // PM as edge ids

    const PMModel& model() const { return model_; }

private:
    struct Context; // one Wilson recursion frame

    void ensure_inference() const;
    void ensure_sampler() const;
    void wilson(Context& ctx, Rng& rng, std::vector<int>& out) const;
    void sample_separator(const Context& ctx, const KasteleynSolver& solver,
                          const std::vector<double>& trailing, int trailing_offset,
                          const std::vector<int>& separator, Rng& rng,
                          std::vector<bool>& saturated, std::vector<int>& out) const;

    PMModel model_;
    std::vector<bool> oriented_;
    std::vector<int> base_pm_;

    mutable std::unique_ptr<KasteleynSolver> inference_;
    mutable std::vector<double> edge_prob_;
    mutable std::vector<bool> edge_prob_known_;

    // Cached top-level sampling structures.
    mutable std::unique_ptr<KasteleynSolver> sampling_solver_;
    mutable Separation separation_;
    mutable std::vector<double> trailing_;
    mutable int trailing_offset_ = 0;
    mutable bool sampler_ready_ = false;
};

} // namespace ising
