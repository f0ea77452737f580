#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/error.hpp"
#include "ising/oracle.hpp"
#include "ising/rng.hpp"

#include <cmath>

using namespace ising;
using namespace ising::oracle;

TEST_CASE("brute force partition function on tiny models") {
    // Single free spin.
    IsingModel one(Graph(1, {}), {});
    CHECK(brute_force_log_Z(one) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // K2 with J = 1: Z = 2 e^1 + 2 e^-1 = 4 cosh 1.
    IsingModel k2(Graph(2, {{0, 1}}), {1.0});
    CHECK(brute_force_log_Z(k2) ==
          doctest::Approx(std::log(4.0 * std::cosh(1.0))).epsilon(1e-12));

    // Triangle with all J = 0.5: Z = 2 e^{1.5} + 6 e^{-0.5}.
    IsingModel k3(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), {0.5, 0.5, 0.5});
    CHECK(brute_force_log_Z(k3) ==
          doctest::Approx(std::log(2.0 * std::exp(1.5) + 6.0 * std::exp(-0.5)))
              .epsilon(1e-12));

    // All J = 0: Z = 2^N.
    IsingModel free6(Graph(6, {{0, 1}, {2, 3}}), {0.0, 0.0});
    CHECK(brute_force_log_Z(free6) == doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-12));

    IsingModel big(Graph(25, {}), {});
    CHECK_THROWS_AS(brute_force_log_Z(big), Error);
}

TEST_CASE("brute force marginals") {
    IsingModel k2(Graph(2, {{0, 1}}), {0.7});
    auto m = brute_force_marginals(k2);
    CHECK(m.edge[0] == doctest::Approx(std::tanh(0.7)).epsilon(1e-12));
    CHECK(m.vertex[0] == doctest::Approx(0.0).epsilon(1e-12));

    IsingModel flat(Graph(4, {{0, 1}, {1, 2}, {2, 3}}), {0.0, 0.0, 0.0});
    auto mf = brute_force_marginals(flat);
    for (double x : mf.edge) CHECK(x == doctest::Approx(0.0).epsilon(1e-12));
    for (double x : mf.vertex) CHECK(x == doctest::Approx(0.0).epsilon(1e-12));

    // With a field the vertex marginal follows tanh(mu).
    IsingModel biased(Graph(1, {}), {}, {0.3});
    auto mb = brute_force_marginals(biased);
    CHECK(mb.vertex[0] == doctest::Approx(std::tanh(0.3)).epsilon(1e-12));
}

TEST_CASE("perfect matching enumeration") {
    Graph k2(2, {{0, 1}});
    auto pm2 = enumerate_pms(k2, {3.0});
    CHECK(pm2.matchings.size() == 1);
    CHECK(pm2.log_weight_sum == doctest::Approx(std::log(3.0)).epsilon(1e-12));

    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto pm4 = enumerate_pms(c4, {1.0, 1.0, 1.0, 1.0});
    CHECK(pm4.matchings.size() == 2);
    CHECK(pm4.log_weight_sum == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    auto pmw = enumerate_pms(c4, {2.0, 1.0, 2.0, 1.0});
    CHECK(pmw.log_weight_sum == doctest::Approx(std::log(5.0)).epsilon(1e-12));

    Graph odd(3, {{0, 1}, {1, 2}});
    CHECK(enumerate_pms(odd, {1.0, 1.0}).matchings.empty());
}

TEST_CASE("grid transfer matrix agrees with brute force") {
    // All-zero parameters: Z = 2^(H*H).
    {
        const int h = 3;
        Graph grid = grid_graph(h, h);
        std::vector<double> j(grid.edge_count(), 0.0), mu(h * h, 0.0);
        CHECK(grid_transfer_log_Z(h, h, j, mu, grid) ==
              doctest::Approx(9.0 * std::log(2.0)).epsilon(1e-12));
    }
    // Random parameters, H in {2,3,4}: cross-check against enumeration.
    Rng rng(12345);
    for (int h = 2; h <= 4; ++h) {
        Graph grid = grid_graph(h, h);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> j(grid.edge_count()), mu(h * h);
            for (auto& x : j) x = rng.next_normal(0.0, 0.8);
            for (auto& x : mu) x = rng.next_uniform(-0.5, 0.5);
            IsingModel model(grid, j, mu);
            const double exact = brute_force_log_Z(model);
            const double transfer = grid_transfer_log_Z(h, h, j, mu, grid);
            CHECK(transfer == doctest::Approx(exact).epsilon(1e-10));
        }
    }
}

TEST_CASE("distributions, KL, and TV") {
    IsingModel m(Graph(2, {{0, 1}}), {0.4});
    auto dist = brute_force_distribution(m);
    dist.validate();

    // Empirical distribution equal to exact: KL and TV are zero.
    std::vector<std::uint32_t> samples;
    IsingModel flat(Graph(2, {{0, 1}}), {0.0});
    auto uniform = brute_force_distribution(flat);
    for (std::uint32_t s = 0; s < 4; ++s)
        for (int rep = 0; rep < 25; ++rep) samples.push_back(s);
    CHECK(empirical_kl(uniform, samples) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(empirical_tv(uniform, samples) == doctest::Approx(0.0).epsilon(1e-12));

    // Uniform exact on 4 states, point-mass empirical: KL = log 4.
    std::vector<std::uint32_t> point(50, 2);
    CHECK(empirical_kl(uniform, point) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(empirical_tv(uniform, point) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("conditional distribution restricts support") {
    IsingModel m(Graph(3, {{0, 1}, {1, 2}}), {0.3, -0.4});
    auto cond = brute_force_conditional_distribution(m, {{0, +1}});
    double total = 0.0;
    for (std::uint32_t s = 0; s < 8; ++s) {
        if (!(s & 1u)) CHECK(cond.probabilities[s] == 0.0);
        total += cond.probabilities[s];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}
