#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "qwgtlab/spin_glass.hpp"

using namespace qwgtlab;
using testutil::SplitMix64;

namespace {

const double kLn2 = std::log(2.0);

SpinGlassInstance<double> real_inst(Graph g, Gf2Vector w, double beta_j) {
    return {std::move(g), {std::move(w)}, Coupling<double>::from_beta_j(beta_j)};
}

SpinGlassInstance<Rational> exact_inst(Graph g, Gf2Vector w, Rational lambda) {
    return {std::move(g), {std::move(w)}, Coupling<Rational>::from_lambda(std::move(lambda))};
}

} // namespace

TEST_CASE("energy in units of J") {
    auto edge = Graph(2, {{0, 1}});
    CHECK(energy(edge, {Gf2Vector(1)}, Gf2Vector::from_bits({0, 0})) == -1);
    CHECK(energy(edge, {Gf2Vector(1)}, Gf2Vector::from_bits({0, 1})) == 1);
    CHECK(energy(testutil::triangle(), {Gf2Vector::from_bits({1, 1, 1})}, Gf2Vector(3)) == 3);
    CHECK_THROWS_AS(energy(edge, {Gf2Vector(1)}, Gf2Vector(3)), std::invalid_argument);
}

TEST_CASE("direct partition sums") {
    CHECK(partition_direct(real_inst(Graph(2, {{0, 1}}), Gf2Vector(1), kLn2)) ==
          doctest::Approx(5.0).epsilon(1e-13));
    CHECK(partition_direct(real_inst(testutil::triangle(), Gf2Vector(3), kLn2)) ==
          doctest::Approx(19.0).epsilon(1e-13));
    CHECK(partition_direct(real_inst(testutil::triangle(), Gf2Vector::from_bits({1, 1, 1}),
                                     kLn2)) == doctest::Approx(12.25).epsilon(1e-13));

    SUBCASE("guard") {
        EvalLimits lim;
        lim.oracle_bits = 4;
        CHECK_THROWS_AS(partition_direct(real_inst(testutil::path_graph(6), Gf2Vector(5), 0.5),
                                         lim),
                        CapExceeded);
    }

    SUBCASE("exact-rational direct sum matches the closed value") {
        // lambda = 3/5 is tanh(ln 2); the triangle value is exactly 19
        auto z = partition_direct(exact_inst(testutil::triangle(), Gf2Vector(3), Rational(3, 5)));
        CHECK(z == Rational(19));
    }
}

TEST_CASE("Gibbs probabilities") {
    auto edge = real_inst(Graph(2, {{0, 1}}), Gf2Vector(1), kLn2);
    CHECK(gibbs_probability(edge, Gf2Vector::from_bits({0, 0})) ==
          doctest::Approx(0.4).epsilon(1e-13));

    SUBCASE("infinite temperature is uniform") {
        auto inst = real_inst(testutil::triangle(), Gf2Vector(3), 0.0);
        Gf2Vector s(3);
        s.flip(1);
        CHECK(gibbs_probability(inst, s) == doctest::Approx(0.125).epsilon(1e-13));
    }

    SUBCASE("global flip symmetry and normalization") {
        SplitMix64 rng(41);
        auto g = testutil::random_multigraph(rng, 4, 6);
        auto inst = real_inst(g, testutil::random_vector(rng, 6), 0.8);
        double total = 0.0;
        for (std::uint64_t mask = 0; mask < 16; ++mask) {
            Gf2Vector s(4), flipped(4);
            for (std::size_t i = 0; i < 4; ++i) {
                bool bit = (mask >> i) & 1u;
                s.set(i, bit);
                flipped.set(i, !bit);
            }
            double p = gibbs_probability(inst, s);
            CHECK(p == doctest::Approx(gibbs_probability(inst, flipped)).epsilon(1e-12));
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Boltzmann weight via the all-subgraph expansion") {
    auto edge = real_inst(Graph(2, {{0, 1}}), Gf2Vector(1), kLn2);
    CHECK(boltzmann_weight_fourier(edge, Gf2Vector(2)) ==
          doctest::Approx(2.0).epsilon(1e-13)); // e^{beta J}

    SUBCASE("zero coupling weight is 1 for every configuration") {
        auto inst = real_inst(testutil::triangle(), Gf2Vector(3), 0.0);
        Gf2Vector s(3);
        s.flip(0);
        CHECK(boltzmann_weight_fourier(inst, s) == doctest::Approx(1.0));
    }

    SUBCASE("no edges: the weight is exactly 1") {
        auto inst = real_inst(Graph(2, {}), Gf2Vector(0), 1.3);
        CHECK(boltzmann_weight_fourier(inst, Gf2Vector(2)) == 1.0);
    }

    SUBCASE("triangle ground state weight") {
        auto inst = real_inst(testutil::triangle(), Gf2Vector(3), kLn2);
        CHECK(boltzmann_weight_fourier(inst, Gf2Vector(3)) ==
              doctest::Approx(8.0).epsilon(1e-13));
    }

    SUBCASE("equals exp(-beta H) on random instances") {
        SplitMix64 rng(42);
        for (int trial = 0; trial < 20; ++trial) {
            auto g = testutil::random_multigraph(rng, rng.range(2, 5), rng.range(1, 8));
            auto inst = real_inst(g, testutil::random_vector(rng, g.num_edges()),
                                  rng.uniform(0.1, 1.5));
            auto s = testutil::random_vector(rng, g.num_vertices());
            double direct = std::exp(-*inst.coupling.beta_j *
                                     static_cast<double>(energy(g, inst.bonds, s)));
            CHECK(boltzmann_weight_fourier(inst, s) ==
                  doctest::Approx(direct).epsilon(1e-11));
        }
    }
}

TEST_CASE("double Walsh-Hadamard transform") {
    CHECK(partition_double_transform(real_inst(Graph(2, {{0, 1}}), Gf2Vector(1), kLn2)) ==
          doctest::Approx(5.0).epsilon(1e-13));
    CHECK(partition_double_transform(real_inst(testutil::triangle(), Gf2Vector(3), kLn2)) ==
          doctest::Approx(19.0).epsilon(1e-13));

    SUBCASE("lambda = 0 collapses to 2^|V|") {
        auto inst = real_inst(testutil::path_graph(4), Gf2Vector(3), 0.0);
        CHECK(partition_double_transform(inst) == doctest::Approx(16.0));
    }

    SUBCASE("agrees with the direct sum on random instances") {
        SplitMix64 rng(43);
        for (int trial = 0; trial < 15; ++trial) {
            auto g = testutil::random_multigraph(rng, rng.range(2, 5), rng.range(1, 8));
            auto inst = real_inst(g, testutil::random_vector(rng, g.num_edges()),
                                  rng.uniform(0.1, 1.5));
            CHECK(partition_double_transform(inst) ==
                  doctest::Approx(partition_direct(inst)).epsilon(1e-11));
        }
    }
}

TEST_CASE("kernel-constrained partition sum") {
    SUBCASE("trees have empty cycle space") {
        SplitMix64 rng(44);
        for (std::size_t n = 2; n <= 20; ++n) {
            auto w = testutil::random_vector(rng, n - 1);
            auto inst = real_inst(testutil::path_graph(n), w, 0.7);
            double expect = 2.0 * std::pow(2.0 * std::cosh(0.7), n - 1);
            CHECK(partition_kernel(inst) == doctest::Approx(expect).epsilon(1e-12));
            CHECK(partition_kernel(inst) ==
                  doctest::Approx(testutil::chain_open_z(n, 0.7, w)).epsilon(1e-12));
        }
    }

    SUBCASE("periodic chain against the transfer-matrix oracle") {
        SplitMix64 rng(45);
        for (std::size_t n = 3; n <= 20; ++n) {
            auto w = testutil::random_vector(rng, n);
            double beta_j = rng.uniform(0.2, 1.2);
            auto inst = real_inst(testutil::cycle_graph(n), w, beta_j);
            double lambda = std::tanh(beta_j);
            double sign = (w.popcount() % 2 == 0) ? 1.0 : -1.0;
            double closed_form = std::pow(2.0 * std::cosh(beta_j), static_cast<double>(n)) *
                                 (1.0 + sign * std::pow(lambda, static_cast<double>(n)));
            double z = partition_kernel(inst);
            CHECK(z == doctest::Approx(closed_form).epsilon(1e-12));
            CHECK(z == doctest::Approx(testutil::chain_closed_z(n, beta_j, w)).epsilon(1e-12));
        }
    }

    SUBCASE("triangle in exact arithmetic") {
        CHECK(partition_kernel(exact_inst(testutil::triangle(), Gf2Vector(3),
                                          Rational(3, 5))) == Rational(19));
        CHECK(partition_kernel(exact_inst(testutil::triangle(),
                                          Gf2Vector::from_bits({1, 1, 1}), Rational(3, 5))) ==
              Rational(49, 4));
    }

    SUBCASE("zero-temperature singularity") {
        auto inst = SpinGlassInstance<double>{testutil::triangle(), {Gf2Vector(3)},
                                              Coupling<double>::from_lambda(1.0)};
        CHECK_THROWS_WITH_AS(partition_kernel(inst), doctest::Contains("singularity"),
                             DomainError);
        CHECK_THROWS_AS(partition_kernel(exact_inst(testutil::triangle(), Gf2Vector(3),
                                                    Rational(7, 5))),
                        DomainError);
    }

    SUBCASE("no edges and no vertices") {
        CHECK(partition_kernel(real_inst(Graph(3, {}), Gf2Vector(0), 0.9)) == 8.0);
        CHECK(partition_kernel(real_inst(Graph(0, {}), Gf2Vector(0), 0.9)) == 1.0);
    }
}

TEST_CASE("bridge between the partition function and the weight enumerator") {
    SUBCASE("single ferromagnetic edge at lambda 3/5") {
        auto [lhs, rhs] = qwgt_bridge(exact_inst(Graph(2, {{0, 1}}), Gf2Vector(1),
                                                 Rational(3, 5)));
        CHECK(lhs == Rational(1));
        CHECK(rhs == Rational(1));
    }

    SUBCASE("triangle bridge sums at lambda 3/5") {
        auto ferro = qwgt_bridge(exact_inst(testutil::triangle(), Gf2Vector(3), Rational(3, 5)));
        CHECK(ferro.lhs == Rational(152, 125));
        CHECK(ferro.rhs == Rational(152, 125));
        auto anti = qwgt_bridge(exact_inst(testutil::triangle(), Gf2Vector::from_bits({1, 1, 1}),
                                           Rational(3, 5)));
        CHECK(anti.rhs == Rational(98, 125));
    }

    SUBCASE("lhs equals rhs on random real instances") {
        SplitMix64 rng(46);
        for (int trial = 0; trial < 40; ++trial) {
            auto g = testutil::random_multigraph(rng, rng.range(2, 8), rng.range(1, 12));
            auto inst = real_inst(g, testutil::random_vector(rng, g.num_edges()),
                                  rng.uniform(0.1, 2.0));
            auto [lhs, rhs] = qwgt_bridge(inst);
            CHECK(relative_discrepancy(lhs, rhs) < 1e-10);
        }
    }

    SUBCASE("positivity for real lambda in [0, 1)") {
        SplitMix64 rng(47);
        for (int trial = 0; trial < 50; ++trial) {
            auto g = testutil::random_multigraph(rng, rng.range(2, 7), rng.range(1, 10));
            SpinGlassInstance<double> inst{g, {testutil::random_vector(rng, g.num_edges())},
                                           Coupling<double>::from_lambda(rng.uniform(0.0, 0.999))};
            CHECK(qwgt_bridge(inst).rhs > 0.0);
        }
    }
}

TEST_CASE("series expansion by subgraph order") {
    auto tri = exact_inst(testutil::triangle(), Gf2Vector(3), Rational(3, 5));
    auto z = partition_kernel(tri);
    auto res = partition_series(tri, 3);
    REQUIRE(res.partial.size() == 4);
    // order 0: prefactor alone; the 16/25 square root is exact for lambda 3/5
    CHECK(res.partial[0] == Rational(125, 8));
    CHECK(res.partial[1] == res.partial[0]); // no single-edge even subgraph
    CHECK(res.partial[2] == res.partial[0]); // none with two edges either
    CHECK(res.partial[3] == z);
    REQUIRE(res.exact.has_value());
    CHECK(*res.exact == z);

    SUBCASE("truncation below |E| leaves exact unset") {
        CHECK_FALSE(partition_series(tri, 2).exact.has_value());
    }

    SUBCASE("full order equals the kernel sum on random instances") {
        SplitMix64 rng(48);
        for (int trial = 0; trial < 25; ++trial) {
            auto g = testutil::random_multigraph(rng, rng.range(2, 7), rng.range(1, 11));
            auto inst = real_inst(g, testutil::random_vector(rng, g.num_edges()),
                                  rng.uniform(0.1, 1.5));
            auto series = partition_series(inst, g.num_edges());
            REQUIRE(series.exact.has_value());
            CHECK(relative_discrepancy(*series.exact, partition_kernel(inst)) < 1e-12);
        }
    }

    SUBCASE("order-k partials match a weight-filtered kernel enumeration") {
        SplitMix64 rng(49);
        for (int trial = 0; trial < 10; ++trial) {
            auto g = testutil::random_multigraph(rng, rng.range(2, 6), rng.range(1, 9));
            auto w = testutil::random_vector(rng, g.num_edges());
            auto inst = real_inst(g, w, rng.uniform(0.1, 1.0));
            auto series = partition_series(inst, g.num_edges());

            std::vector<double> by_weight(g.num_edges() + 1, 0.0);
            double lambda = inst.coupling.lambda;
            enumerate_kernel(kernel_basis(incidence_matrix(g)), &w, nullptr,
                             [&](const Gf2Vector&, std::size_t wgt, bool parity, bool) {
                                 double term = std::pow(lambda, static_cast<double>(wgt));
                                 by_weight[wgt] += parity ? -term : term;
                             });
            double pref =
                kernel_prefactor(inst.coupling, g.num_vertices(), g.num_edges());
            double running = 0.0;
            for (std::size_t k = 0; k <= g.num_edges(); ++k) {
                running += by_weight[k];
                CHECK(series.partial[k] ==
                      doctest::Approx(pref * running).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("uniform-bond specializations") {
    auto lam = Rational(3, 5);
    auto ferro = partition_uniform(exact_inst(testutil::triangle(), Gf2Vector(3), lam));
    auto anti = partition_uniform(
        exact_inst(testutil::triangle(), Gf2Vector::from_bits({1, 1, 1}), lam));
    CHECK(ferro == Rational(19));
    CHECK(anti == Rational(49, 4));

    SUBCASE("bipartite graphs cannot tell the two apart") {
        for (auto g : {testutil::cycle_graph(4), testutil::cycle_graph(6),
                       testutil::grid_graph(2, 3)}) {
            Gf2Vector all_one(g.num_edges());
            for (std::size_t e = 0; e < g.num_edges(); ++e)
                all_one.flip(e);
            auto zp = partition_uniform(exact_inst(g, Gf2Vector(g.num_edges()), lam));
            auto zm = partition_uniform(exact_inst(g, all_one, lam));
            CHECK(zp == zm);
        }
    }

    SUBCASE("lambda = 0 gives 2^|V|") {
        auto inst = real_inst(testutil::triangle(), Gf2Vector(3), 0.0);
        CHECK(partition_uniform(inst) == doctest::Approx(8.0));
    }

    SUBCASE("mixed bonds are rejected") {
        CHECK_THROWS_WITH_AS(
            partition_uniform(exact_inst(testutil::triangle(),
                                         Gf2Vector::from_bits({1, 0, 0}), lam)),
            doctest::Contains("all-zero or all-one"), DomainError);
    }

    SUBCASE("matches partition_kernel on both uniform cases") {
        SplitMix64 rng(50);
        for (int trial = 0; trial < 20; ++trial) {
            auto g = testutil::random_multigraph(rng, rng.range(2, 7), rng.range(1, 10));
            Gf2Vector w(g.num_edges());
            if (rng.bit())
                for (std::size_t e = 0; e < g.num_edges(); ++e)
                    w.flip(e);
            auto inst = real_inst(g, w, rng.uniform(0.1, 1.5));
            CHECK(partition_uniform(inst) ==
                  doctest::Approx(partition_kernel(inst)).epsilon(1e-12));
        }
    }
}

TEST_CASE("magnetic field via star augmentation") {
    SUBCASE("single spin in a field") {
        auto inst = real_inst(Graph(1, {}), Gf2Vector(0), kLn2);
        CHECK(partition_with_field(inst, Gf2Vector(1)) ==
              doctest::Approx(2.5).epsilon(1e-13));
    }

    SUBCASE("two free spins in a uniform field") {
        auto inst = real_inst(Graph(2, {}), Gf2Vector(0), 0.9);
        double one_spin = 2.0 * std::cosh(0.9);
        CHECK(partition_with_field(inst, Gf2Vector(2)) ==
              doctest::Approx(one_spin * one_spin).epsilon(1e-12));
    }

    SUBCASE("triangle with a field against the direct Gibbs sum") {
        auto tri = testutil::triangle();
        auto inst = real_inst(tri, Gf2Vector(3), kLn2);
        CHECK(partition_with_field(inst, Gf2Vector(3)) ==
              doctest::Approx(testutil::field_direct_z(tri, Gf2Vector(3), kLn2, Gf2Vector(3)))
                  .epsilon(1e-12));
    }

    SUBCASE("random graphs and field signs against the direct sum") {
        SplitMix64 rng(51);
        for (int trial = 0; trial < 25; ++trial) {
            auto g = testutil::random_multigraph(rng, rng.range(2, 8), rng.range(1, 12));
            auto w = testutil::random_vector(rng, g.num_edges());
            auto signs = testutil::random_vector(rng, g.num_vertices());
            double beta_j = rng.uniform(0.1, 1.5);
            auto inst = real_inst(g, w, beta_j);
            CHECK(relative_discrepancy(partition_with_field(inst, signs),
                                       testutil::field_direct_z(g, w, beta_j, signs)) < 1e-10);
        }
    }
}

TEST_CASE("coupling conversions") {
    CHECK(lambda_of(kLn2) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(lambda_of(0.0) == 0.0);
    CHECK(theta_of(0.0, 5) == 1.0);

    auto lam = lambda_of(Complex(0.0, std::acos(-1.0) / 4.0));
    CHECK(lam.real() == doctest::Approx(0.0));
    CHECK(lam.imag() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("complex couplings run through every path") {
    Complex beta_j(0.35, 0.6);
    SplitMix64 rng(52);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = testutil::random_multigraph(rng, rng.range(2, 5), rng.range(1, 7));
        SpinGlassInstance<Complex> inst{g, {testutil::random_vector(rng, g.num_edges())},
                                        Coupling<Complex>::from_beta_j(beta_j)};
        Complex direct = partition_direct(inst);
        CHECK(relative_discrepancy(partition_kernel(inst), direct) < 1e-11);
        CHECK(relative_discrepancy(partition_double_transform(inst), direct) < 1e-11);
    }
}

TEST_CASE("all methods agree on random instances") {
    SplitMix64 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = testutil::random_multigraph(rng, rng.range(2, 8), rng.range(1, 12));
        auto inst = real_inst(g, testutil::random_vector(rng, g.num_edges()),
                              rng.uniform(0.1, 2.0));
        double direct = partition_direct(inst);
        std::vector<double> others{partition_double_transform(inst), partition_kernel(inst),
                                   *partition_series(inst, g.num_edges()).exact};
        auto [lhs, rhs] = qwgt_bridge(inst);
        others.push_back(rhs * kernel_prefactor(inst.coupling, g.num_vertices(),
                                                g.num_edges()));
        for (double z : others)
            CHECK(relative_discrepancy(direct, z) < 1e-10);
    }
}

TEST_CASE("gauge invariance of the partition function, exact") {
    SplitMix64 rng(54);
    const Rational lambdas[] = {Rational(3, 5), Rational(5, 13), Rational(-3, 5),
                                Rational(8, 17)};
    for (int trial = 0; trial < 50; ++trial) {
        auto g = testutil::random_multigraph(rng, rng.range(2, 8), rng.range(1, 12));
        BondConfig bonds{testutil::random_vector(rng, g.num_edges())};
        auto v = testutil::random_vector(rng, g.num_vertices());
        auto lam = lambdas[rng.below(4)];
        auto inst = exact_inst(g, bonds.w, lam);
        auto flipped = exact_inst(g, gauge_transform(g, bonds, v).w, lam);
        CHECK(partition_kernel(inst) == partition_kernel(flipped));
    }
}

TEST_CASE("partition function is invariant under vertex relabeling") {
    SplitMix64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        auto nv = static_cast<std::size_t>(rng.range(2, 8));
        auto g = testutil::random_multigraph(rng, static_cast<long>(nv), rng.range(1, 10));
        auto w = testutil::random_vector(rng, g.num_edges());

        // random permutation of vertex labels
        std::vector<std::uint32_t> perm(nv);
        for (std::size_t i = 0; i < nv; ++i)
            perm[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = nv; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.below(i)]);

        std::vector<Graph::Edge> edges;
        for (auto [i, j] : g.edges())
            edges.emplace_back(perm[i], perm[j]);
        Graph relabeled(nv, std::move(edges));

        auto a = exact_inst(g, w, Rational(3, 5));
        auto b = exact_inst(relabeled, w, Rational(3, 5));
        CHECK(partition_kernel(a) == partition_kernel(b));
    }
}
