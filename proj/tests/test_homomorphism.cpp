#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "graphon/homomorphism.hpp"
#include "graphon/verify.hpp"
#include "oracles.hpp"

using namespace graphon;

namespace {

StepGraphon constant(double p) { return make_step_graphon({{p}}, {1.0}); }
StepGraphon bipartite() { return make_step_graphon({{0, 1}, {1, 0}}, {0.5, 0.5}); }

StepGraphon random_graphon(Rng& rng, std::size_t n_max) {
    const auto n = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(n_max)));
    const auto mode = rng.bit() ? WeightMode::uniform : WeightMode::dirichlet;
    return StepGraphon::from_kernel(random_step_kernel(n, 0.0, 1.0, mode, rng.next_u64()));
}

Motif random_motif(Rng& rng, std::size_t v_max) {
    const auto v = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(v_max)));
    std::vector<Motif::Edge> e;
    for (std::size_t i = 0; i < v; ++i)
        for (std::size_t j = i + 1; j < v; ++j)
            if (rng.uniform() < 0.5) e.emplace_back(i, j);
    return Motif::create(v, std::move(e));
}

} // namespace

TEST(Motif, Canonicalizes) {
    const auto m = Motif::create(3, {{2, 0}, {1, 0}});
    EXPECT_EQ(m.edges(), (std::vector<Motif::Edge>{{0, 1}, {0, 2}}));
    EXPECT_EQ(Motif::cycle(3), Motif::create(3, {{0, 1}, {1, 2}, {0, 2}}));
}

TEST(Motif, RejectsInvalid) {
    EXPECT_THROW(Motif::create(0, {}), ValidationError);
    EXPECT_THROW(Motif::create(2, {{1, 1}}), ValidationError);
    EXPECT_THROW(Motif::create(2, {{0, 2}}), ValidationError);
    EXPECT_THROW(Motif::create(2, {{0, 1}, {1, 0}}), ValidationError);
    EXPECT_THROW(Motif::cycle(2), ValidationError);
}

TEST(HomDensity, Examples) {
    EXPECT_DOUBLE_EQ(hom_density(Motif::edge(), constant(0.5)), 0.5);
    EXPECT_EQ(hom_density(Motif::triangle(), bipartite()), 0.0);
    EXPECT_DOUBLE_EQ(hom_density(Motif::triangle(), constant(0.5)), 0.125);
    EXPECT_NEAR(hom_density(Motif::triangle(), constant(0.3)), 0.027, 1e-16);
}

TEST(HomDensity, IsolatedVerticesContributeOne) {
    const auto g = make_step_graphon({{0.2, 0.9}, {0.9, 0.4}}, {0.3, 0.7});
    EXPECT_DOUBLE_EQ(hom_density(Motif::create(1, {}), g), 1.0);
    EXPECT_NEAR(hom_density(Motif::create(4, {{0, 1}}), g), edge_density(g), 1e-15);
}

TEST(HomDensity, BudgetEnforced) {
    const auto g = StepGraphon::from_kernel(random_step_kernel(11, 0, 1, WeightMode::uniform, 1));
    EXPECT_THROW(hom_density(Motif::path(9), constant(0.5)), BudgetError);
    EXPECT_THROW(hom_density(Motif::path(8), g), BudgetError);
    EXPECT_NO_THROW(hom_density(Motif::path(7), g));
    HomBudget tight{3, 1e9};
    EXPECT_THROW(hom_density(Motif::path(4), constant(0.5), tight), BudgetError);
}

TEST(HomDensity, MatchesOdometerOracle) {
    Rng rng(60);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = random_graphon(rng, 5);
        const auto f = random_motif(rng, 5);
        EXPECT_NEAR(hom_density(f, g), oracle::hom_density(f, g.kernel()), 1e-12);
    }
}

TEST(HomDensity, SingleEdgeEqualsEdgeDensity) {
    Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_graphon(rng, 10);
        EXPECT_NEAR(hom_density(Motif::edge(), g), edge_density(g), 1e-12);
    }
}

TEST(HomDensity, CyclesMatchSpectralSum) {
    Rng rng(62);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = random_graphon(rng, 6);
        for (std::size_t k : {3U, 4U, 5U})
            EXPECT_NEAR(hom_density(Motif::cycle(k), g), cycle_density_spectral(k, g), 1e-9);
    }
}

TEST(HomDensity, UnitIntervalAndMultiplicative) {
    Rng rng(63);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = random_graphon(rng, 4);
        const auto a = random_motif(rng, 3);
        const auto b = random_motif(rng, 3);
        const double ta = hom_density(a, g), tb = hom_density(b, g);
        const double tab = hom_density(Motif::disjoint_union(a, b), g);
        EXPECT_GE(ta, 0.0);
        EXPECT_LE(ta, 1.0);
        EXPECT_NEAR(tab, ta * tb, 1e-12);
    }
}

TEST(HomDensity, InvariantUnderRelabeling) {
    Rng rng(64);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = random_graphon(rng, 5);
        const auto f = random_motif(rng, 5);
        std::vector<std::size_t> perm(f.vertex_count());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(i - 1)))]);
        EXPECT_NEAR(hom_density(f.relabeled(perm), g), hom_density(f, g), 1e-12);
    }
}

TEST(HomDensity, ThreadedSumIsIdentical) {
    const auto g = StepGraphon::from_kernel(random_step_kernel(9, 0, 1, WeightMode::dirichlet, 5));
    EXPECT_EQ(hom_density(Motif::cycle(5), g, {}, 1), hom_density(Motif::cycle(5), g, {}, 4));
}

TEST(EdgeDensity, Examples) {
    EXPECT_DOUBLE_EQ(edge_density(constant(0.5)), 0.5);
    EXPECT_DOUBLE_EQ(edge_density(bipartite()), 0.5);
    EXPECT_EQ(edge_density(constant(0.0)), 0.0);
}

TEST(ErrataGap, Examples) {
    const auto w = errata_gap(constant(0.5));
    EXPECT_EQ(w.t_c2, 0.5);
    EXPECT_EQ(w.hs_squared, 0.25);
    EXPECT_EQ(w.gap, 0.25);
    const auto z = errata_gap(constant(0.0));
    EXPECT_EQ(z.t_c2, 0.0);
    EXPECT_EQ(z.hs_squared, 0.0);
    EXPECT_EQ(z.gap, 0.0);
    EXPECT_EQ(errata_gap(bipartite()).gap, 0.0);
}

TEST(ErrataGap, NonNegativeAndZeroExactlyForZeroOneGraphons) {
    Rng rng(65);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(rng.integer(1, 8));
        const bool binary = trial % 2 == 0;
        SquareMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                m(i, j) = m(j, i) = binary ? (rng.bit() ? 1.0 : 0.0) : rng.uniform();
        const auto g = StepGraphon::from_kernel(StepKernel::create(std::move(m), uniform_weights(n)));
        const auto w = errata_gap(g);
        EXPECT_EQ(w.gap, w.t_c2 - w.hs_squared);
        EXPECT_GE(w.gap, -1e-12);
        const bool zero_one = std::ranges::all_of(g.kernel().values().data(), [](double v) { return v == 0 || v == 1; });
        EXPECT_EQ(std::abs(w.gap) <= 1e-12, zero_one) << "trial " << trial;
    }
}

TEST(CycleDensitySpectral, Examples) {
    EXPECT_NEAR(cycle_density_spectral(3, constant(0.5)), 0.125, 1e-15);
    EXPECT_NEAR(cycle_density_spectral(3, bipartite()), 0.0, 1e-15);
    EXPECT_NEAR(cycle_density_spectral(4, bipartite()), 0.125, 1e-15);
    EXPECT_THROW(cycle_density_spectral(2, bipartite()), ValidationError);
}
