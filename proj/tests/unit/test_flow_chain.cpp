#include <doctest.h>

#include <cmath>

#include "pottsflow/error.hpp"
#include "pottsflow/exact.hpp"
#include "pottsflow/flow_chain.hpp"
#include "pottsflow/lattice.hpp"
#include "support/graphs.hpp"

using namespace pottsflow;
using namespace pottsflow::testing;

// Frozen values come from tests/oracles/derive.py.

TEST_CASE("mixing bound") {
    SUBCASE("3x3 grid, x=0.9, d=4, iota=1, delta=0.01") {
        const MixingBound b = flow_mixing_time_bound(4, 0.9, 4, 1, 0.01);
        CHECK(b.in_range);
        CHECK(b.threshold == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(b.xi == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(b.steps == 80);
        CHECK(b.real_bound == doctest::Approx(16.0 / 4.0 * std::log(400.0) / 0.3));
    }
    SUBCASE("triangle, x=0.5, d=2, iota=1") {
        CHECK(flow_mixing_time_bound(1, 0.5, 2, 1, 0.01).steps == 56);
    }
    SUBCASE("at or below the threshold the bound is out of range") {
        const MixingBound at = flow_mixing_time_bound(4, 0.6, 4, 1, 0.01);
        CHECK_FALSE(at.in_range);
        CHECK(at.steps == 0);
        CHECK_FALSE(flow_mixing_time_bound(4, 0.3, 4, 1, 0.01).in_range);
        CHECK(flow_mixing_time_bound(4, 0.3, 4, 1, 0.01).threshold == doctest::Approx(0.6));
    }
    SUBCASE("never below 2r log(r/delta) when d >= 2") {
        for (std::size_t r : {1u, 4u, 50u, 1000u})
            for (std::size_t d : {2u, 3u, 4u, 12u})
                for (std::size_t iota : {1u, 2u, 3u})
                    for (double x : {0.7, 0.9, 0.99}) {
                        const MixingBound b = flow_mixing_time_bound(r, x, d, iota, 0.01);
                        if (!b.in_range) continue;
                        CHECK(b.real_bound >= 2.0 * r * std::log(r / 0.01) - 1e-9);
                    }
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(flow_mixing_time_bound(4, 0.9, 1, 1, 0.01), InvalidArgument);
        CHECK_THROWS_AS(flow_mixing_time_bound(4, 0.9, 4, 0, 0.01), InvalidArgument);
        CHECK_THROWS_AS(flow_mixing_time_bound(4, 0.9, 4, 1, 0.0), InvalidArgument);
        CHECK_THROWS_AS(flow_mixing_time_bound(0, 0.9, 4, 1, 0.01), InvalidArgument);
    }
}

TEST_CASE("heat-bath distribution") {
    std::vector<double> p(3);
    const std::vector<std::size_t> counts{2, 0, 1};
    heat_bath_distribution(counts, 0.5, p);
    // x^{-a} normalised: 4, 1, 2 over 7.
    CHECK(p[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(p[2] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));

    // Adding a constant to every count changes nothing.
    std::vector<double> shifted(3);
    const std::vector<std::size_t> more{12, 10, 11};
    heat_bath_distribution(more, 0.5, shifted);
    for (int i = 0; i < 3; ++i) CHECK(shifted[i] == doctest::Approx(p[i]).epsilon(1e-15));

    // Large counts stay finite.
    std::vector<double> big(2);
    const std::vector<std::size_t> huge{5000, 0};
    heat_bath_distribution(huge, 0.5, big);
    CHECK(big[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(big[1]));
}

TEST_CASE("single step law") {
    const OrientedMultigraph t = triangle();
    const EvenGenSet gens = triangle_gens();
    for (double x : {0.5, 0.2, 0.9}) {
        FlowChain chain(gens, x, 2);
        const Weighted<FlowState> start{{zero_flow(t, 2), 1.0L}};
        const Distribution law = pushforward(
            start,
            [&](FlowState f, BranchEnumerator& src) {
                chain.step(f, src);
                return f;
            },
            flow_key);
        const FlowState full = add_multiple(zero_flow(t, 2), 1, gens[0]);
        const double x3 = x * x * x;
        CHECK(static_cast<double>(law.at(flow_key(full))) == doctest::Approx(x3 / (1 + x3)).epsilon(1e-14));
        if (x == 0.5) CHECK(static_cast<double>(law.at(flow_key(full))) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    }
}

TEST_CASE("one step preserves mu_flow exactly") {
    const Lattice lat = grid_faces(2, 3);
    for (Residue q : {2u, 3u}) {
        const double x = 0.7;
        FlowChain chain(lat.gens, x, q);
        const Weighted<FlowState> pi = weighted_flows(lat.graph, q, x);
        const Distribution after = pushforward(
            pi,
            [&](FlowState f, BranchEnumerator& src) {
                chain.step(f, src);
                return f;
            },
            flow_key);
        CHECK(max_abs_difference(after, to_distribution(pi, flow_key)) < 1e-15L);
    }
}

TEST_CASE("runs keep a valid flow and are reproducible") {
    const Lattice lat = tri_faces(4, 4);
    FlowChain a(lat.gens, 0.8, 4);
    FlowChain b(lat.gens, 0.8, 4);
    FlowState fa = zero_flow(lat.graph, 4);
    FlowState fb = zero_flow(lat.graph, 4);
    Rng ra = Rng::stream(7, StreamPurpose::Chain);
    Rng rb = Rng::stream(7, StreamPurpose::Chain);
    a.run(fa, 5000, ra);
    b.run(fb, 5000, rb);
    CHECK(fa == fb);
    CHECK(is_flow(fa, lat.graph));
    CHECK(fa.support_size() == recount_support(fa));

    Rng rc = Rng::stream(8, StreamPurpose::Chain);
    FlowState fc = zero_flow(lat.graph, 4);
    FlowChain c(lat.gens, 0.8, 4);
    c.run(fc, 5000, rc);
    CHECK_FALSE(fa == fc);
}

TEST_CASE("edge touches are two per generator edge per step") {
    const Lattice lat = grid_faces(5, 5);
    FlowChain chain(lat.gens, 0.9, 3);
    FlowState f = zero_flow(lat.graph, 3);
    Rng rng = Rng::stream(1, StreamPurpose::Chain);
    chain.run(f, 1000, rng);
    CHECK(chain.edge_touches() == 2 * 4 * 1000);
}

TEST_CASE("constructor and sample_flow validation") {
    const Lattice lat = grid_faces(3, 3);
    CHECK_THROWS_AS(FlowChain(lat.gens, 0.0, 2), InvalidArgument);
    CHECK_THROWS_AS(FlowChain(lat.gens, 1.0, 2), InvalidArgument);
    CHECK_THROWS_AS(FlowChain(lat.gens, 0.5, 1), InvalidArgument);
    CHECK_THROWS_AS(FlowChain(EvenGenSet(), 0.5, 2), InvalidArgument);

    Rng rng = Rng::stream(3, StreamPurpose::Chain);
    try {
        (void)sample_flow(lat.gens, 0.5, 2, 4, 1, 0.01, rng);
        FAIL("expected OutOfRange");
    } catch (const OutOfRange& e) {
        CHECK(e.threshold() == doctest::Approx(0.6));
    }
    const FlowSample s = sample_flow(lat.gens, 0.9, 2, 4, 1, 0.01, rng);
    CHECK(s.steps == 80);
    CHECK(is_flow(s.flow, lat.graph));
    const FlowSample forced = sample_flow(lat.gens, 0.5, 2, 4, 1, 0.01, rng, 17);
    CHECK(forced.steps == 17);
    CHECK_FALSE(forced.bound.in_range);
}
