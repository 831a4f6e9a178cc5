#include <doctest.h>

#include <cmath>

#include "pottsflow/counting.hpp"
#include "pottsflow/error.hpp"
#include "pottsflow/exact.hpp"
#include "pottsflow/lattice.hpp"
#include "support/graphs.hpp"

using namespace pottsflow;
using namespace pottsflow::testing;

// Frozen values come from tests/oracles/derive.py.

TEST_CASE("contraction sequence") {
    const Lattice lat = grid_faces(3, 3);
    const auto seq = contraction_sequence(lat.graph);
    CHECK(seq.size() == 8);
    CHECK(seq.front() == 0);
    CHECK(contraction_sequence(triangle()).size() == 2);
    CHECK(contraction_sequence(triangle_with_loop()).size() == 2);
    CHECK(contraction_sequence(OrientedMultigraph::from_edge_list(4, {})).empty());
    // Two components of sizes 3 and 2.
    CHECK(contraction_sequence(OrientedMultigraph::from_edge_list(5, {{0, 1}, {1, 2}, {3, 4}})).size() == 3);

    OrientedMultigraph cur = lat.graph;
    for (EdgeId e : seq) {
        REQUIRE(cur.edge_live(e));
        REQUIRE_FALSE(cur.is_loop(e));
        cur = cur.contract(e);
    }
    CHECK(cur.vertex_count() == 1);
    CHECK(cur.edge_count() == cycle_rank(lat.graph));
}

TEST_CASE("default plan") {
    CHECK(default_samples_per_ratio(8, 0.1) == 38400);
    CHECK(default_samples_per_ratio(1, 0.5) == 192);
    CHECK(default_delta_per_sample(8, 0.1) == doctest::Approx(0.1 / 128));
}

TEST_CASE("contraction ratios are expectations of the edge statistic") {
    // Z(G/e)/Z(G) = E[1/x - (1-x)/x 1{f(e) = 0}] under mu_flow on G.
    for (const OrientedMultigraph& g : {triangle(), glued_triangles(), k4(), grid_faces(2, 3).graph}) {
        for (Residue q : {2u, 3u}) {
            for (double x : {0.4, 0.9}) {
                const long double z = exact_z_flow(g, q, x);
                OrientedMultigraph cur = g;
                long double product = 1.0L;
                for (EdgeId e : contraction_sequence(g)) {
                    long double zero_mass = 0.0L;
                    for (const auto& [f, p] : weighted_flows(cur, q, x)) zero_mass += f.in_support(e) ? 0.0L : p;
                    const long double y = 1.0L / x - (1.0L - x) / x * zero_mass;
                    const OrientedMultigraph next = cur.contract(e);
                    CHECK(static_cast<double>(y) ==
                          doctest::Approx(static_cast<double>(exact_z_flow(next, q, x) / exact_z_flow(cur, q, x)))
                              .epsilon(1e-12));
                    product *= y;
                    cur = next;
                }
                // Only loops remain: each carries any residue.
                const long double top = std::pow(1.0L + (q - 1.0L) * x, static_cast<long double>(cycle_rank(g)));
                CHECK(static_cast<double>(top / product) == doctest::Approx(static_cast<double>(z)).epsilon(1e-12));
            }
        }
    }
    // Triangle, q = 2, x = 1/2: Z(G/e)/Z(G) = 10/9.
    const OrientedMultigraph t = triangle();
    CHECK(static_cast<double>(exact_z_flow(t.contract(0), 2, 0.5) / exact_z_flow(t, 2, 0.5)) ==
          doctest::Approx(10.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("edgeless graph") {
    const OrientedMultigraph g = OrientedMultigraph::from_edge_list(3, {});
    const EstimateReport r = estimate_z_flow(g, EvenGenSet(0, {}), 2, 0.5, {});
    CHECK(r.zeta == 1.0);
    CHECK(r.ratios.empty());
}

TEST_CASE("range checks") {
    const OrientedMultigraph t = triangle();
    const EvenGenSet gens = triangle_gens();
    CHECK_THROWS_AS(estimate_z_flow(t, gens, 2, 0.3, {}), OutOfRange);
    CHECK_THROWS_AS(estimate_z_flow(t, gens, 2, 1.0, {}), OutOfRange);
    CHECK_THROWS_AS(estimate_z_potts(t, gens, 2, 1.0, {}), OutOfRange);
    EstimateConfig bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(estimate_z_flow(t, gens, 2, 0.5, bad), InvalidArgument);
    // Grid faces need x > 0.6 for the flow chain.
    const Lattice lat = grid_faces(3, 3);
    CHECK_THROWS_AS(estimate_z_flow(lat.graph, lat.gens, 2, 0.5, {}), OutOfRange);
    RatioPlan plan;
    CHECK_THROWS_AS(estimate_ratio(triangle_with_loop(), gens, 3, 2, 0.5, plan), InvalidArgument);
}

TEST_CASE("estimates are independent of the thread count") {
    const Lattice lat = grid_faces(3, 3);
    EstimateConfig cfg;
    cfg.samples_per_ratio = 700;
    cfg.seed = 99;
    cfg.threads = 1;
    const EstimateReport one = estimate_z_flow(lat.graph, lat.gens, 2, 0.9, cfg);
    cfg.threads = 4;
    const EstimateReport four = estimate_z_flow(lat.graph, lat.gens, 2, 0.9, cfg);
    CHECK(one.zeta == four.zeta);
    REQUIRE(one.ratios.size() == four.ratios.size());
    for (std::size_t i = 0; i < one.ratios.size(); ++i) CHECK(one.ratios[i].zero_on_edge == four.ratios[i].zero_on_edge);
    cfg.seed = 100;
    CHECK(estimate_z_flow(lat.graph, lat.gens, 2, 0.9, cfg).zeta != one.zeta);
}

TEST_CASE("estimates land near the exact value") {
    const OrientedMultigraph t = triangle();
    const EvenGenSet gens = triangle_gens();
    EstimateConfig cfg;
    cfg.seed = 1;
    cfg.threads = 4;
    const EstimateReport flow = estimate_z_flow(t, gens, 2, 0.5, cfg);
    CHECK(flow.samples_per_ratio == 9600);
    CHECK(std::fabs(std::log(flow.zeta / 1.125)) < 0.1);

    const EstimateReport potts = estimate_z_potts(t, gens, 2, 3.0, cfg);
    CHECK(std::fabs(std::log(potts.zeta / 72.0)) < 0.1);

    cfg.sampler = SamplerKind::Joint;
    cfg.samples_per_ratio = 2000;
    const EstimateReport joint = estimate_z_flow(t, gens, 2, 0.95, cfg);
    CHECK(std::fabs(std::log(joint.zeta / static_cast<double>(exact_z_flow(t, 2, 0.95)))) < 0.1);

    cfg.sampler = SamplerKind::Flow;
    cfg.median_of = 3;
    cfg.samples_per_ratio = 1000;
    const EstimateReport med = estimate_z_flow(t, gens, 2, 0.5, cfg);
    CHECK(med.replicate_zetas.size() == 3);
}
