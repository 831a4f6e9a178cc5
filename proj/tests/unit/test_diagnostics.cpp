#include <doctest.h>

#include <sstream>

#include "pottsflow/diagnostics.hpp"
#include "pottsflow/error.hpp"

using namespace pottsflow;

// Frozen values come from tests/oracles/derive.py.

TEST_CASE("Glauber step on a single edge") {
    const OrientedMultigraph g = OrientedMultigraph::from_edge_list(2, {{0, 1}});
    for (double x : {0.25, 0.5}) {
        const Distribution law = pushforward(
            Weighted<PottsConfig>{{PottsConfig{2, {1, 1}}, 1.0L}},
            [&](PottsConfig s, BranchEnumerator& src) {
                potts_glauber_step(s, g, x, src);
                return s;
            },
            potts_key);
        CHECK(law.size() == 3);
        CHECK(static_cast<double>(law.at({2, 1})) == doctest::Approx(0.5 * x / (1 + x)).epsilon(1e-15));
        CHECK(static_cast<double>(law.at({1, 1})) == doctest::Approx(1.0 / (1 + x)).epsilon(1e-15));
    }
}

TEST_CASE("ghost neighbours pull towards colour q") {
    const OrientedMultigraph g = OrientedMultigraph::from_edge_list(1, {});
    const std::vector<std::uint32_t> ghosts{4};
    const Distribution law = pushforward(
        Weighted<PottsConfig>{{PottsConfig{3, {1}}, 1.0L}},
        [&](PottsConfig s, BranchEnumerator& src) {
            potts_glauber_step(s, g, 0.5, src, ghosts);
            return s;
        },
        potts_key);
    const double norm = 1.0 + 2.0 / 16.0;
    CHECK(static_cast<double>(law.at({3})) == doctest::Approx(1.0 / norm).epsilon(1e-15));
    CHECK(static_cast<double>(law.at({1})) == doctest::Approx(1.0 / 16.0 / norm).epsilon(1e-15));
}

TEST_CASE("duality map") {
    const DualityMap map(2, 3);
    CHECK(map.potts_graph().vertex_count() == 4);
    CHECK(map.potts_graph().edge_count() == 4);
    CHECK(map.flow_lattice().gens.size() == 4);
    CHECK(map.ghosts() == std::vector<std::uint32_t>{2, 2, 2, 2});
    const FlowState zero = map.phi(PottsConfig{3, {3, 3, 3, 3}});
    CHECK(zero.support_size() == 0);
    const FlowState one = map.phi(PottsConfig{3, {1, 3, 3, 3}});
    CHECK(one.support_size() == 4);
    CHECK(is_flow(map.phi(PottsConfig{3, {1, 2, 2, 1}}), map.flow_lattice().graph));
    CHECK_THROWS_AS(DualityMap(0, 2), InvalidArgument);
    CHECK(DualityMap(3, 2).ghosts() == std::vector<std::uint32_t>{2, 1, 2, 1, 0, 1, 2, 1, 2});
}

TEST_CASE("verify_duality") {
    for (std::size_t L : {1u, 2u}) {
        for (Residue q : {2u, 3u}) {
            for (double x : {0.3, 0.7}) {
                const DualityReport rep = verify_duality(L, q, x);
                CAPTURE(L);
                CAPTURE(q);
                CHECK(rep.bijective);
                CHECK(rep.ok);
                CHECK(rep.potts_states == rep.flow_states);
                CHECK(rep.max_entry_difference < 1e-15L);
            }
        }
    }
    CHECK(verify_duality(3, 2, 0.5).ok);
    CHECK_THROWS_AS(verify_duality(4, 2, 0.5), TooLarge);
    CHECK_THROWS_AS(verify_duality(2, 2, 1.0), InvalidArgument);
}

TEST_CASE("tv curve on the 3x3 grid") {
    const Lattice lat = grid_faces(3, 3);
    TvCurveSpec spec;
    spec.xs = {0.3, 0.6, 0.9};
    spec.t_max = 30;
    const std::vector<TvPoint> pts = tv_curve(lat.graph, lat.gens, 2, spec);
    REQUIRE(pts.size() == 3 * 31);
    auto at = [&](std::size_t xi, std::size_t t) { return static_cast<double>(pts[xi * 31 + t].tv); };
    const double expected[3][3] = {{0.034539606260342567, 0.0098207652266346403, 3.0289804941185322e-05},
                                   {0.45133239319504681, 0.13343543215162898, 0.0013160982595662044},
                                   {0.8858894873438814, 0.20389155028312103, 0.00034441672026877188}};
    const std::size_t ts[3] = {0, 5, 30};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(at(i, ts[j]) == doctest::Approx(expected[i][j]).epsilon(1e-10));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t t = 1; t <= 30; ++t) CHECK(at(i, t) <= at(i, t - 1) + 1e-15);

    std::ostringstream csv;
    write_tv_csv(csv, pts);
    CHECK(csv.str().rfind("t,x,tv\n0,0.3,", 0) == 0);

    TvCurveSpec joint;
    joint.chain = ChainKind::Joint;
    joint.xs = {0.95};
    joint.t_max = 5;
    const std::vector<TvPoint> jp = tv_curve(lat.graph, lat.gens, 2, joint);
    CHECK(jp.size() == 6);
    CHECK(jp.back().tv < jp.front().tv);
    CHECK_THROWS_AS(tv_curve(lat.graph, lat.gens, 2, TvCurveSpec{}), InvalidArgument);
}
