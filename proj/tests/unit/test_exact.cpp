#include <doctest.h>

#include <array>
#include <cmath>
#include <map>

#include "pottsflow/error.hpp"
#include "pottsflow/exact.hpp"
#include "pottsflow/flow_chain.hpp"
#include "pottsflow/joint_chain.hpp"
#include "pottsflow/lattice.hpp"
#include "support/graphs.hpp"

using namespace pottsflow;
using namespace pottsflow::testing;

// Frozen values come from tests/oracles/derive.py.

TEST_CASE("BranchEnumerator visits every path once") {
    std::map<std::pair<std::size_t, bool>, long double> law;
    long double total = 0.0L;
    BranchEnumerator::for_each_outcome(
        [](BranchEnumerator& src) {
            const std::size_t i = src.uniform_index(3);
            // Arity depends on the earlier outcome.
            const bool b = i == 2 ? src.bernoulli(0.25) : false;
            return std::make_pair(i, b);
        },
        [&](const std::pair<std::size_t, bool>& r, long double p) {
            law[r] += p;
            total += p;
        });
    CHECK(law.size() == 4);
    CHECK(static_cast<double>(total) == doctest::Approx(1.0).epsilon(1e-18));
    CHECK(static_cast<double>(law.at({2, true})) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

    std::size_t zero_weight = 0;
    const std::array<double, 3> w{1.0, 0.0, 2.0};
    BranchEnumerator::for_each_outcome([&](BranchEnumerator& src) { return src.discrete(w); },
                                       [&](std::size_t i, long double) { zero_weight += i == 1; });
    CHECK(zero_weight == 0);
}

TEST_CASE("exact partition functions") {
    CHECK(static_cast<double>(exact_z_flow(triangle(), 2, 0.5L)) == doctest::Approx(9.0 / 8.0).epsilon(1e-15));
    CHECK(static_cast<double>(exact_z_potts(triangle(), 2, 3.0L)) == doctest::Approx(72.0).epsilon(1e-15));
    CHECK(static_cast<double>(exact_z_potts(triangle(), 2, 2.0L)) == doctest::Approx(28.0).epsilon(1e-15));
    CHECK(static_cast<double>(exact_z_rc(triangle(), 2, 1.0L)) == doctest::Approx(28.0).epsilon(1e-15));
    const Lattice g2 = grid_faces(2, 2);
    CHECK(static_cast<double>(exact_z_potts(g2.graph, 3, 13.0L)) == doctest::Approx(92097.0).epsilon(1e-15));
    const Lattice g3 = grid_faces(3, 3);
    CHECK(static_cast<double>(exact_z_flow(g3.graph, 3, 0.9L)) ==
          doctest::Approx(35.812268678961999).epsilon(1e-14));
}

TEST_CASE("K4 flows over Z_2 by support size") {
    const OrientedMultigraph g = k4();
    std::map<std::size_t, int> hist;
    for_each_flow(g, EdgeSubset::all(g), 2, [&](const FlowState& f) { ++hist[f.support_size()]; });
    CHECK(hist == std::map<std::size_t, int>{{0, 1}, {3, 4}, {4, 3}});
    CHECK(count_flows_bruteforce(g, EdgeSubset::all(g), 2) == 8);
    CHECK(count_flows_bruteforce(g, EdgeSubset::all(g), 3) == 27);
}

TEST_CASE("enumeration limit") {
    const Lattice lat = grid_faces(5, 5);
    CHECK_THROWS_AS(for_each_flow(lat.graph, EdgeSubset::all(lat.graph), 5, [](const FlowState&) {}, 1000),
                    TooLarge);
}

TEST_CASE("identity suite") {
    for (const OrientedMultigraph& g : {triangle(), k4(), double_edge_pendant(), triangle_with_loop(),
                                         glued_triangles(), grid_faces(2, 2).graph}) {
        for (Residue q : {2u, 3u}) {
            const IdentityReport rep = identity_suite(g, q, 0.5);
            CHECK(rep.ok);
            CHECK(rep.witness.empty());
            CHECK(rep.flow_count_failures == 0);
        }
    }
    // 2x2 grid, q = 3.
    const Lattice g2 = grid_faces(2, 2);
    CHECK(static_cast<double>(identity_suite(g2.graph, 3, 0.2).flow_side) ==
          doctest::Approx(50787.0 / 625.0).epsilon(1e-14));
    CHECK(static_cast<double>(identity_suite(g2.graph, 3, 0.5).potts_side) ==
          doctest::Approx(729.0 / 8.0).epsilon(1e-14));
    CHECK(static_cast<double>(identity_suite(g2.graph, 3, 0.8).rc_side) ==
          doctest::Approx(92097.0 / 625.0).epsilon(1e-14));
}

TEST_CASE("sum_of_minima_check") {
    const std::array<long long, 2> a{1, 0};
    const std::array<long long, 2> b{0, 1};
    for (double x : {0.1, 0.5, 0.9}) {
        const SumOfMinimaResult r = sum_of_minima_check(x, 1, a, b);
        CHECK(r.ok);
        // Equality at a = (iota, 0), b = (0, iota).
        CHECK(static_cast<double>(r.sum_of_minima) == doctest::Approx(static_cast<double>(r.bound)).epsilon(1e-14));
    }
    const std::array<long long, 3> c{2, 0, 1};
    const std::array<long long, 3> d{0, 2, 1};
    CHECK(sum_of_minima_check(0.5, 2, c, d).ok);
    CHECK_THROWS_AS(sum_of_minima_check(0.5, 1, c, d), InvalidArgument);
    const std::array<long long, 2> e{1, 1};
    CHECK_THROWS_AS(sum_of_minima_check(0.5, 1, a, e), InvalidArgument);
    CHECK_THROWS_AS(sum_of_minima_check(1.0, 1, a, b), InvalidArgument);

    const std::array<double, 3> xs{0.2, 0.5, 0.8};
    const SumOfMinimaSweep sweep = sum_of_minima_sweep(3, 3, 2, xs);
    CHECK(sweep.ok);
    CHECK(sweep.failures == 0);
    CHECK(sweep.cases > 0);
    CHECK(sweep.min_slack >= -1e-12L);
    CHECK(sweep.equality_max_error < 1e-12L);
}

TEST_CASE("exact flow chain on the 3x3 grid") {
    const Lattice lat = grid_faces(3, 3);
    const SparseChain chain = flow_chain_matrix(lat.graph, lat.gens, 2, 0.9);
    CHECK(chain.size() == 16);
    CHECK(max_row_sum_error(chain) < 1e-15L);
    const Distribution target = to_distribution(weighted_flows(lat.graph, 2, 0.9), flow_key);
    long double unreached = 1.0L;
    const std::vector<long double> pi = align(chain, target, &unreached);
    CHECK(unreached == 0.0L);
    CHECK(detailed_balance_error(chain, pi) < 1e-15L);
    CHECK(fixed_point_residual(chain, pi) < 1e-15L);

    const std::vector<long double> tv = exact_tv_decay(chain, target, 80);
    CHECK(static_cast<double>(tv[0]) == doctest::Approx(0.8858894873438814).epsilon(1e-13));
    CHECK(static_cast<double>(tv[1]) == doctest::Approx(0.58641785792916412).epsilon(1e-13));
    CHECK(static_cast<double>(tv[10]) == doctest::Approx(0.055420337861759955).epsilon(1e-11));
    CHECK(static_cast<double>(tv[80]) == doctest::Approx(1.0667251006124534e-09).epsilon(1e-6));
    for (std::size_t t = 1; t < tv.size(); ++t) CHECK(tv[t] <= tv[t - 1] + 1e-15L);
}

TEST_CASE("exact joint chains") {
    SUBCASE("triangle") {
        const OrientedMultigraph t = triangle();
        const JointParameters jp = compute_p(0.95, 2, 3, 2, 3, 1);
        const SparseChain chain = joint_chain_matrix(t, triangle_gens(), 2, 0.95, jp.p);
        CHECK(chain.size() == 9);
        const Distribution target = to_distribution(weighted_joint_states(t, 2, 0.95), joint_key);
        const std::vector<long double> pi = align(chain, target);
        CHECK(detailed_balance_error(chain, pi) < 1e-15L);
        const std::vector<long double> tv = exact_tv_decay(chain, target, 62);
        CHECK(static_cast<double>(tv[62]) == doctest::Approx(3.5153127463738532e-05).epsilon(1e-9));
    }
    SUBCASE("3x3 grid at p = 1/6") {
        const Lattice lat = grid_faces(3, 3);
        const SparseChain chain = joint_chain_matrix(lat.graph, lat.gens, 2, 0.95, 1.0 / 6.0);
        CHECK(chain.size() == 5488);
        const Distribution target = to_distribution(weighted_joint_states(lat.graph, 2, 0.95), joint_key);
        const std::vector<long double> tv = exact_tv_decay(chain, target, 318);
        CHECK(static_cast<double>(tv[100]) == doctest::Approx(0.024513815575148149).epsilon(1e-9));
        CHECK(static_cast<double>(tv[318]) == doctest::Approx(2.5114821476539401e-05).epsilon(1e-8));
    }
}

TEST_CASE("triangle flow chain reaches mu_flow exactly") {
    const OrientedMultigraph t = triangle();
    const SparseChain chain = flow_chain_matrix(t, triangle_gens(), 2, 0.5);
    CHECK(chain.size() == 2);
    const std::vector<long double> tv =
        exact_tv_decay(chain, to_distribution(weighted_flows(t, 2, 0.5), flow_key), 69);
    // One move resamples the only generator from its conditional law.
    CHECK(static_cast<double>(tv[1]) < 1e-15);
    CHECK(static_cast<double>(tv[69]) < 1e-15);
}

TEST_CASE("total variation") {
    const Distribution a{{{0}, 0.5L}, {{1}, 0.5L}};
    const Distribution b{{{0}, 1.0L}};
    CHECK(static_cast<double>(total_variation(a, b)) == doctest::Approx(0.5));
    CHECK(static_cast<double>(total_variation(a, a)) == 0.0);
    CHECK(static_cast<double>(max_abs_difference(a, b)) == doctest::Approx(0.5));
}
