#include <doctest.h>

#include <sstream>

#include "pottsflow/error.hpp"
#include "pottsflow/graph.hpp"
#include "pottsflow/lattice.hpp"
#include "support/graphs.hpp"

using namespace pottsflow;
using namespace pottsflow::testing;

TEST_CASE("from_edge_list keeps order, loops and parallel edges") {
    const OrientedMultigraph t = triangle();
    CHECK(t.vertex_count() == 3);
    CHECK(t.edge_count() == 3);
    CHECK(t.edge(2).tail == 2);
    CHECK(t.edge(2).head == 0);

    const OrientedMultigraph loop = OrientedMultigraph::from_edge_list(1, {{0, 0}});
    CHECK(loop.edge_count() == 1);
    CHECK(loop.is_loop(0));
    CHECK(loop.incident(0).size() == 1);

    const OrientedMultigraph twin = OrientedMultigraph::from_edge_list(2, {{0, 1}, {0, 1}});
    CHECK(twin.edge_count() == 2);
    CHECK(twin.incident(0) == std::vector<EdgeId>{0, 1});

    CHECK_THROWS_AS(OrientedMultigraph::from_edge_list(2, {{0, 2}}), InvalidArgument);
}

TEST_CASE("contract merges endpoints and tombstones") {
    SUBCASE("triangle: remaining edges become parallel") {
        const OrientedMultigraph g = triangle().contract(0);
        CHECK(g.vertex_count() == 2);
        CHECK(g.edge_count() == 2);
        CHECK_FALSE(g.edge_live(0));
        const Edge a = g.edge(1);
        const Edge b = g.edge(2);
        CHECK(std::minmax(a.tail, a.head) == std::minmax(b.tail, b.head));
        CHECK_FALSE(a.is_loop());
    }
    SUBCASE("double edge: the twin becomes a loop") {
        const OrientedMultigraph g = OrientedMultigraph::from_edge_list(2, {{0, 1}, {0, 1}}).contract(0);
        CHECK(g.vertex_count() == 1);
        CHECK(g.edge_count() == 1);
        CHECK(g.is_loop(1));
    }
    SUBCASE("path 0-1-2") {
        const OrientedMultigraph g = path(3).contract(0);
        CHECK(g.vertex_count() == 2);
        CHECK(g.edge_count() == 1);
        CHECK(g.edge_live(1));
    }
    SUBCASE("loops and dead edges are rejected") {
        const OrientedMultigraph g = triangle_with_loop();
        CHECK_THROWS_AS(g.contract(3), InvalidArgument);
        CHECK_THROWS_AS(g.contract(0).contract(0), InvalidArgument);
        CHECK_THROWS_AS(g.delete_edge(0).delete_edge(0), InvalidArgument);
    }
}

TEST_CASE("components") {
    CHECK(components(triangle().delete_edge(1)) == 1);
    CHECK(components(OrientedMultigraph::from_edge_list(2, {})) == 2);
    CHECK(components(grid_faces(3, 3).graph) == 1);
    const OrientedMultigraph p = path(4);
    CHECK(components(p.delete_edge(1)) == components(p) + 1);
}

TEST_CASE("contraction invariants on every edge of small graphs") {
    for (const OrientedMultigraph& g : {triangle(), k4(), glued_triangles(), double_edge_pendant(),
                                         triangle_with_loop(), grid_faces(3, 3).graph}) {
        for (EdgeId e : g.live_edges()) {
            if (g.is_loop(e)) continue;
            const OrientedMultigraph h = g.contract(e);
            CHECK(h.edge_count() == g.edge_count() - 1);
            CHECK(h.vertex_count() == g.vertex_count() - 1);
            CHECK(components(h) == components(g));
            for (EdgeId f : g.live_edges())
                if (f != e) CHECK(h.edge_live(f));
        }
    }
}

TEST_CASE("spanning forest and cycle rank") {
    const OrientedMultigraph g = grid_faces(3, 3).graph;
    const SpanningForest forest = spanning_forest(g);
    std::size_t tree_edges = 0;
    for (bool b : forest.tree_edge) tree_edges += b;
    CHECK(tree_edges == 8);
    CHECK(forest.component_count == 1);
    CHECK(forest.preorder.size() == 9);
    CHECK(cycle_rank(g) == 4);
    CHECK(cycle_rank(triangle_with_loop()) == 2);
    CHECK(cycle_rank(path(5)) == 0);
}

TEST_CASE("component labels follow smallest vertex") {
    const OrientedMultigraph g = OrientedMultigraph::from_edge_list(5, {{3, 4}, {0, 2}});
    const auto labels = component_labels(g, EdgeSubset::all(g));
    CHECK(labels == std::vector<std::uint32_t>{0, 1, 0, 2, 2});
    const auto dead = component_labels(g.contract(0), EdgeSubset::all(g.contract(0)));
    CHECK(dead[4] == kNoLabel);
}

TEST_CASE("edge subsets") {
    const OrientedMultigraph g = triangle();
    EdgeSubset f = EdgeSubset::of(g, {2, 0});
    CHECK(f.size() == 2);
    CHECK(f.ids() == std::vector<EdgeId>{0, 2});
    f.insert(0);
    CHECK(f.size() == 2);
    f.erase(0);
    CHECK(f.ids() == std::vector<EdgeId>{2});
    CHECK(components(g, f) == 2);
    CHECK_THROWS_AS(EdgeSubset::of(g.contract(0), {0}), InvalidArgument);
}

TEST_CASE("graph text format round trip") {
    std::stringstream ss;
    write_graph(ss, triangle_with_loop());
    const OrientedMultigraph g = read_graph(ss);
    CHECK(g.edge_count() == 4);
    CHECK(g.is_loop(3));
    std::istringstream bad("3 2\n0 1\n");
    CHECK_THROWS_AS(read_graph(bad), IoError);
}
