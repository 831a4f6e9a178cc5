#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pottsflow/error.hpp"
#include "pottsflow/io.hpp"
#include "pottsflow/lattice.hpp"
#include "support/graphs.hpp"

using namespace pottsflow;
using namespace pottsflow::testing;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("pottsflow_test_io_" + name);
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("load_instance from a lattice spec") {
    const Instance inst = load_instance("grid:3x3");
    CHECK(inst.graph.vertex_count() == 9);
    CHECK(inst.gens.size() == 4);
    CHECK(inst.gens_source == "faces");
    CHECK(inst.gens.family_bound().has_value());
}

TEST_CASE("load_instance from files") {
    const auto graph = write_temp("k4.txt", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    const Instance inst = load_instance(graph.string());
    CHECK(inst.gens_source == "fundamental-cycles");
    CHECK(inst.gens.size() == 3);

    // Three triangles through vertex 0 generate; two do not.
    const auto good = write_temp("k4_good.txt", "3\n3 0 + 3 + 1 -\n3 0 + 4 + 2 -\n3 1 + 5 + 2 -\n");
    CHECK(load_instance(graph.string(), good.string()).gens.size() == 3);
    const auto bad = write_temp("k4_bad.txt", "2\n3 0 + 3 + 1 -\n3 0 + 4 + 2 -\n");
    CHECK_THROWS_AS(load_instance(graph.string(), bad.string()), InvalidGenerator);
    const auto not_a_flow = write_temp("k4_nonflow.txt", "1\n3 0 + 3 + 1 +\n");
    CHECK_THROWS_AS(load_instance(graph.string(), not_a_flow.string()), InvalidGenerator);

    CHECK_THROWS_AS(load_instance("/nonexistent/graph.txt"), IoError);
    CHECK_THROWS_AS(load_instance(graph.string(), "/nonexistent/gens.txt"), IoError);

    std::filesystem::remove(graph);
    std::filesystem::remove(good);
    std::filesystem::remove(bad);
    std::filesystem::remove(not_a_flow);
}

TEST_CASE("flow JSON round trip") {
    const Lattice lat = grid_faces(3, 3);
    FlowState f = zero_flow(lat.graph, 5);
    f.add_multiple(2, lat.gens[0]);
    f.add_multiple(4, lat.gens[3]);
    const nlohmann::json j = flow_to_json(f, lat.graph);
    CHECK(j["q"] == 5);
    CHECK(j["values"].size() == lat.graph.edge_capacity());
    CHECK(flow_from_json(j, lat.graph) == f);

    nlohmann::json out_of_range = j;
    out_of_range["values"][0] = 5;
    CHECK_THROWS_AS(flow_from_json(out_of_range, lat.graph), InvalidArgument);
    CHECK_THROWS_AS(flow_from_json(nlohmann::json::object(), lat.graph), InvalidArgument);

    // Tombstoned edges read as -1.
    const OrientedMultigraph g = triangle().delete_edge(1);
    const nlohmann::json dead = flow_to_json(zero_flow(g, 2), g);
    CHECK(dead["values"][1] == -1);
    CHECK(flow_from_json(dead, g).support_size() == 0);
}

TEST_CASE("small JSON helpers") {
    const OrientedMultigraph g = k4();
    CHECK(subset_to_json(EdgeSubset::of(g, {4, 1})) == nlohmann::json::array({1, 4}));
    const nlohmann::json p = params_to_json(GenParams{4, 1, 4, 2});
    CHECK(p["d"] == 4);
    CHECK(p["iota"] == 1);
    CHECK(p["ell"] == 4);
    CHECK(p["s"] == 2);
    const nlohmann::json b = bound_to_json(flow_mixing_time_bound(4, 0.9, 4, 1, 0.01));
    CHECK(b["steps"] == 80);
    CHECK(b["in_range"] == true);
}
