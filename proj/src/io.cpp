#include "pottsflow/io.hpp"

#include <fstream>

#include "pottsflow/error.hpp"
#include "pottsflow/lattice.hpp"

namespace pottsflow {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return in;
}

}  // namespace

Instance load_instance(const std::string& graph, const std::string& gens) {
    Instance out;
    out.graph_source = graph;
    out.gens_source = gens;
    if (is_lattice_spec(graph)) {
        Lattice lat = lattice_from_spec(graph);
        out.graph = std::move(lat.graph);
        if (gens == "auto") {
            out.gens = std::move(lat.gens);
            out.gens_source = "faces";
        }
    } else {
        std::ifstream in = open_input(graph);
        out.graph = read_graph(in);
        if (gens == "auto") {
            out.gens = fundamental_cycles(out.graph);
            out.gens_source = "fundamental-cycles";
        }
    }
    if (gens != "auto") {
        std::ifstream in = open_input(gens);
        out.gens = read_gens(in, out.graph);
        if (!verify_generates(out.gens, out.graph))
            throw InvalidGenerator("'" + gens + "' does not generate the flow space of the graph");
    }
    return out;
}

nlohmann::json flow_to_json(const FlowState& f, const OrientedMultigraph& g) {
    nlohmann::json values = nlohmann::json::array();
    for (EdgeId e = 0; e < f.edge_capacity(); ++e) {
        if (g.edge_live(e)) {
            values.push_back(f.value(e));
        } else {
            values.push_back(-1);
        }
    }
    return {{"q", f.q()}, {"values", std::move(values)}};
}

FlowState flow_from_json(const nlohmann::json& j, const OrientedMultigraph& g) {
    if (!j.is_object() || !j.contains("q") || !j.contains("values") || !j["values"].is_array())
        throw InvalidArgument("flow JSON needs \"q\" and a \"values\" array");
    const auto q = j["q"].get<Residue>();
    const auto& values = j["values"];
    if (values.size() != g.edge_capacity())
        throw InvalidArgument("flow JSON has " + std::to_string(values.size()) + " values for " +
                              std::to_string(g.edge_capacity()) + " edges");
    FlowState f(g.edge_capacity(), q);
    for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
        const auto v = values[e].get<long long>();
        if (!g.edge_live(e)) {
            if (v != -1) throw InvalidArgument("tombstoned edge " + std::to_string(e) + " must hold -1");
            continue;
        }
        if (v < 0 || v >= static_cast<long long>(q))
            throw InvalidArgument("value on edge " + std::to_string(e) + " is outside Z_q");
        f.set(e, static_cast<Residue>(v));
    }
    return f;
}

nlohmann::json subset_to_json(const EdgeSubset& f) { return f.ids(); }

nlohmann::json params_to_json(const GenParams& p) {
    return {{"d", p.d}, {"iota", p.iota}, {"ell", p.ell}, {"s", p.s}};
}

nlohmann::json bound_to_json(const MixingBound& b) {
    nlohmann::json j = {{"in_range", b.in_range}, {"threshold", b.threshold}};
    if (b.in_range) {
        j["xi"] = b.xi;
        j["real_bound"] = b.real_bound;
        j["steps"] = b.steps;
    }
    return j;
}

}  // namespace pottsflow
