#pragma once

#include <string>

#include <json.hpp>

#include "pottsflow/cycle_space.hpp"
#include "pottsflow/flow.hpp"
#include "pottsflow/flow_chain.hpp"
#include "pottsflow/graph.hpp"

namespace pottsflow {

/// A graph with an even generating set and where each came from.
struct Instance {
    OrientedMultigraph graph;
    EvenGenSet gens;
    std::string graph_source;
    std::string gens_source;
};

/// `graph` is a lattice spec ("grid:3x3", ...) or a graph file. `gens` is "auto"
/// (lattice faces, or fundamental cycles for a graph file) or a generating-set file,
/// which must generate the flow space. Throws IoError when a file cannot be read.
Instance load_instance(const std::string& graph, const std::string& gens = "auto");

/// {"q": q, "values": [...]} with -1 on tombstoned edges.
nlohmann::json flow_to_json(const FlowState& f, const OrientedMultigraph& g);
/// Inverse of flow_to_json. Throws InvalidArgument on a malformed document or a
/// value outside Z_q.
FlowState flow_from_json(const nlohmann::json& j, const OrientedMultigraph& g);

/// Sorted edge ids.
nlohmann::json subset_to_json(const EdgeSubset& f);
nlohmann::json params_to_json(const GenParams& p);
nlohmann::json bound_to_json(const MixingBound& b);

}  // namespace pottsflow
