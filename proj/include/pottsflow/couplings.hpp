#pragma once

#include <cstdint>
#include <vector>

#include "pottsflow/flow.hpp"
#include "pottsflow/graph.hpp"
#include "pottsflow/rng.hpp"

namespace pottsflow {

/// Potts colouring with colours 1..q; dead vertices hold 0.
struct PottsConfig {
    Residue q = 2;
    std::vector<std::uint32_t> spins;

    bool operator==(const PottsConfig&) const = default;
};

/// Parameter correspondences between the flow, random-cluster and Potts models.
/// A flow model at x in (0,1) matches the random-cluster model at y = qx/(1-x) and
/// the Potts model at w = (1 + (q-1)x)/(1-x) = y + 1.
namespace param_map {

double rc_from_flow(double x, Residue q);
double potts_from_flow(double x, Residue q);
double flow_from_rc(double y, Residue q);
double flow_from_potts(double w, Residue q);

}  // namespace param_map

/// Keeps supp(f) and adds every other live edge independently with probability x,
/// in edge-id order. Maps mu_flow(q, x) to mu_RC(q, qx/(1-x)).
template <RandomSource R>
EdgeSubset flow_to_rc(const OrientedMultigraph& g, const FlowState& f, double x, R& rng) {
    EdgeSubset out(g.edge_capacity());
    for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
        if (!g.edge_live(e)) continue;
        if (f.in_support(e) || rng.bernoulli(x)) out.insert(e);
    }
    return out;
}

/// Uniform flow supported in F. Maps mu_RC(q, qx/(1-x)) to mu_flow(q, x).
template <RandomSource R>
FlowState rc_to_flow(const OrientedMultigraph& g, const EdgeSubset& f_edges, Residue q, R& rng) {
    return uniform_flow_on(g, f_edges, q, rng);
}

/// Edwards-Sokal lift: one uniform colour per component of (V, F), drawn in order
/// of each component's smallest vertex. Maps mu_RC(q, w-1) to mu_Potts(q, w).
template <RandomSource R>
PottsConfig rc_to_potts(const OrientedMultigraph& g, const EdgeSubset& f_edges, Residue q, R& rng) {
    const std::vector<std::uint32_t> label = component_labels(g, f_edges);
    std::vector<std::uint32_t> colour_of;
    PottsConfig out{q, std::vector<std::uint32_t>(g.vertex_capacity(), 0)};
    for (VertexId v = 0; v < g.vertex_capacity(); ++v) {
        if (label[v] == kNoLabel) continue;
        if (label[v] == colour_of.size())
            colour_of.push_back(1 + static_cast<std::uint32_t>(rng.uniform_index(q)));
        out.spins[v] = colour_of[label[v]];
    }
    return out;
}

/// flow_to_rc followed by rc_to_potts: mu_flow(q, x) to mu_Potts(q, (1+(q-1)x)/(1-x)).
template <RandomSource R>
PottsConfig flow_to_potts(const OrientedMultigraph& g, const FlowState& f, double x, R& rng) {
    return rc_to_potts(g, flow_to_rc(g, f, x, rng), f.q(), rng);
}

}  // namespace pottsflow
