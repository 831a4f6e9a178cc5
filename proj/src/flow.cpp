#include "pottsflow/flow.hpp"

#include <algorithm>

#include "pottsflow/error.hpp"

namespace pottsflow {

FlowState::FlowState(std::size_t edge_capacity, Residue q) : q_(q), values_(edge_capacity, 0) {
    if (q < 2) throw InvalidArgument("flow modulus q must be at least 2");
}

void FlowState::set(EdgeId e, Residue v) {
    v %= q_;
    support_ += (v != 0) - (values_.at(e) != 0);
    values_[e] = v;
}

FlowState zero_flow(const OrientedMultigraph& g, Residue q) { return FlowState(g.edge_capacity(), q); }

FlowState add_multiple(FlowState f, Residue t, const SignedEvenSet& c) {
    f.add_multiple(t % f.q(), c);
    return f;
}

std::vector<std::size_t> zero_count_on(const FlowState& f, const SignedEvenSet& c) {
    std::vector<std::size_t> counts(f.q(), 0);
    zero_count_on(f, c, counts);
    return counts;
}

std::size_t recount_support(const FlowState& f) {
    return static_cast<std::size_t>(
        std::count_if(f.values().begin(), f.values().end(), [](Residue v) { return v != 0; }));
}

bool is_flow(const FlowState& f, const OrientedMultigraph& g) {
    if (f.edge_capacity() != g.edge_capacity()) return false;
    const Residue q = f.q();
    std::vector<Residue> net(g.vertex_capacity(), 0);
    for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
        const Residue v = f.value(e);
        if (!g.edge_live(e)) {
            if (v != 0) return false;
            continue;
        }
        const Edge& ed = g.edge(e);
        net[ed.head] = (net[ed.head] + v) % q;
        net[ed.tail] = (net[ed.tail] + q - v) % q;
    }
    return std::all_of(net.begin(), net.end(), [](Residue v) { return v == 0; });
}

void complete_over_forest(const OrientedMultigraph& g, const EdgeSubset& f_edges,
                          const SpanningForest& forest, FlowState& f) {
    const Residue q = f.q();
    for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
        if (!g.edge_live(e) || !f_edges.contains(e) || forest.tree_edge[e]) f.set(e, 0);
    }
    // Leaves first: the parent edge of v is the only unknown at v once all of v's
    // descendants are settled.
    for (auto it = forest.preorder.rbegin(); it != forest.preorder.rend(); ++it) {
        const VertexId v = *it;
        const EdgeId pe = forest.parent_edge[v];
        if (pe == SpanningForest::kNoEdge) continue;
        Residue inflow = 0;  // net inflow at v from every F-edge except pe
        for (EdgeId e : g.incident(v)) {
            if (e == pe || !f_edges.contains(e)) continue;
            const Edge& ed = g.edge(e);
            if (ed.is_loop()) continue;
            const Residue val = f.value(e);
            inflow = ed.head == v ? (inflow + val) % q : (inflow + q - val) % q;
        }
        f.set(pe, g.edge(pe).head == v ? (q - inflow) % q : inflow);
    }
}

}  // namespace pottsflow
