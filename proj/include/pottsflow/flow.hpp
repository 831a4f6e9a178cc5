#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pottsflow/cycle_space.hpp"
#include "pottsflow/graph.hpp"
#include "pottsflow/rng.hpp"

namespace pottsflow {

using Residue = std::uint32_t;

/// Edge function with values in Z_q and an incrementally maintained support size.
/// Conservation is a property of how the state is produced (zero flow, adding
/// multiples of generators, completion over a forest); is_flow checks it.
class FlowState {
public:
    FlowState() = default;
    /// All-zero state; throws InvalidArgument when q < 2.
    FlowState(std::size_t edge_capacity, Residue q);

    Residue q() const noexcept { return q_; }
    std::size_t edge_capacity() const noexcept { return values_.size(); }
    Residue value(EdgeId e) const { return values_[e]; }
    std::span<const Residue> values() const noexcept { return values_; }
    std::size_t support_size() const noexcept { return support_; }
    bool in_support(EdgeId e) const { return values_[e] != 0; }

    void set(EdgeId e, Residue v);

    /// f <- f + t * chi_C, touching only the support of C.
    void add_multiple(Residue t, const SignedEvenSet& c) {
        for (const auto& [e, sign] : c.entries()) {
            Residue& v = values_[e];
            const Residue before = v;
            v = sign > 0 ? (v + t) % q_ : (v + q_ - t) % q_;
            support_ += (v != 0) - (before != 0);
        }
    }

    bool operator==(const FlowState& other) const {
        return q_ == other.q_ && values_ == other.values_;
    }

private:
    Residue q_ = 2;
    std::vector<Residue> values_;
    std::size_t support_ = 0;
};

FlowState zero_flow(const OrientedMultigraph& g, Residue q);

/// Functional form of FlowState::add_multiple.
FlowState add_multiple(FlowState f, Residue t, const SignedEvenSet& c);

/// a_t = #{e in C : (f + t chi_C)(e) = 0} for t = 0..q-1, written into `counts`
/// (size q). Every edge of C is zero for exactly one shift, so the counts sum to |C|.
inline void zero_count_on(const FlowState& f, const SignedEvenSet& c, std::span<std::size_t> counts) {
    const Residue q = f.q();
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (const auto& [e, sign] : c.entries()) {
        const Residue v = f.value(e);
        // sign * t == -v  (mod q), and sign is its own inverse.
        const Residue t = sign > 0 ? (q - v) % q : v;
        ++counts[t];
    }
}

std::vector<std::size_t> zero_count_on(const FlowState& f, const SignedEvenSet& c);

/// Support size recomputed from the values.
std::size_t recount_support(const FlowState& f);

/// Conservation mod q at every live vertex, zero on dead edges.
bool is_flow(const FlowState& f, const OrientedMultigraph& g);

/// Given values on the non-forest edges of F (all other edges ignored), fills the
/// forest edges so that f becomes the unique flow supported in F with those values.
/// Edges outside F are set to zero.
void complete_over_forest(const OrientedMultigraph& g, const EdgeSubset& f_edges,
                          const SpanningForest& forest, FlowState& f);

/// Exact uniform sample among the q^{|F|-|V|+c(F)} flows supported within F:
/// independent uniform residues on the non-forest edges of F, in edge-id order,
/// completed over the forest.
template <RandomSource R>
FlowState uniform_flow_on(const OrientedMultigraph& g, const EdgeSubset& f_edges, Residue q, R& rng) {
    const SpanningForest forest = spanning_forest(g, f_edges);
    FlowState f(g.edge_capacity(), q);
    for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
        if (!g.edge_live(e) || !f_edges.contains(e) || forest.tree_edge[e]) continue;
        f.set(e, static_cast<Residue>(rng.uniform_index(q)));
    }
    complete_over_forest(g, f_edges, forest, f);
    return f;
}

}  // namespace pottsflow
