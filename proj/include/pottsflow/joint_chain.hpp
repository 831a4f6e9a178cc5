#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pottsflow/cycle_space.hpp"
#include "pottsflow/flow.hpp"
#include "pottsflow/flow_chain.hpp"
#include "pottsflow/graph.hpp"
#include "pottsflow/rng.hpp"

namespace pottsflow {

/// A flow together with an edge set containing its support.
struct JointState {
    FlowState flow;
    EdgeSubset edges;

    bool operator==(const JointState&) const = default;
};

/// (zero flow, all live edges): the start state of the joint chain.
JointState initial_joint_state(const OrientedMultigraph& g, Residue q);

/// supp(f) is contained in F.
bool support_within(const JointState& st);

/// Flow-move probability p balancing the two path-coupling contractions, and the
/// resulting contraction rate alpha:
///     p     = (qr + qr ell (1-x)) / (qr + (q-1)sm + qm + qr ell (1-x))
///     alpha = (q - (q-1) ell s (1-x)) / (qr + (q-1)sm + qm + qr ell (1-x))
struct JointParameters {
    double p = 0.0;
    double alpha = 0.0;
    double threshold = 0.0;  // x must exceed 1 - q/((q-1) ell s)
};

/// Throws OutOfRange when x <= 1 - q/((q-1) ell s), InvalidArgument on degenerate
/// counts.
JointParameters compute_p(double x, Residue q, std::size_t ell, std::size_t s, std::size_t m,
                          std::size_t r);

/// Steps after which the joint chain is delta-close to mu_flow-RC:
///     ceil( 2(m+r)/ell * log((2m+r)/delta) / xi ),  xi = x - (1 - q/((q-1) ell s)).
/// Requires ell >= 3, q >= 2, s >= 2, 0 < delta < 1.
MixingBound joint_mixing_time_bound(std::size_t m, std::size_t r, double x, Residue q,
                                    std::size_t ell, std::size_t s, double delta);

/// Glauber dynamics on pairs (f, F) with supp(f) in F: with probability p a flow
/// move (uniform generator, uniform shift, applied only when the result stays
/// supported in F), otherwise an edge move (uniform edge, added with probability x
/// when absent, removed with probability 1-x when present and carrying zero flow).
class JointChain {
public:
    /// Keeps references to g and gens. Throws InvalidArgument unless 0 < x < 1,
    /// 0 < p < 1 and both the edge set and the generating set are nonempty.
    JointChain(const OrientedMultigraph& g, const EvenGenSet& gens, double x, Residue q, double p);

    double p() const noexcept { return p_; }

    template <RandomSource R>
    void step(JointState& st, R& rng) {
        if (rng.bernoulli(p_)) {
            const SignedEvenSet& c = (*gens_)[rng.uniform_index(gens_->size())];
            const auto t = static_cast<Residue>(rng.uniform_index(q_));
            edge_touches_ += c.size();
            if (t == 0) return;
            for (const auto& se : c.entries())
                if (!st.edges.contains(se.edge)) return;
            st.flow.add_multiple(t, c);
            edge_touches_ += c.size();
        } else {
            const EdgeId e = edges_[rng.uniform_index(edges_.size())];
            ++edge_touches_;
            if (!st.edges.contains(e)) {
                if (rng.bernoulli(x_)) st.edges.insert(e);
            } else if (!st.flow.in_support(e)) {
                if (rng.bernoulli(1.0 - x_)) st.edges.erase(e);
            }
        }
    }

    void run(JointState& st, std::uint64_t steps, Rng& rng) {
        for (std::uint64_t i = 0; i < steps; ++i) step(st, rng);
    }

    std::uint64_t edge_touches() const noexcept { return edge_touches_; }

private:
    const EvenGenSet* gens_;
    std::vector<EdgeId> edges_;
    double x_;
    Residue q_;
    double p_;
    std::uint64_t edge_touches_ = 0;
};

struct JointSample {
    JointState state;
    JointParameters params;
    MixingBound bound;
    std::uint64_t steps = 0;
};

/// Solves for p, then runs from (0, E) for the mixing bound at (ell, s, delta) or
/// for `steps_override` steps. Throws OutOfRange below the threshold.
JointSample sample_joint(const OrientedMultigraph& g, const EvenGenSet& gens, double x, Residue q,
                         std::size_t ell, std::size_t s, double delta, Rng& rng,
                         std::optional<std::uint64_t> steps_override = {});

}  // namespace pottsflow
