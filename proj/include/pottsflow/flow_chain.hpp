#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pottsflow/cycle_space.hpp"
#include "pottsflow/flow.hpp"
#include "pottsflow/rng.hpp"

namespace pottsflow {

/// Result of a mixing-time formula. Outside its range of x the formula does not
/// apply; that is reported, not thrown.
struct MixingBound {
    bool in_range = false;
    double threshold = 0.0;   // x must exceed this
    double xi = 0.0;          // x - threshold
    double real_bound = 0.0;  // un-rounded value of the formula
    std::uint64_t steps = 0;  // ceil(real_bound) when in range
};

/// Steps after which the flow chain is delta-close to mu_flow, for a generating
/// set of size r with d(C) <= d and iota(C) <= iota:
///     ceil( 4r/(d iota) * log(r/delta) / xi ),  xi = x - (1 - 2/((d+1) iota)).
/// Requires d >= 2, iota >= 1, 0 < delta < 1, r >= 1; throws InvalidArgument otherwise.
MixingBound flow_mixing_time_bound(std::size_t r, double x, std::size_t d, std::size_t iota,
                                   double delta);

/// Selection probabilities of the heat-bath move along one generator, from the
/// zero counts a_t: P(t) proportional to x^{-a_t}. Computed as x^{a_max - a_t} so
/// no weight exceeds 1.
void heat_bath_distribution(std::span<const std::size_t> zero_counts, double x,
                            std::span<double> probabilities);

/// Heat-bath dynamics on Z_q-flows along an even generating set.
///
/// One step picks a generator C uniformly and replaces f by f + t chi_C, with t
/// (zero included) drawn with probability proportional to mu_flow(f + t chi_C).
/// Holds a reference to the generating set; keep it alive. Not thread-safe: it owns
/// scratch buffers and an edge-touch counter.
class FlowChain {
public:
    /// Throws InvalidArgument unless 0 < x < 1, q >= 2 and the set is nonempty.
    FlowChain(const EvenGenSet& gens, double x, Residue q);

    double x() const noexcept { return x_; }
    Residue q() const noexcept { return q_; }
    const EvenGenSet& gens() const noexcept { return *gens_; }

    template <RandomSource R>
    void step(FlowState& f, R& rng) {
        const SignedEvenSet& c = (*gens_)[rng.uniform_index(gens_->size())];
        zero_count_on(f, c, counts_);
        std::size_t a_max = 0;
        for (std::size_t a : counts_) a_max = std::max(a_max, a);
        for (Residue t = 0; t < q_; ++t) weights_[t] = powers_[a_max - counts_[t]];
        const auto t = static_cast<Residue>(rng.discrete(weights_));
        if (t != 0) f.add_multiple(t, c);
        edge_touches_ += 2 * c.size();
    }

    void run(FlowState& f, std::uint64_t steps, Rng& rng) {
        for (std::uint64_t i = 0; i < steps; ++i) step(f, rng);
    }

    /// Generator-edge visits so far (zero counting plus update, per step).
    std::uint64_t edge_touches() const noexcept { return edge_touches_; }

private:
    const EvenGenSet* gens_;
    double x_;
    Residue q_;
    std::vector<double> powers_;  // x^k for k = 0..ell
    std::vector<std::size_t> counts_;
    std::vector<double> weights_;
    std::uint64_t edge_touches_ = 0;
};

struct FlowSample {
    FlowState flow;
    MixingBound bound;
    std::uint64_t steps = 0;
};

/// Runs the chain from the zero flow for the mixing bound at (d, iota, delta), or
/// for `steps_override` steps when given. Throws OutOfRange (carrying the
/// threshold) when the bound does not apply and no override is given.
FlowSample sample_flow(const EvenGenSet& gens, double x, Residue q, std::size_t d, std::size_t iota,
                       double delta, Rng& rng, std::optional<std::uint64_t> steps_override = {});

}  // namespace pottsflow
